//! Geodesic farthest-edge Voronoi diagram on the boundary of a simple polygon
//! and the geodesic edge center.

pub mod boundary_voronoi;
pub mod center;
pub mod coarse_cover;
pub mod envelope;
pub mod farthest;
pub mod forms;
pub mod geom;
pub mod io;
pub mod oracle;
pub mod shortest_paths;
pub mod triangulation;

pub use geom::{BoundaryCursor, Chord, GeomError, Point2, PolygonBoundary};
pub use shortest_paths::Domain;
