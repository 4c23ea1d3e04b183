//! Polygon files: JSON `{"vertices": [[x, y], ...]}` and `.poly` text.

use crate::geom::{GeomError, Point2, PolygonBoundary};
use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
    #[error("JSON error at line {line}, column {column}: {msg}")]
    Json { line: usize, column: usize, msg: String },
    #[error("field `{field}`: {msg}")]
    Field { field: String, msg: String },
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error(transparent)]
    Geom(#[from] GeomError),
}

impl ParseError {
    /// Machine-readable form for error artifacts.
    pub fn to_json(&self) -> serde_json::Value {
        let kind = match self {
            ParseError::Io { .. } => "io",
            ParseError::Json { .. } => "json",
            ParseError::Field { .. } => "field",
            ParseError::Line { .. } => "line",
            ParseError::Geom(_) => "geometry",
        };
        let mut v = serde_json::json!({ "kind": kind, "message": self.to_string() });
        match self {
            ParseError::Json { line, column, .. } => {
                v["line"] = (*line).into();
                v["column"] = (*column).into();
            }
            ParseError::Line { line, .. } => v["line"] = (*line).into(),
            ParseError::Field { field, .. } => v["field"] = field.clone().into(),
            _ => {}
        }
        v
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolygonFormat {
    Json,
    Poly,
}

impl PolygonFormat {
    /// `.poly` by extension, JSON otherwise.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("poly") => PolygonFormat::Poly,
            _ => PolygonFormat::Json,
        }
    }
}

/// A parsed polygon file before validation.
#[derive(Clone, Debug, PartialEq)]
pub struct PolygonFile {
    pub vertices: Vec<Point2>,
    pub name: Option<String>,
    pub format: PolygonFormat,
}

impl PolygonFile {
    pub fn into_polygon(self) -> Result<PolygonBoundary, ParseError> {
        if self.vertices.len() < 3 {
            return Err(ParseError::Field { field: "vertices".into(), msg: format!("need at least 3 vertices, got {}", self.vertices.len()) });
        }
        Ok(PolygonBoundary::new(self.vertices)?)
    }
}

#[derive(Deserialize)]
struct JsonPolygon {
    vertices: Vec<serde_json::Value>,
    #[serde(default)]
    name: Option<String>,
}

pub fn parse_json(text: &str) -> Result<PolygonFile, ParseError> {
    let raw: JsonPolygon = serde_json::from_str(text).map_err(|e| ParseError::Json { line: e.line(), column: e.column(), msg: e.to_string() })?;
    let vertices = raw
        .vertices
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let field = || format!("vertices[{i}]");
            let arr = v.as_array().filter(|a| a.len() == 2).ok_or_else(|| ParseError::Field { field: field(), msg: "expected [x, y]".into() })?;
            let coord = |k: usize| {
                arr[k].as_f64().filter(|x| x.is_finite()).ok_or_else(|| ParseError::Field { field: format!("{}[{k}]", field()), msg: "expected a finite number".into() })
            };
            Ok(Point2::new(coord(0)?, coord(1)?))
        })
        .collect::<Result<Vec<_>, ParseError>>()?;
    Ok(PolygonFile { vertices, name: raw.name, format: PolygonFormat::Json })
}

/// One `x y` pair per line; `#` starts a comment.
pub fn parse_poly(text: &str) -> Result<PolygonFile, ParseError> {
    let mut vertices = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let nums: Vec<&str> = line.split_whitespace().collect();
        if nums.len() != 2 {
            return Err(ParseError::Line { line: i + 1, msg: format!("expected two numbers, got {}", nums.len()) });
        }
        let parse = |s: &str| s.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| ParseError::Line { line: i + 1, msg: format!("bad number `{s}`") });
        vertices.push(Point2::new(parse(nums[0])?, parse(nums[1])?));
    }
    Ok(PolygonFile { vertices, name: None, format: PolygonFormat::Poly })
}

pub fn read_polygon_file(path: &Path) -> Result<PolygonFile, ParseError> {
    let text = std::fs::read_to_string(path).map_err(|e| ParseError::Io { path: path.display().to_string(), msg: e.to_string() })?;
    match PolygonFormat::from_path(path) {
        PolygonFormat::Json => parse_json(&text),
        PolygonFormat::Poly => parse_poly(&text),
    }
}

/// Reads and validates a polygon, normalized to counterclockwise order.
pub fn load_polygon(path: &Path) -> Result<PolygonBoundary, ParseError> {
    read_polygon_file(path)?.into_polygon()
}

/// Text of a polygon file. Coordinates keep full precision so that loading
/// gives back the same polygon bit for bit.
pub fn polygon_to_string(poly: &PolygonBoundary, format: PolygonFormat) -> String {
    match format {
        PolygonFormat::Json => {
            let verts: Vec<[f64; 2]> = poly.vertices().iter().map(|p| [p.x, p.y]).collect();
            serde_json::to_string(&serde_json::json!({ "vertices": verts })).expect("serializable")
        }
        PolygonFormat::Poly => poly.vertices().iter().map(|p| format!("{:?} {:?}\n", p.x, p.y)).collect(),
    }
}

pub fn save_polygon(poly: &PolygonBoundary, path: &Path) -> std::io::Result<()> {
    std::fs::write(path, polygon_to_string(poly, PolygonFormat::from_path(path)))
}
