//! File formats, the end-to-end pipeline, polygon generation and SVG output.

pub mod format;
pub mod gen;
pub mod pipeline;
pub mod svg;

pub use format::{load_polygon, save_polygon, ParseError, PolygonFile, PolygonFormat};
pub use gen::{gen_random_polygon, GenError};
pub use pipeline::{run, Emit, InputOutcome, RunConfig, RunReport};
pub use svg::{render_svg, SvgLayers};

/// `x` rounded to 9 significant digits.
pub fn round9(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.8e}").parse().unwrap_or(x)
}

/// Shortest decimal text of `round9(x)`.
pub fn fmt9(x: f64) -> String {
    let r = round9(x);
    // Avoid "-0".
    let r = if r == 0.0 { 0.0 } else { r };
    format!("{r}")
}

/// Rounds every float in a JSON tree to 9 significant digits.
pub fn round_json(v: serde_json::Value) -> serde_json::Value {
    use serde_json::Value;
    match v {
        Value::Number(n) if n.is_f64() => n.as_f64().and_then(|x| serde_json::Number::from_f64(round9(x))).map_or(Value::Null, Value::Number),
        Value::Array(a) => Value::Array(a.into_iter().map(round_json).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_json(v))).collect()),
        other => other,
    }
}
