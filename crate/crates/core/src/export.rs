//! Byte-stable serializations: canonical JSON, CSV and SVG.
//!
//! Canonical JSON sorts object keys and prints every float with 17
//! significant digits in scientific notation, so identical values always
//! produce identical bytes.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use crate::entropy::EntropyEstimate;
use crate::error::{Error, Result};
use crate::geometry::ConvexPolygon;
use crate::maps::PlanarVec;
use crate::rotation::RotationSetEstimate;

/// A float with 17 significant digits, e.g. `5.0000000000000000e-1`.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = |out: &mut String, n: usize| out.extend(std::iter::repeat_n(' ', n));
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                let _ = write!(out, "{i}");
            } else if let Some(u) = n.as_u64() {
                let _ = write!(out, "{u}");
            } else {
                out.push_str(&format_float(n.as_f64().unwrap_or(f64::NAN)));
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            if items.iter().all(|i| !i.is_array() && !i.is_object()) {
                out.push('[');
                for (k, item) in items.iter().enumerate() {
                    if k > 0 {
                        out.push_str(", ");
                    }
                    write_value(out, item, indent);
                }
                out.push(']');
                return;
            }
            out.push_str("[\n");
            for (k, item) in items.iter().enumerate() {
                pad(out, indent + 2);
                write_value(out, item, indent + 2);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (k, key) in keys.iter().enumerate() {
                pad(out, indent + 2);
                out.push_str(&Value::String((*key).clone()).to_string());
                out.push_str(": ");
                write_value(out, &map[*key], indent + 2);
                out.push_str(if k + 1 < keys.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push('}');
        }
    }
}

/// Serializes `value` to canonical JSON with a trailing newline.
pub fn to_canonical_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::Runtime(e.to_string()))?;
    let mut out = String::new();
    write_value(&mut out, &v, 0);
    out.push('\n');
    Ok(out)
}

/// `start_x,start_y,avg_x,avg_y` per sample.
pub fn samples_csv(est: &RotationSetEstimate) -> String {
    let mut out = String::from("start_x,start_y,avg_x,avg_y\n");
    for s in &est.samples {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            format_float(s.start.x),
            format_float(s.start.y),
            format_float(s.displacement_average.x),
            format_float(s.displacement_average.y)
        );
    }
    out
}

/// `epsilon,n,count` per table cell.
pub fn entropy_csv(est: &EntropyEstimate) -> String {
    let mut out = String::from("epsilon,n,count\n");
    for (eps, row) in est.epsilons.iter().zip(&est.counts) {
        for (n, c) in est.lengths.iter().zip(row) {
            let _ = writeln!(out, "{},{n},{c}", format_float(*eps));
        }
    }
    out
}

/// SVG of a hull over a cloud of points, in the hull's own coordinates.
pub fn hull_svg(hull: &ConvexPolygon, cloud: &[PlanarVec]) -> String {
    let mut lo = PlanarVec::new(f64::INFINITY, f64::INFINITY);
    let mut hi = PlanarVec::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in hull.vertices().iter().chain(cloud) {
        lo = PlanarVec::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = PlanarVec::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    let span = (hi.x - lo.x).max(hi.y - lo.y).max(1e-9);
    let margin = 0.05 * span;
    let size = span + 2.0 * margin;
    let dot = span / 400.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="600" height="600" viewBox="{} {} {} {}">"#,
        lo.x - margin,
        -(lo.y + span + margin),
        size,
        size
    );
    out.push_str("<g transform=\"scale(1,-1)\">\n");
    for p in cloud {
        let _ = writeln!(
            out,
            r##"<circle cx="{}" cy="{}" r="{dot}" fill="#4477aa" fill-opacity="0.4"/>"##,
            p.x, p.y
        );
    }
    let _ = writeln!(
        out,
        r##"<path d="{}" fill="none" stroke="#cc3311" stroke-width="{}"/>"##,
        hull.svg_path(),
        2.0 * dot
    );
    out.push_str("</g>\n</svg>\n");
    out
}
