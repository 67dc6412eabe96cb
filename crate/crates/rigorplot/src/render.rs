//! Output formats for quantized plots: run-length text, JSON, a
//! Gnuplot-ready envelope dataset, and standalone SVG.
//!
//! Every emitter is a pure function of the plot, so identical plots
//! produce identical bytes. Frame parameters serialize as hex floats,
//! which round-trip losslessly because frames are dyadic by construction.

use std::fmt::Write as _;

use serde_json::{json, Value};
use thiserror::Error;

use crate::bigfloat::BigFloat;
use crate::plotter::{Plot2, XFrame, YFrame};

/// Failures of [`parse_json`].
#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed plot JSON: {0}")]
    Json(String),
}

fn bad(msg: impl Into<String>) -> FormatError {
    FormatError::Json(msg.into())
}

/// Two piecewise-linear curves in plot coordinates that bound the filled
/// band: at every column boundary, `low` sits at or below every filled
/// pixel of the adjacent columns and `high` at or above. All ordinates
/// are exact (`oy + z dy` with integer `z`).
#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    xs: Vec<BigFloat>,
    low: Vec<BigFloat>,
    high: Vec<BigFloat>,
}

impl Envelope {
    /// Number of boundaries (one more than the column count, except for
    /// empty plots).
    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn xs(&self) -> &[BigFloat] {
        &self.xs
    }

    pub fn low(&self) -> &[BigFloat] {
        &self.low
    }

    pub fn high(&self) -> &[BigFloat] {
        &self.high
    }
}

/// Envelope of a plot: at the boundary between two columns the lower
/// curve takes the smaller of the two runs' bottoms and the upper curve
/// the larger of their tops; the two outer boundaries use their single
/// adjacent column.
pub fn envelope(p2: &Plot2) -> Envelope {
    let xf = p2.xframe();
    let yf = p2.yframe();
    let w = xf.w();
    if w == 0 {
        return Envelope { xs: Vec::new(), low: Vec::new(), high: Vec::new() };
    }
    let n = (w + 1) as usize;
    let mut xs = Vec::with_capacity(n);
    let mut low = Vec::with_capacity(n);
    let mut high = Vec::with_capacity(n);
    for i in 0..=w {
        let left = if i > 0 { Some(p2.run(i - 1)) } else { None };
        let right = if i < w { Some(p2.run(i)) } else { None };
        let (z1, z2) = match (left, right) {
            (Some(a), Some(b)) => (a.0.min(b.0), a.1.max(b.1)),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => unreachable!("w > 0 gives every boundary a neighbor"),
        };
        xs.push(xf.boundary(i));
        low.push(yf.boundary(z1));
        high.push(yf.boundary(z2));
    }
    Envelope { xs, low, high }
}

/// Run-length text: a header `ox dx oy dy w h` (frames in hex float),
/// then one `i z1 z2` line per column.
pub fn emit_runs(p2: &Plot2) -> String {
    let xf = p2.xframe();
    let yf = p2.yframe();
    let mut out = format!(
        "{} {} {} {} {} {}\n",
        xf.ox().to_hex(),
        xf.dx().to_hex(),
        yf.oy().to_hex(),
        yf.dy().to_hex(),
        xf.w(),
        yf.h()
    );
    for (i, &(z1, z2)) in p2.runs().iter().enumerate() {
        let _ = writeln!(out, "{i} {z1} {z2}");
    }
    out
}

/// Shortest round-trip decimal of a plot-space value, for the formats
/// consumed by tools that read decimal floating point. Magnitudes outside
/// a readable window switch to scientific notation (plain formatting
/// would spell hundreds of digits).
fn dec(v: &BigFloat) -> String {
    let x = v.to_f64();
    if x == 0.0 {
        return "0".to_string();
    }
    let a = x.abs();
    if (1e-6..1e12).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// Gnuplot script and data file drawing the envelope band. The script
/// reads the companion data file by the name given in `data_name`.
pub fn emit_gnuplot(p2: &Plot2, data_name: &str) -> (String, String) {
    let env = envelope(p2);
    let xf = p2.xframe();
    let yf = p2.yframe();
    let mut data = String::from("# x low high\n");
    for i in 0..env.len() {
        let _ = writeln!(data, "{} {} {}", dec(&env.xs()[i]), dec(&env.low()[i]), dec(&env.high()[i]));
    }
    let script = format!(
        "set style fill solid 1.0 noborder\n\
         set xrange [{}:{}]\n\
         set yrange [{}:{}]\n\
         plot '{}' using 1:2:3 with filledcurves fc rgb '#5b8cb8' notitle\n",
        dec(&xf.boundary(0)),
        dec(&xf.boundary(xf.w())),
        dec(&yf.boundary(0)),
        dec(&yf.boundary(yf.h())),
        data_name,
    );
    (script, data)
}

/// Standalone SVG: the band polygon lives in plot pixel coordinates
/// inside a y-flipped group (SVG's y axis grows downward), so the numbers
/// in the file match the plot grid; axis extremes are labeled in plot
/// coordinates.
pub fn emit_svg(p2: &Plot2, width_px: u32, height_px: u32) -> String {
    let xf = p2.xframe();
    let yf = p2.yframe();
    let w = xf.w();
    let h = yf.h();
    let mut out = String::new();
    let _ = write!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width_px}\" height=\"{height_px}\" \
         viewBox=\"0 0 {w} {h}\" preserveAspectRatio=\"none\">\n"
    );
    let _ = writeln!(out, "<rect x=\"0\" y=\"0\" width=\"{w}\" height=\"{h}\" fill=\"#ffffff\"/>");
    if w > 0 {
        // the polygon walks the lower runs left to right, then the upper
        // runs right to left; integer grid coordinates keep bytes stable
        let mut points = String::new();
        for i in 0..=w {
            let left = if i > 0 { Some(p2.run(i - 1).0) } else { None };
            let right = if i < w { Some(p2.run(i).0) } else { None };
            let z = left.into_iter().chain(right).min().expect("boundary has a neighbor");
            let _ = write!(points, "{}{i},{z}", if i > 0 { " " } else { "" });
        }
        for i in (0..=w).rev() {
            let left = if i > 0 { Some(p2.run(i - 1).1) } else { None };
            let right = if i < w { Some(p2.run(i).1) } else { None };
            let z = left.into_iter().chain(right).max().expect("boundary has a neighbor");
            let _ = write!(points, " {i},{z}");
        }
        let _ = writeln!(out, "<g transform=\"matrix(1 0 0 -1 0 {h})\">");
        let _ = writeln!(out, "<polygon fill=\"#5b8cb8\" points=\"{points}\"/>");
        let _ = writeln!(out, "</g>");
    }
    let font = (h.max(20) / 20).max(1);
    let pad = font / 2;
    let _ = writeln!(
        out,
        "<text x=\"{pad}\" y=\"{y}\" font-size=\"{font}\" fill=\"#333333\">x: {x1} .. {x2}</text>",
        y = h.saturating_sub(pad).max(font),
        x1 = dec(&xf.boundary(0)),
        x2 = dec(&xf.boundary(w)),
    );
    let _ = writeln!(
        out,
        "<text x=\"{pad}\" y=\"{font}\" font-size=\"{font}\" fill=\"#333333\">y: {y1} .. {y2}</text>",
        y1 = dec(&yf.boundary(0)),
        y2 = dec(&yf.boundary(h)),
    );
    out.push_str("</svg>\n");
    out
}

/// JSON object with hex-float frame parameters and the raw runs; the
/// exact inverse of [`parse_json`].
pub fn emit_json(p2: &Plot2) -> String {
    let xf = p2.xframe();
    let yf = p2.yframe();
    let cols: Vec<Value> = p2.runs().iter().map(|&(z1, z2)| json!([z1, z2])).collect();
    let v = json!({
        "ox": xf.ox().to_hex(),
        "dx": xf.dx().to_hex(),
        "oy": yf.oy().to_hex(),
        "dy": yf.dy().to_hex(),
        "w": xf.w(),
        "h": yf.h(),
        "columns": cols,
    });
    let mut s = serde_json::to_string_pretty(&v).expect("plain json never fails to serialize");
    s.push('\n');
    s
}

fn hex_field(v: &Value, name: &str) -> Result<BigFloat, FormatError> {
    let s = v
        .get(name)
        .and_then(Value::as_str)
        .ok_or_else(|| bad(format!("missing hex-float field '{name}'")))?;
    BigFloat::parse_hex(s).map_err(|e| bad(format!("field '{name}': {e}")))
}

fn int_field(v: &Value, name: &str) -> Result<u32, FormatError> {
    v.get(name)
        .and_then(Value::as_u64)
        .and_then(|n| u32::try_from(n).ok())
        .ok_or_else(|| bad(format!("missing integer field '{name}'")))
}

/// Parse the [`emit_json`] format back into a plot.
pub fn parse_json(text: &str) -> Result<Plot2, FormatError> {
    let v: Value = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
    let w = int_field(&v, "w")?;
    let h = int_field(&v, "h")?;
    let xf = XFrame::new(hex_field(&v, "ox")?, hex_field(&v, "dx")?, w)
        .map_err(|e| bad(e.to_string()))?;
    let yf = YFrame::new(hex_field(&v, "oy")?, hex_field(&v, "dy")?, h)
        .map_err(|e| bad(e.to_string()))?;
    let cols = v
        .get("columns")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing 'columns' array"))?;
    if cols.len() != w as usize {
        return Err(bad(format!("expected {w} columns, found {}", cols.len())));
    }
    let mut runs = Vec::with_capacity(cols.len());
    for (i, c) in cols.iter().enumerate() {
        let pair = c.as_array().filter(|a| a.len() == 2);
        let z1 = pair.and_then(|a| a[0].as_u64()).and_then(|n| u32::try_from(n).ok());
        let z2 = pair.and_then(|a| a[1].as_u64()).and_then(|n| u32::try_from(n).ok());
        match (z1, z2) {
            (Some(z1), Some(z2)) if z1 <= z2 && z2 <= h => runs.push((z1, z2)),
            _ => return Err(bad(format!("column {i} is not a run within 0..={h}"))),
        }
    }
    Ok(Plot2::new(xf, yf, runs))
}
