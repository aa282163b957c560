//! Plain-text matrix files and number formatting.
//!
//! A matrix file holds `n` lines of `n` comma-separated numbers. An optional
//! `# scale=additive|multiplicative` line selects the scale; other lines
//! starting with `#` and blank lines are ignored. Numbers may be integers,
//! decimals or fractions `p/q`.

use crate::error::{Error, Result};
use crate::matrix::{ComparisonMatrix, Scale};

fn parse_field(raw: &str) -> std::result::Result<f64, String> {
    let t = raw.trim();
    if t.is_empty() {
        return Err("empty field".into());
    }
    let value = match t.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|_| format!("bad numerator in {t:?}"))?;
            let q: f64 = q.trim().parse().map_err(|_| format!("bad denominator in {t:?}"))?;
            if q == 0.0 {
                return Err(format!("zero denominator in {t:?}"));
            }
            p / q
        }
        None => t.parse::<f64>().map_err(|_| format!("cannot parse {t:?} as a number"))?,
    };
    if !value.is_finite() {
        return Err(format!("{t:?} is not finite"));
    }
    Ok(value)
}

/// Parses a matrix file. `scale` overrides any header; without either the
/// matrix is read as multiplicative.
pub fn parse_matrix(text: &str, scale: Option<Scale>, recip_tol: f64) -> Result<ComparisonMatrix> {
    let mut header_scale = None;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut row_lines = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            if let Some(v) = comment.trim().strip_prefix("scale=") {
                header_scale = Some(v.parse::<Scale>().map_err(|_| Error::Parse {
                    line: line_no,
                    column: 1,
                    message: format!("unknown scale {:?}", v.trim()),
                })?);
            }
            continue;
        }
        let mut row = Vec::new();
        for (col, field) in line.split(',').enumerate() {
            row.push(parse_field(field).map_err(|message| Error::Parse {
                line: line_no,
                column: col + 1,
                message,
            })?);
        }
        rows.push(row);
        row_lines.push(line_no);
    }
    let n = rows.len();
    if n == 0 {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "no matrix rows".into(),
        });
    }
    for (r, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Parse {
                line: row_lines[r],
                column: row.len().min(n) + 1,
                message: format!("row {} has {} fields, expected {n}", r + 1, row.len()),
            });
        }
    }
    let scale = scale.or(header_scale).unwrap_or(Scale::Multiplicative);
    ComparisonMatrix::from_rows(&rows, scale, recip_tol)
}

/// Formats `x` with 12 significant digits, dropping trailing zeros.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    let a = rounded.abs();
    if (1e-5..1e15).contains(&a) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

/// Writes a matrix file with a scale header.
pub fn format_matrix(m: &ComparisonMatrix) -> String {
    let mut out = format!("# scale={}\n", m.scale());
    for i in 0..m.n() {
        let fields: Vec<String> = m.row(i).iter().map(|&x| fmt_num(x)).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}
