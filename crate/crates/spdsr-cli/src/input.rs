//! Batch input: symmetric matrices and matrix pairs from JSON or CSV
//! files.
//!
//! JSON input is an array of records. A matrix is `{"p": 3, "upper":
//! [m11, m12, m13, m22, m23, m33]}` (three values for p = 2) and a pair
//! wraps two of those as `{"x": ..., "y": ...}`. CSV input carries one
//! record per line: the upper-triangle values of the matrix, or of the
//! pair's two matrices back to back. Blank lines and lines starting
//! with `#` are skipped. Only upper triangles are accepted; a row
//! shaped like a full matrix is rejected rather than symmetrized, so a
//! transcription error cannot slip through as an averaged matrix.

use std::fs;
use std::path::Path;

use serde::Deserialize;
use spdsr::SymMat;

use crate::CliError;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixJson {
    p: usize,
    upper: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PairJson {
    x: MatrixJson,
    y: MatrixJson,
}

/// Reads a batch of `(x, y)` pairs, which must be non-empty.
pub fn read_pairs(path: &Path) -> Result<Vec<(SymMat, SymMat)>, CliError> {
    let (text, json) = load(path)?;
    let pairs = if json {
        json_pairs(&text)?
    } else {
        csv_pairs(&text)?
    };
    non_empty(pairs, path)
}

/// Reads a batch of single matrices, which must be non-empty.
pub fn read_singles(path: &Path) -> Result<Vec<SymMat>, CliError> {
    let (text, json) = load(path)?;
    let mats = if json {
        json_singles(&text)?
    } else {
        csv_singles(&text)?
    };
    non_empty(mats, path)
}

fn non_empty<T>(records: Vec<T>, path: &Path) -> Result<Vec<T>, CliError> {
    if records.is_empty() {
        return Err(CliError::Parse(format!(
            "{}: input contains no records",
            path.display()
        )));
    }
    Ok(records)
}

/// Reads the file and decides between JSON and CSV: by extension when
/// it is `.json` or `.csv`, otherwise by whether the first byte that is
/// not whitespace opens a JSON array or object.
fn load(path: &Path) -> Result<(String, bool), CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(|e| e.to_ascii_lowercase());
    let json = match ext.as_deref() {
        Some("json") => true,
        Some("csv") => false,
        _ => matches!(text.trim_start().as_bytes().first(), Some(b'[' | b'{')),
    };
    Ok((text, json))
}

fn json_pairs(text: &str) -> Result<Vec<(SymMat, SymMat)>, CliError> {
    let records: Vec<PairJson> = serde_json::from_str(text)
        .map_err(|e| CliError::Parse(format!("json input: {e}")))?;
    records
        .into_iter()
        .enumerate()
        .map(|(i, r)| {
            let x = json_matrix(r.x, &format!("record {i}, matrix x"))?;
            let y = json_matrix(r.y, &format!("record {i}, matrix y"))?;
            check_same_p(&x, &y, i)?;
            Ok((x, y))
        })
        .collect()
}

fn json_singles(text: &str) -> Result<Vec<SymMat>, CliError> {
    let records: Vec<MatrixJson> = serde_json::from_str(text)
        .map_err(|e| CliError::Parse(format!("json input: {e}")))?;
    records
        .into_iter()
        .enumerate()
        .map(|(i, m)| json_matrix(m, &format!("record {i}")))
        .collect()
}

fn json_matrix(m: MatrixJson, what: &str) -> Result<SymMat, CliError> {
    SymMat::from_upper(m.p, &m.upper)
        .map_err(|e| CliError::Parse(format!("{what}: {e}")))
}

fn check_same_p(x: &SymMat, y: &SymMat, record: usize) -> Result<(), CliError> {
    if x.p() == y.p() {
        return Ok(());
    }
    Err(CliError::Parse(format!(
        "record {record}: x is {px}x{px} but y is {py}x{py}",
        px = x.p(),
        py = y.p()
    )))
}

fn csv_pairs(text: &str) -> Result<Vec<(SymMat, SymMat)>, CliError> {
    csv_rows(text)?
        .into_iter()
        .map(|(line, vals)| {
            let p = match vals.len() {
                6 => 2,
                12 => 3,
                8 | 18 => return Err(full_matrix_row(line, vals.len(), "two full matrices")),
                n => {
                    return Err(CliError::Parse(format!(
                        "line {line}: a pair row carries 6 values (p=2) or 12 (p=3), got {n}"
                    )))
                }
            };
            let half = vals.len() / 2;
            let x = csv_matrix(p, &vals[..half], line, " x")?;
            let y = csv_matrix(p, &vals[half..], line, " y")?;
            Ok((x, y))
        })
        .collect()
}

fn csv_singles(text: &str) -> Result<Vec<SymMat>, CliError> {
    csv_rows(text)?
        .into_iter()
        .map(|(line, vals)| {
            let p = match vals.len() {
                3 => 2,
                6 => 3,
                4 | 9 => return Err(full_matrix_row(line, vals.len(), "a full matrix")),
                n => {
                    return Err(CliError::Parse(format!(
                        "line {line}: a matrix row carries 3 values (p=2) or 6 (p=3), got {n}"
                    )))
                }
            };
            csv_matrix(p, &vals, line, "")
        })
        .collect()
}

fn full_matrix_row(line: usize, n: usize, shape: &str) -> CliError {
    CliError::Parse(format!(
        "line {line}: {n} fields looks like {shape}; rows carry upper-triangle \
         values only (m11, m12, m22 for p=2; m11, m12, m13, m22, m23, m33 for p=3)"
    ))
}

fn csv_matrix(p: usize, upper: &[f64], line: usize, label: &str) -> Result<SymMat, CliError> {
    SymMat::from_upper(p, upper)
        .map_err(|e| CliError::Parse(format!("line {line}, matrix{label}: {e}")))
}

/// Splits CSV content into `(line_number, values)` rows, skipping blank
/// and `#`-comment lines. Line numbers are one-based.
fn csv_rows(text: &str) -> Result<Vec<(usize, Vec<f64>)>, CliError> {
    let mut rows = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut vals = Vec::new();
        for (f, field) in trimmed.split(',').enumerate() {
            let field = field.trim();
            let v: f64 = field.parse().map_err(|_| {
                CliError::Parse(format!(
                    "line {line}, field {}: expected a number, got {field:?}",
                    f + 1
                ))
            })?;
            vals.push(v);
        }
        rows.push((line, vals));
    }
    Ok(rows)
}
