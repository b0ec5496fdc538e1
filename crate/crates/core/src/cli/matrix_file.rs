//! `{"rows": r, "cols": c, "data": [[re, im], ...]}`, row-major.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;
use serde_json::{json, Value};

use super::CliError;
use crate::format::json_number;
use crate::linalg::ComplexMatrix;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixFile {
    rows: usize,
    cols: usize,
    data: Vec<[f64; 2]>,
}

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix, CliError> {
    let file: MatrixFile =
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("matrix file: {e}")))?;
    if file.data.iter().flatten().any(|x| !x.is_finite()) {
        return Err(CliError::Parse(
            "matrix file: entries must be finite".into(),
        ));
    }
    let data = file
        .data
        .iter()
        .map(|&[re, im]| Complex64::new(re, im))
        .collect();
    ComplexMatrix::new(file.rows, file.cols, data)
        .map_err(|e| CliError::Parse(format!("matrix file: {e}")))
}

pub fn read_matrix(path: &Path) -> Result<ComplexMatrix, CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_matrix(&text).map_err(|e| match e {
        CliError::Parse(msg) => CliError::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Compact JSON with 17 significant digits per component, newline-terminated.
pub fn matrix_to_json(m: &ComplexMatrix) -> String {
    let data: Vec<Value> = m
        .data()
        .iter()
        .map(|z| Value::Array(vec![json_number(z.re), json_number(z.im)]))
        .collect();
    let mut s = json!({ "rows": m.rows(), "cols": m.cols(), "data": data }).to_string();
    s.push('\n');
    s
}
