//! Matrix file format: `{"n": int, "k": int, "bands": [[diag], [off-1], ...,
//! [off-k]]}` where row `b` holds `Q[i][i + b]`.

use std::fs;
use std::path::Path;

use miqodd_core::BandedMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{IoError, Result};

#[derive(Debug, Serialize, Deserialize)]
struct MatrixFile {
    n: usize,
    k: usize,
    bands: Vec<Vec<f64>>,
}

pub fn matrix_to_json(q: &BandedMatrix) -> String {
    let file = MatrixFile { n: q.n(), k: q.k(), bands: q.bands().to_vec() };
    serde_json::to_string_pretty(&file).expect("matrix serialization cannot fail")
}

pub fn matrix_from_json(text: &str) -> Result<BandedMatrix> {
    let file: MatrixFile =
        serde_json::from_str(text).map_err(|e| IoError::parse("<matrix json>", e.to_string()))?;
    Ok(BandedMatrix::from_bands(file.n, file.k, file.bands)?)
}

pub fn write_matrix(path: &Path, q: &BandedMatrix) -> Result<()> {
    fs::write(path, matrix_to_json(q)).map_err(|e| IoError::file(path.display().to_string(), e))
}

pub fn read_matrix(path: &Path) -> Result<BandedMatrix> {
    let text = fs::read_to_string(path)
        .map_err(|e| IoError::file(path.display().to_string(), e))?;
    matrix_from_json(&text)
        .map_err(|e| IoError::parse(path.display().to_string(), e.to_string()))
}
