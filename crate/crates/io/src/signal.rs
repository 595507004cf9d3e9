//! One-column CSV signal ingestion (header optional) and emission.

use std::fs;
use std::path::Path;

use crate::error::{IoError, Result};

/// Reads one float per line; a non-numeric first line is treated as a
/// header. Empty lines are skipped.
pub fn read_signal(path: &Path) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path)
        .map_err(|e| IoError::file(path.display().to_string(), e))?;
    parse_signal(&text).map_err(|msg| IoError::parse(path.display().to_string(), msg))
}

pub fn parse_signal(text: &str) -> std::result::Result<Vec<f64>, String> {
    let mut values = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line.contains(',') {
            return Err(format!("line {}: expected a single column", lineno + 1));
        }
        match line.parse::<f64>() {
            Ok(v) => values.push(v),
            Err(_) if lineno == 0 => continue, // header
            Err(_) => return Err(format!("line {}: not a number: {line:?}", lineno + 1)),
        }
    }
    if values.is_empty() {
        return Err("no values found".into());
    }
    Ok(values)
}

pub fn write_signal(path: &Path, values: &[f64]) -> Result<()> {
    let mut out = String::with_capacity(values.len() * 20);
    for v in values {
        out.push_str(&format!("{v}\n"));
    }
    fs::write(path, out).map_err(|e| IoError::file(path.display().to_string(), e))
}
