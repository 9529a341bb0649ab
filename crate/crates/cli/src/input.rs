use std::fs;
use std::io::Write;
use std::path::Path;

use crate::CliError;

/// One sample per line; blank lines and `#` comments are skipped.
pub fn parse_text(text: &str) -> Result<Vec<f64>, CliError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let v: f64 = t.parse().map_err(|_| {
            CliError::Data(format!("line {}: cannot parse `{t}` as a number", i + 1))
        })?;
        if !v.is_finite() {
            return Err(CliError::Data(format!(
                "line {}: non-finite sample `{t}`",
                i + 1
            )));
        }
        out.push(v);
    }
    Ok(out)
}

pub fn parse_binary(bytes: &[u8]) -> Result<Vec<f64>, CliError> {
    if !bytes.len().is_multiple_of(8) {
        return Err(CliError::Data(format!(
            "binary input of {} bytes is not a whole number of f64 samples",
            bytes.len()
        )));
    }
    Ok(bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
        .collect())
}

pub fn read_series(path: &Path, binary: bool) -> Result<Vec<f64>, CliError> {
    let io_err = |e: std::io::Error| CliError::Data(format!("{}: {e}", path.display()));
    if binary {
        parse_binary(&fs::read(path).map_err(io_err)?)
    } else {
        parse_text(&fs::read_to_string(path).map_err(io_err)?)
            .map_err(|e| e.with_context(&path.display().to_string()))
    }
}

pub fn write_series<W: Write>(values: &[f64], binary: bool, mut out: W) -> std::io::Result<()> {
    if binary {
        for v in values {
            out.write_all(&v.to_le_bytes())?;
        }
    } else {
        for v in values {
            writeln!(out, "{v}")?;
        }
    }
    out.flush()
}
