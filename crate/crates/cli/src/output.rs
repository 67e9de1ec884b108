use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;

fn is_csv(path: &Path) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

fn write_json<T: Serialize + ?Sized>(value: &T, out: Option<&Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            std::io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn write_csv<T: Serialize>(rows: &[T], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)
            .context("this report has nested fields; write it as JSON instead")?;
    }
    let bytes = w.into_inner().context("buffering CSV")?;
    std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

/// Writes one report as pretty JSON, or as a one-row CSV for `.csv` paths.
pub fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) if is_csv(path) => write_csv(std::slice::from_ref(value), path),
        _ => write_json(value, out),
    }
}

/// Writes a table as a JSON array, or as CSV for `.csv` paths.
pub fn emit_rows<T: Serialize>(rows: &[T], out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) if is_csv(path) => write_csv(rows, path),
        _ => write_json(rows, out),
    }
}
