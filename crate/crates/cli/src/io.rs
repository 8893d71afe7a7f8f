//! File input and atomic output.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use tempfile::NamedTempFile;

use crate::error::{CliError, Result};
use crate::manifest::{Report, RunManifest};

/// Reads a single numeric column. A first line that does not parse is taken
/// as a header; blank lines are skipped; only the first comma-separated field
/// of each line is used.
pub fn read_column(path: &Path) -> Result<Vec<f64>> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: shown.clone(),
        source,
    })?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let field = line.split(',').next().unwrap_or("").trim();
        if field.is_empty() {
            continue;
        }
        match field.parse::<f64>() {
            Ok(v) if v.is_finite() => out.push(v),
            _ if i == 0 => continue,
            _ => {
                return Err(CliError::Parse {
                    path: shown,
                    line: i + 1,
                    text: field.to_string(),
                })
            }
        }
    }
    if out.is_empty() {
        return Err(CliError::Usage(format!("{shown} contains no numbers")));
    }
    Ok(out)
}

/// Writes `bytes` to `path` through a temporary file in the same directory,
/// so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let err = |source| CliError::Write {
        path: path.display().to_string(),
        source,
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir).map_err(err)?;
    tmp.write_all(bytes).map_err(err)?;
    tmp.as_file().sync_all().map_err(err)?;
    tmp.persist(path).map_err(|e| err(e.error))?;
    Ok(())
}

/// Writes to `path`, or to stdout when it is `None`.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => write_atomic(p, bytes),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Write {
                    path: "stdout".into(),
                    source,
                })
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s.into_bytes()
}

/// `<path>.manifest.json`, next to a CSV output.
pub fn sidecar_path(path: &Path) -> std::path::PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    path.with_file_name(name)
}

/// Writes CSV to `path` (or stdout) and, for files, the manifest and an
/// optional summary as a `.manifest.json` sidecar.
pub fn emit_csv<T: Serialize>(path: Option<&Path>, csv: &str, manifest: RunManifest, summary: T) -> Result<()> {
    emit(path, csv.as_bytes())?;
    if let Some(p) = path {
        let sidecar = Report {
            manifest,
            result: summary,
        };
        write_atomic(&sidecar_path(p), &to_json(&sidecar))?;
    }
    Ok(())
}
