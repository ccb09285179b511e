//! Deterministic file output: write-to-temp with atomic rename, shortest
//! round-trip float formatting.

use anyhow::{Context, Result};
use std::path::Path;

/// Write `bytes` to `path` atomically; an error never leaves a partial file
/// at the destination.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let file_name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".to_string());
    let tmp = path.with_file_name(format!("{file_name}.tmp"));
    let write = || -> std::io::Result<()> {
        std::fs::write(&tmp, bytes)?;
        std::fs::rename(&tmp, path)
    };
    write()
        .inspect_err(|_| {
            let _ = std::fs::remove_file(&tmp);
        })
        .with_context(|| format!("cannot write {}", path.display()))
}

/// Shortest decimal that round-trips to the same f64.
pub fn fmt_f64(value: f64) -> String {
    format!("{value}")
}
