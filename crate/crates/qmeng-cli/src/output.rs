//! Deterministic artifact writing: fixed float formatting, atomic file
//! replacement, and the metadata sidecar.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

/// 17 significant digits; round-trips every finite f64 exactly.
pub fn g17(x: f64) -> String {
    format!("{x:.16e}")
}

/// One CSV line from pre-formatted fields.
pub fn csv_line(fields: &[String]) -> String {
    fields.join(",")
}

/// Write via a temporary file and rename, so readers never see a partial
/// artifact.
pub fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    let tmp: PathBuf = path.with_extension("tmp");
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)
}

/// Companion `<stem>.meta.json` carrying the resolved run parameters.
/// Data files stay timestamp-free; so does the sidecar, to keep repeated
/// runs byte-identical.
pub fn write_sidecar(
    data_path: &Path,
    subcommand: &str,
    params: serde_json::Value,
) -> io::Result<()> {
    let meta = serde_json::json!({
        "tool": "qmeng",
        "version": env!("CARGO_PKG_VERSION"),
        "subcommand": subcommand,
        "params": params,
    });
    let mut sidecar = data_path.to_path_buf();
    sidecar.set_extension("meta.json");
    write_atomic(&sidecar, &format!("{:#}\n", meta))
}
