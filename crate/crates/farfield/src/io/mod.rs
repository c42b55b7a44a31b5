//! File formats and run configuration.
//!
//! Everything is plain text: a self-describing `key: value` header followed
//! by a CSV body. Numbers are written in shortest round-trip decimal form,
//! so `read(write(x)) == x` bitwise for every numeric payload. Files are
//! written atomically (temp file + rename).

pub mod config;
pub mod dataset;
pub mod field;
pub mod figure;

pub use config::{RunConfig, SourceConfig};

use std::io::Write;
use std::path::Path;

use crate::error::Result;

/// Writes `content` to `path` via a temp file in the same directory.
pub fn write_atomic(path: &Path, content: &[u8]) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    std::fs::create_dir_all(dir)?;
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp_path = std::path::PathBuf::from(tmp);
    {
        let mut f = std::fs::File::create(&tmp_path)?;
        f.write_all(content)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp_path, path)?;
    Ok(())
}

/// Splits a header of `key: value` lines from the CSV body. The header ends
/// at the first blank line.
pub(crate) fn split_header(text: &str) -> (Vec<(String, String)>, Vec<&str>) {
    let mut header = Vec::new();
    let mut body = Vec::new();
    let mut in_body = false;
    for line in text.lines() {
        if in_body {
            if !line.trim().is_empty() {
                body.push(line);
            }
            continue;
        }
        let t = line.trim();
        if t.is_empty() {
            in_body = true;
            continue;
        }
        if let Some((k, v)) = t.split_once(':') {
            header.push((k.trim().to_string(), v.trim().to_string()));
        }
    }
    (header, body)
}

pub(crate) fn header_get<'a>(header: &'a [(String, String)], key: &str) -> Option<&'a str> {
    header
        .iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v.as_str())
}
