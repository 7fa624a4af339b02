use std::path::Path;

use crate::error::{Error, Result};

/// Parses a sample file: one decimal number per line, blank lines and
/// lines starting with `#` ignored. A single-column CSV with header `x`
/// is accepted as well.
pub fn parse_samples(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    let mut seen_data = false;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim().trim_start_matches('\u{feff}');
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !seen_data && line.trim_matches('"') == "x" {
            seen_data = true;
            continue;
        }
        seen_data = true;
        let value: f64 = line.parse().map_err(|_| Error::SampleParse {
            line: i + 1,
            content: line.to_string(),
        })?;
        if !value.is_finite() {
            return Err(Error::NonFiniteSample { index: out.len() });
        }
        out.push(value);
    }
    if out.is_empty() {
        return Err(Error::EmptySample);
    }
    Ok(out)
}

pub fn load_samples(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path.as_ref())
        .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
    parse_samples(&text)
}
