//! Fixed float formatting and small text-file helpers shared by the CSV codecs.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Nine significant digits in exponent form, used for derived results.
pub fn sig9(x: f64) -> String {
    format!("{x:.8e}")
}

/// Shortest representation that parses back to the same bits.
pub fn exact(x: f64) -> String {
    format!("{x:e}")
}

pub(crate) fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Leading `#` comment lines of a file, with the marker and surrounding blanks stripped.
pub(crate) fn comments(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(str::trim)
        .take_while(|l| l.is_empty() || l.starts_with('#'))
        .filter_map(|l| l.strip_prefix('#').map(str::trim))
}

/// Look up `key: value` among the leading comments.
pub(crate) fn comment_value<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    comments(text).find_map(|c| {
        c.strip_prefix(key)
            .and_then(|rest| rest.trim_start().strip_prefix(':'))
            .map(str::trim)
    })
}

/// Reader over the data rows of a comma-separated file; `#` lines are skipped.
pub(crate) fn csv_reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes())
}

pub(crate) fn parse_f64(field: &str, what: &str, path: &Path, line: u64) -> Result<f64> {
    let v: f64 = field
        .parse()
        .map_err(|_| Error::parse(path, line, format!("{what}: `{field}` is not a number")))?;
    if !v.is_finite() {
        return Err(Error::parse(
            path,
            line,
            format!("{what}: value is not finite"),
        ));
    }
    Ok(v)
}

pub(crate) fn record_line(record: &csv::StringRecord) -> u64 {
    record.position().map_or(0, |p| p.line())
}

pub(crate) fn csv_error(path: &Path, err: csv::Error) -> Error {
    let line = err.position().map_or(0, |p| p.line());
    Error::parse(path, line, err.to_string())
}
