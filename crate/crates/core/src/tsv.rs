//! Shared helpers for the tab-separated text formats.

use crate::error::{Error, Result};

/// Non-empty, non-comment lines with their 1-based line numbers.
pub(crate) fn records(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)))
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
}

/// Checks that `line` is exactly the expected header.
pub(crate) fn expect_header(line_no: usize, line: &str, columns: &[&str]) -> Result<()> {
    let got: Vec<&str> = line.split('\t').collect();
    if got != columns {
        return Err(Error::parse(
            line_no,
            format!("expected header `{}`, found `{}`", columns.join("\\t"), got.join("\\t")),
        ));
    }
    Ok(())
}

pub(crate) fn split_exact<'a>(line_no: usize, line: &'a str, n: usize) -> Result<Vec<&'a str>> {
    let fields: Vec<&str> = line.split('\t').collect();
    if fields.len() != n {
        return Err(Error::parse(
            line_no,
            format!("expected {n} tab-separated fields, found {}", fields.len()),
        ));
    }
    Ok(fields)
}

/// Rejects characters that would break the line/tab framing.
pub(crate) fn check_field(name: &str, value: &str) -> Result<()> {
    if value.contains(['\t', '\n', '\r']) {
        return Err(Error::InvalidArgument(format!(
            "{name} `{}` contains a tab or newline",
            value.escape_debug()
        )));
    }
    Ok(())
}
