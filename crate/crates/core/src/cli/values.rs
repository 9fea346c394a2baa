//! Value files: one decimal real per line. Lines starting with `#` and
//! blank lines are skipped; line numbers in errors are 1-based and count
//! every line of the file.

use std::fmt;

/// A parsed value with the line it came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineValue {
    pub line: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValueFileError {
    pub line: usize,
    pub text: String,
}

impl fmt::Display for ValueFileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}: not a finite decimal number: {:?}",
            self.line, self.text
        )
    }
}

impl std::error::Error for ValueFileError {}

pub fn parse_values(text: &str) -> Result<Vec<LineValue>, ValueFileError> {
    let mut values = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match line.parse::<f64>() {
            Ok(value) if value.is_finite() => values.push(LineValue { line: i + 1, value }),
            _ => {
                return Err(ValueFileError {
                    line: i + 1,
                    text: line.to_owned(),
                })
            }
        }
    }
    Ok(values)
}
