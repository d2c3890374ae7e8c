//! Number formatting and file writing shared by the commands.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::{CliError, Result};

/// Rounds to 12 significant digits and prints in plain decimal notation.
/// Independent of locale: always `.` and never a thousands separator.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("round trip");
    let s = format!("{rounded}");
    if s == "-0" {
        "0".to_owned()
    } else {
        s
    }
}

/// Pretty JSON with a trailing newline and no trailing spaces.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut f = File::create(path).map_err(|e| CliError::io(path, e))?;
    f.write_all(text.as_bytes())
        .map_err(|e| CliError::io(path, e))
}

/// Writes rows of already formatted fields as comma-separated UTF-8 with
/// `\n` line endings.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(BufWriter::new(file));
    let to_io = |e: csv::Error| CliError::io(path, e.into());
    w.write_record(header).map_err(to_io)?;
    for row in rows {
        w.write_record(row).map_err(to_io)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}
