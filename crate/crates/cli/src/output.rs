use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

use crate::Failure;

/// Fixed 17-significant-digit float formatting for CSV cells.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Accumulates CSV text; nothing reaches disk until [`emit`].
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(header: &str) -> Self {
        Self {
            text: format!("{header}\n"),
        }
    }

    pub fn row(&mut self, cells: &[String]) {
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
    }

    pub fn into_string(self) -> String {
        self.text
    }
}

pub fn json<T: Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| Failure::Usage(format!("serializing output: {e}")))
}

/// Writes `text` to `out` via a temp file in the same directory and a rename,
/// so an interrupted run never leaves a partial file. Stdout when `out` is `None`.
pub fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    let io_err = |e: io::Error| Failure::Usage(format!("writing output: {e}"));
    match out {
        None => io::stdout().lock().write_all(text.as_bytes()).map_err(io_err),
        Some(path) => {
            let dir = match path.parent() {
                Some(d) if !d.as_os_str().is_empty() => d,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
            tmp.write_all(text.as_bytes()).map_err(io_err)?;
            tmp.persist(path).map_err(|e| io_err(e.error))?;
            Ok(())
        }
    }
}
