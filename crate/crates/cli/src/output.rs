//! Exit codes, number formatting and atomic output.

use std::io::Write;
use std::path::Path;

use dvgauss::io::{NumberFormat, Table};
use dvgauss::Error;

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_IO: u8 = 3;
pub const EXIT_INVARIANT: u8 = 4;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_IO,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io(_) | Error::Csv(_) | Error::Json(_) => EXIT_IO,
            _ => EXIT_USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub fn number_format(digits: Option<usize>) -> NumberFormat {
    match digits {
        Some(n) => NumberFormat::fixed(n),
        None => NumberFormat::exact(),
    }
}

pub fn render_table(table: &Table, format: Format) -> Result<String, Failure> {
    match format {
        Format::Csv => Ok(table.to_csv()?),
        Format::Json => Ok(pretty(&table.to_json())),
    }
}

pub fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values are finite");
    s.push('\n');
    s
}

/// Writes `text` to `out`; `-` means stdout. Files are replaced atomically
/// through a temporary file in the target directory.
pub fn emit(out: &str, text: &str) -> Result<(), Failure> {
    if out == "-" {
        let mut stdout = std::io::stdout().lock();
        return stdout
            .write_all(text.as_bytes())
            .and_then(|_| stdout.flush())
            .map_err(|e| Failure::io(format!("cannot write to stdout: {e}")));
    }
    let path = Path::new(out);
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let fail = |e: std::io::Error| Failure::io(format!("cannot write {out}: {e}"));
    if !dir.is_dir() {
        return Err(Failure::io(format!("cannot write {out}: directory {} does not exist", dir.display())));
    }
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(fail)?;
    tmp.write_all(text.as_bytes()).map_err(fail)?;
    tmp.as_file().sync_all().map_err(fail)?;
    tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}
