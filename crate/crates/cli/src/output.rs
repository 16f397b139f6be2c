//! Deterministic number formatting and file/stdout sinks.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

/// Nine significant digits, scientific notation.
pub fn fmt9(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.8e}")
    } else {
        String::new()
    }
}

pub fn fmt9_opt(x: Option<f64>) -> String {
    x.map(fmt9).unwrap_or_default()
}

/// Rounds to nine significant digits for JSON output; non-finite becomes null.
pub fn r9(x: f64) -> Option<f64> {
    x.is_finite()
        .then(|| fmt9(x).parse().expect("formatted float parses"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn ext(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Builds a CSV document with a one-line header.
pub struct Csv {
    buf: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut buf = header.join(",");
        buf.push('\n');
        Self { buf }
    }

    pub fn row<I: IntoIterator<Item = String>>(&mut self, cells: I) {
        let cells: Vec<String> = cells.into_iter().collect();
        self.buf.push_str(&cells.join(","));
        self.buf.push('\n');
    }

    pub fn into_string(self) -> String {
        self.buf
    }
}

pub fn to_json<S: Serialize>(value: &S) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

/// Writes into `dir` when given, otherwise the caller prints.
pub struct Sink {
    dir: Option<PathBuf>,
}

impl Sink {
    pub fn new(dir: Option<&Path>) -> io::Result<Self> {
        if let Some(d) = dir {
            fs::create_dir_all(d)?;
        }
        Ok(Self {
            dir: dir.map(Path::to_path_buf),
        })
    }

    pub fn is_dir(&self) -> bool {
        self.dir.is_some()
    }

    /// Writes `contents` to `<dir>/<name>`, or to stdout without a directory.
    pub fn emit(&self, name: &str, contents: &str) -> io::Result<Option<PathBuf>> {
        match &self.dir {
            Some(d) => {
                let path = d.join(name);
                fs::write(&path, contents)?;
                Ok(Some(path))
            }
            None => {
                io::stdout().lock().write_all(contents.as_bytes())?;
                Ok(None)
            }
        }
    }

    /// Writes only when a directory is configured.
    pub fn emit_file(&self, name: &str, contents: &str) -> io::Result<Option<PathBuf>> {
        match &self.dir {
            Some(_) => self.emit(name, contents),
            None => Ok(None),
        }
    }
}
