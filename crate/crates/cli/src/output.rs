use std::fmt;
use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use dzeta::format::DecimalEnclosure;
use dzeta::{Enclosure, Real};
use serde::Serialize;
use serde_json::Value;

use crate::Precision;

#[derive(Debug)]
pub enum CliError {
    Lib(dzeta::Error),
    Verification(String),
    Usage(String),
    Io(io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(dzeta::Error::Unreachable { .. }) => 4,
            CliError::Lib(_) | CliError::Usage(_) => 2,
            CliError::Verification(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Verification(m) => write!(f, "verification failed: {m}"),
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Io(e) => write!(f, "i/o: {e}"),
        }
    }
}

impl From<dzeta::Error> for CliError {
    fn from(e: dzeta::Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(io::Error::other(e))
    }
}

/// Buffers output and writes it to stdout or `--out` at the end.
pub struct Sink {
    path: Option<PathBuf>,
    buf: Vec<u8>,
}

impl Sink {
    pub fn new(path: Option<&Path>) -> Self {
        Sink { path: path.map(Path::to_path_buf), buf: Vec::new() }
    }

    pub fn line(&mut self, s: impl AsRef<str>) {
        self.buf.extend_from_slice(s.as_ref().as_bytes());
        self.buf.push(b'\n');
    }

    pub fn bytes(&mut self, b: &[u8]) {
        self.buf.extend_from_slice(b);
    }

    pub fn json<T: Serialize>(&mut self, v: &T) {
        let s = serde_json::to_string_pretty(v).expect("serializable");
        self.line(s);
    }

    pub fn finish(self) -> io::Result<()> {
        match self.path {
            Some(p) => File::create(p)?.write_all(&self.buf),
            None => io::stdout().write_all(&self.buf),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Metadata {
    pub version: &'static str,
    pub precision: &'static str,
    pub n_used: Option<u64>,
    pub flags: Vec<String>,
}

impl Metadata {
    pub fn new(precision: Precision) -> Self {
        Metadata { version: env!("CARGO_PKG_VERSION"), precision: precision.name(), n_used: None, flags: Vec::new() }
    }
}

#[derive(Debug, Serialize)]
pub struct OutputRecord {
    pub request: Value,
    pub result: Value,
    pub metadata: Metadata,
}

pub fn enclosure_json<F: Real>(e: &Enclosure<F>) -> Value {
    DecimalEnclosure::from_enclosure(e).to_json_value()
}

pub fn enclosure_text<F: Real>(e: &Enclosure<F>) -> String {
    DecimalEnclosure::from_enclosure(e).to_string()
}
