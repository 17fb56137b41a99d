use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// 17 significant digits in scientific notation, enough to round-trip any f64.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Comma-separated rows with LF line ends.
#[derive(Default)]
pub struct Csv {
    buf: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut c = Self::default();
        c.line(header.iter().map(|s| s.to_string()));
        c
    }

    pub fn line(&mut self, cells: impl IntoIterator<Item = String>) {
        let cells: Vec<String> = cells.into_iter().collect();
        self.buf.push_str(&cells.join(","));
        self.buf.push('\n');
    }

    pub fn as_str(&self) -> &str {
        &self.buf
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, Serialize)]
pub struct OutputFile {
    pub path: PathBuf,
    pub bytes: usize,
    pub sha256: String,
}

pub fn write_output(dir: &Path, name: &str, contents: &str) -> io::Result<OutputFile> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, contents)?;
    Ok(OutputFile { path, bytes: contents.len(), sha256: sha256_hex(contents.as_bytes()) })
}

/// One per run, written last as `manifest.json`.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub version: &'static str,
    /// sha256 of the input files, concatenated in argument order.
    pub input_digest: Option<String>,
    /// The effective configuration after command-line overrides.
    pub config: Value,
    pub convergence: Vec<Value>,
    pub warnings: Vec<String>,
    pub outputs: Vec<OutputFile>,
    pub exit_code: i32,
    pub elapsed_ms: u128,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.into(),
            version: env!("CARGO_PKG_VERSION"),
            input_digest: None,
            config: Value::Null,
            convergence: Vec::new(),
            warnings: Vec::new(),
            outputs: Vec::new(),
            exit_code: 0,
            elapsed_ms: 0,
        }
    }

    pub fn write(&self, dir: &Path) -> io::Result<()> {
        fs::create_dir_all(dir)?;
        let mut text = serde_json::to_string_pretty(self).expect("manifest serializes");
        text.push('\n');
        fs::write(dir.join("manifest.json"), text)
    }
}
