//! Result files and the run manifest.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::error::{CliError, Result};

pub const MANIFEST: &str = "manifest.json";

#[derive(Debug, Clone, Serialize)]
pub struct FileEntry {
    pub path: String,
    pub bytes: usize,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct RunManifest<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub seed: u64,
    pub started_unix_ms: u128,
    pub finished_unix_ms: u128,
    pub config: &'a RunConfig,
    pub files: Vec<FileEntry>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn now_ms() -> u128 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis())
        .unwrap_or(0)
}

/// Output directory that remembers everything written into it.
pub struct OutputDir {
    root: PathBuf,
    files: Vec<FileEntry>,
    started: u128,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self> {
        std::fs::create_dir_all(root).map_err(|e| CliError::io(root, e))?;
        Ok(OutputDir {
            root: root.to_path_buf(),
            files: Vec::new(),
            started: now_ms(),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<PathBuf> {
        let path = self.root.join(name);
        std::fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
        self.files.retain(|f| f.path != name);
        self.files.push(FileEntry {
            path: name.to_string(),
            bytes: bytes.len(),
            sha256: sha256_hex(bytes),
        });
        Ok(path)
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<PathBuf> {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Format {
            path: self.root.join(name),
            message: e.to_string(),
        })?;
        text.push('\n');
        self.write(name, text.as_bytes())
    }

    pub fn write_csv(&mut self, name: &str, table: Table) -> Result<PathBuf> {
        let bytes = table.into_bytes().map_err(|message| CliError::Format {
            path: self.root.join(name),
            message,
        })?;
        self.write(name, &bytes)
    }

    pub fn files(&self) -> &[FileEntry] {
        &self.files
    }

    /// Writes the manifest listing every produced file.
    pub fn finish(self, command: &str, config: &RunConfig) -> Result<Vec<FileEntry>> {
        let manifest = RunManifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            seed: config.seed,
            started_unix_ms: self.started,
            finished_unix_ms: now_ms(),
            config,
            files: self.files.clone(),
        };
        let path = self.root.join(MANIFEST);
        let mut text = serde_json::to_string_pretty(&manifest).map_err(|e| CliError::Format {
            path: path.clone(),
            message: e.to_string(),
        })?;
        text.push('\n');
        std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
        Ok(self.files)
    }
}

/// In-memory CSV table.
pub struct Table {
    writer: csv::Writer<Vec<u8>>,
    error: Option<String>,
}

impl Table {
    pub fn new<I, S>(header: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        let mut t = Table {
            writer: csv::Writer::from_writer(Vec::new()),
            error: None,
        };
        t.row(header);
        t
    }

    pub fn row<I, S>(&mut self, fields: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        if let Err(e) = self.writer.write_record(fields) {
            self.error.get_or_insert(e.to_string());
        }
    }

    pub fn into_bytes(self) -> std::result::Result<Vec<u8>, String> {
        if let Some(e) = self.error {
            return Err(e);
        }
        self.writer.into_inner().map_err(|e| e.to_string())
    }
}

/// Column names `c0..c{n-1}`.
pub fn cell_columns(n: usize) -> impl Iterator<Item = String> {
    (0..n).map(|i| format!("c{i}"))
}

pub fn num(x: f64) -> String {
    format!("{x}")
}

/// Layout written as `a-b-c` so it fits one CSV field.
pub fn layout_field(cells: &[usize]) -> String {
    cells.iter().map(usize::to_string).collect::<Vec<_>>().join("-")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sha256_of_known_input() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn table_serializes_rows() {
        let mut t = Table::new(["a", "b"]);
        t.row([num(0.1), layout_field(&[3, 4])]);
        assert_eq!(t.into_bytes().unwrap(), b"a,b\n0.1,3-4\n");
    }
}
