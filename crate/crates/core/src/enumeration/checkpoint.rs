//! Append-only JSON-lines log of finished chunks.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::error::{PcnError, Result};

/// Partial counts of one chunk of the streamed component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChunkRecord {
    pub key: String,
    pub chunk: u64,
    pub start: u64,
    pub end: u64,
    /// Complete generators of the streamed component in the chunk.
    pub big: u64,
    /// Primitive sums formed from those generators.
    pub pcn: u64,
}

pub(crate) struct Checkpoint {
    path: PathBuf,
    key: String,
    file: Mutex<File>,
}

impl Checkpoint {
    /// Opens `path` for appending and returns the chunks already recorded
    /// under `key`; lines of other runs are kept but ignored.
    pub(crate) fn open(path: &Path, key: String) -> Result<(Self, BTreeMap<u64, ChunkRecord>)> {
        let io = |e: std::io::Error| PcnError::Checkpoint(format!("{}: {e}", path.display()));
        let mut done = BTreeMap::new();
        if path.exists() {
            for line in BufReader::new(File::open(path).map_err(io)?).lines() {
                let line = line.map_err(io)?;
                if line.trim().is_empty() {
                    continue;
                }
                // A torn final line from an interrupted write is skipped.
                let Ok(rec) = serde_json::from_str::<ChunkRecord>(&line) else { continue };
                if rec.key == key {
                    done.insert(rec.chunk, rec);
                }
            }
        }
        let file = OpenOptions::new().create(true).append(true).open(path).map_err(io)?;
        Ok((Self { path: path.to_path_buf(), key, file: Mutex::new(file) }, done))
    }

    pub(crate) fn key(&self) -> &str {
        &self.key
    }

    pub(crate) fn append(&self, rec: &ChunkRecord) -> Result<()> {
        let mut line = serde_json::to_string(rec).map_err(|e| PcnError::Checkpoint(e.to_string()))?;
        line.push('\n');
        let mut f = self.file.lock().expect("checkpoint lock");
        f.write_all(line.as_bytes())
            .and_then(|_| f.flush())
            .map_err(|e| PcnError::Checkpoint(format!("{}: {e}", self.path.display())))
    }
}
