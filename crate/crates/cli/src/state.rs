//! Resumable job state stored beside the output file.
//!
//! The state records the finished rows of a run together with two hashes:
//! `spec` identifies the job (command, options and triple list), and `token`
//! covers `spec` plus the completed rows, so a state file edited or written
//! by a different job is never reused.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Outcome of one triple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowResult {
    /// The CSV line, or `None` when the triple produces no row.
    pub row: Option<String>,
    /// All criteria failed and no witness was found.
    pub alarm: bool,
}

/// On-disk layout of the state file.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct StateFile {
    pub spec: String,
    pub token: String,
    pub rows: BTreeMap<String, RowResult>,
}

pub fn sha256_hex(data: &[u8]) -> String {
    hex::encode(Sha256::digest(data))
}

/// Hash of the job identity and its finished rows.
pub fn token_of(spec: &str, rows: &BTreeMap<String, RowResult>) -> String {
    let mut h = Sha256::new();
    h.update(spec.as_bytes());
    for (k, v) in rows {
        h.update(b"\n");
        h.update(k.as_bytes());
        h.update(b"\t");
        h.update(v.row.as_deref().unwrap_or("-").as_bytes());
        h.update(if v.alarm { b"\t!" } else { b"\t." });
    }
    hex::encode(h.finalize())
}

/// Path of the state file for an output path.
pub fn state_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".resume.json");
    PathBuf::from(s)
}

pub struct JobState {
    path: Option<PathBuf>,
    spec: String,
    rows: Mutex<BTreeMap<String, RowResult>>,
}

impl JobState {
    /// State for the job identified by `spec`. With `resume`, rows from an
    /// existing state file are reused when its hashes check out.
    pub fn open(out: Option<&Path>, spec: String, resume: bool) -> Result<Self> {
        let path = out.map(state_path);
        let mut rows = BTreeMap::new();
        if let (true, Some(p)) = (resume, &path) {
            if p.exists() {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                let saved: StateFile =
                    serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))?;
                if saved.spec == spec && saved.token == token_of(&saved.spec, &saved.rows) {
                    rows = saved.rows;
                }
            }
        }
        Ok(Self { path, spec, rows: Mutex::new(rows) })
    }

    pub fn get(&self, key: &str) -> Option<RowResult> {
        self.rows.lock().expect("state lock").get(key).cloned()
    }

    /// Records a finished triple and rewrites the state file atomically.
    pub fn record(&self, key: String, result: RowResult) -> Result<()> {
        let mut rows = self.rows.lock().expect("state lock");
        rows.insert(key, result);
        let Some(path) = &self.path else { return Ok(()) };
        let file = StateFile { spec: self.spec.clone(), token: token_of(&self.spec, &rows), rows: rows.clone() };
        let tmp = path.with_extension("json.tmp");
        std::fs::write(&tmp, serde_json::to_vec_pretty(&file)?).with_context(|| format!("writing {}", tmp.display()))?;
        std::fs::rename(&tmp, path).with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }

    /// The current resume token.
    pub fn token(&self) -> String {
        token_of(&self.spec, &self.rows.lock().expect("state lock"))
    }

    pub fn spec(&self) -> &str {
        &self.spec
    }
}
