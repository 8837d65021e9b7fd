//! Append-only JSON-lines result cache.

use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

const FILE_NAME: &str = "results.jsonl";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheKey {
    pub order: usize,
    pub spec_digest: String,
    pub operation: String,
}

impl CacheKey {
    pub fn new(order: usize, canonical_spec: &str, operation: &str) -> Self {
        CacheKey {
            order,
            spec_digest: hex::encode(Sha256::digest(canonical_spec.as_bytes())),
            operation: operation.to_string(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: CacheKey,
    pub value: Value,
    pub tool_version: String,
    pub timestamp: u64,
}

pub struct Cache {
    path: PathBuf,
}

impl Cache {
    pub fn open(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir)
            .with_context(|| format!("cannot create cache directory {}", dir.display()))?;
        Ok(Cache {
            path: dir.join(FILE_NAME),
        })
    }

    /// Latest stored value for `key`. Lines that fail to parse, such as a
    /// write cut short, are skipped.
    pub fn lookup(&self, key: &CacheKey) -> Result<Option<Value>> {
        let text = match fs::read_to_string(&self.path) {
            Ok(text) => text,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => {
                return Err(e).with_context(|| format!("cannot read {}", self.path.display()))
            }
        };
        Ok(text
            .lines()
            .rev()
            .filter_map(|line| serde_json::from_str::<CacheEntry>(line).ok())
            .find(|entry| entry.key == *key)
            .map(|entry| entry.value))
    }

    pub fn store(&self, key: CacheKey, value: Value) -> Result<()> {
        let entry = CacheEntry {
            key,
            value,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        };
        let mut line = serde_json::to_string(&entry)?;
        line.push('\n');
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .with_context(|| format!("cannot open {}", self.path.display()))?;
        // one write per entry so concurrent appends do not interleave
        file.write_all(line.as_bytes())?;
        Ok(())
    }
}
