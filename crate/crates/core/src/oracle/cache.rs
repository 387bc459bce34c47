use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::sync::Mutex;

use sha2::{Digest, Sha256};

use super::{CacheKey, OracleError};

/// Raw responses by request key, optionally mirrored to an append-only file
/// of `key<TAB>sha256(body)<TAB>body` lines. Bodies are JSON string literals
/// so a multi-line completion stays on one record.
#[derive(Debug, Default)]
pub struct ResponseCache {
    entries: Mutex<HashMap<CacheKey, String>>,
    file: Option<Mutex<File>>,
}

fn digest(body: &str) -> String {
    hex::encode(Sha256::digest(body.as_bytes()))
}

impl ResponseCache {
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Opens (creating if needed) a cache file and loads its records.
    pub fn open(path: &Path) -> Result<Self, OracleError> {
        let io = |e: std::io::Error| OracleError::Io(format!("{}: {e}", path.display()));
        let mut entries = HashMap::new();
        if path.exists() {
            let reader = BufReader::new(File::open(path).map_err(io)?);
            for (n, line) in reader.lines().enumerate() {
                let line = line.map_err(io)?;
                if line.is_empty() {
                    continue;
                }
                let bad = || OracleError::Io(format!("{}:{}: corrupt cache record", path.display(), n + 1));
                let mut parts = line.splitn(3, '\t');
                let (Some(key), Some(sum), Some(body)) = (parts.next(), parts.next(), parts.next()) else {
                    return Err(bad());
                };
                let body: String = serde_json::from_str(body).map_err(|_| bad())?;
                if digest(&body) != sum {
                    return Err(bad());
                }
                entries.insert(CacheKey(key.to_string()), body);
            }
        }
        let file = OpenOptions::new().create(true).append(true).open(path).map_err(io)?;
        Ok(ResponseCache {
            entries: Mutex::new(entries),
            file: Some(Mutex::new(file)),
        })
    }

    pub fn get(&self, key: &CacheKey) -> Option<String> {
        self.entries.lock().unwrap().get(key).cloned()
    }

    pub fn len(&self) -> usize {
        self.entries.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// First write for a key wins; later inserts of the same key are no-ops.
    pub fn insert(&self, key: &CacheKey, body: &str) -> Result<(), OracleError> {
        let mut entries = self.entries.lock().unwrap();
        if entries.contains_key(key) {
            return Ok(());
        }
        if let Some(file) = &self.file {
            let encoded = serde_json::to_string(body).expect("strings always encode");
            let record = format!("{}\t{}\t{}\n", key, digest(body), encoded);
            file.lock()
                .unwrap()
                .write_all(record.as_bytes())
                .map_err(|e| OracleError::Io(e.to_string()))?;
        }
        entries.insert(key.clone(), body.to_string());
        Ok(())
    }
}
