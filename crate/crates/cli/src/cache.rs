//! Per-`(p, identity)` result cache: one JSON document per entry, named by
//! the SHA-256 of its key. Entries from other tool versions hash to other
//! names and are never read; unreadable entries are discarded with a warning.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use charmean_core::{IdentityId, Tolerance, VerificationRecord};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::SweepError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheKey {
    pub version: String,
    pub prime: u32,
    pub identity: IdentityId,
    pub n: u32,
    pub k: u32,
    pub tolerance: Tolerance,
    pub max_cubic_prime: u32,
}

impl CacheKey {
    pub fn file_name(&self) -> String {
        let canonical = serde_json::to_string(self).expect("key serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        format!("{}-p{}-{}.json", &hex::encode(digest)[..24], self.prime, self.identity)
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct CacheEntry {
    key: CacheKey,
    record: VerificationRecord,
}

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self, SweepError> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| SweepError::io(&dir, e))?;
        Ok(Self { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(key.file_name())
    }

    /// The stored record, or `None` on a miss or an untrustworthy entry.
    pub fn lookup(&self, key: &CacheKey) -> Option<VerificationRecord> {
        let path = self.path_for(key);
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return None,
            Err(e) => {
                log::warn!("cache entry {} unreadable ({e}); recomputing", path.display());
                return None;
            }
        };
        match serde_json::from_slice::<CacheEntry>(&bytes) {
            Ok(entry) if entry.key == *key && entry.record.identity == key.identity => Some(entry.record),
            Ok(_) => {
                log::warn!("cache entry {} does not match its key; recomputing", path.display());
                None
            }
            Err(e) => {
                log::warn!("corrupt cache entry {} ({e}); recomputing", path.display());
                None
            }
        }
    }

    /// Writes the entry to a temporary file and renames it into place.
    pub fn store(&self, key: &CacheKey, record: &VerificationRecord) -> Result<(), SweepError> {
        let path = self.path_for(key);
        let mut stored = record.clone();
        stored.cache_hit = false;
        let body = serde_json::to_vec_pretty(&CacheEntry { key: key.clone(), record: stored })
            .map_err(|e| SweepError::Serialize(e.to_string()))?;
        let nonce = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_nanos()).unwrap_or(0);
        let tmp = self
            .dir
            .join(format!(".{}.{}.{nonce}.tmp", key.file_name(), std::process::id()));
        fs::write(&tmp, body).map_err(|e| SweepError::io(&tmp, e))?;
        fs::rename(&tmp, &path).map_err(|e| {
            let _ = fs::remove_file(&tmp);
            SweepError::io(&path, e)
        })
    }
}
