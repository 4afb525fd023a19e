//! Write-once JSON cache with SHA-256 digests and atomic replacement.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Serialize, Deserialize)]
struct Envelope {
    digest: String,
    payload: Value,
}

fn digest_of(payload: &Value) -> String {
    hex::encode(Sha256::digest(payload.to_string().as_bytes()))
}

/// A directory of digest-checked JSON files addressed by relative path.
#[derive(Debug)]
pub struct Cache {
    root: PathBuf,
    hits: AtomicUsize,
    misses: AtomicUsize,
    warnings: Mutex<Vec<String>>,
}

impl Cache {
    pub fn new(root: impl Into<PathBuf>) -> std::io::Result<Self> {
        let root = root.into();
        fs::create_dir_all(&root)?;
        Ok(Self { root, hits: AtomicUsize::new(0), misses: AtomicUsize::new(0), warnings: Mutex::new(vec![]) })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn hits(&self) -> usize {
        self.hits.load(Ordering::Relaxed)
    }

    pub fn misses(&self) -> usize {
        self.misses.load(Ordering::Relaxed)
    }

    /// Problems met while reading, such as corrupt or tampered files.
    pub fn warnings(&self) -> Vec<String> {
        self.warnings.lock().unwrap().clone()
    }

    fn warn(&self, msg: String) {
        log::warn!("{msg}");
        self.warnings.lock().unwrap().push(msg);
    }

    /// The payload at `key`, or `None` when absent, unreadable or failing its digest.
    pub fn get<T: DeserializeOwned>(&self, key: &str) -> Option<T> {
        let path = self.root.join(key);
        let Ok(text) = fs::read_to_string(&path) else {
            self.misses.fetch_add(1, Ordering::Relaxed);
            return None;
        };
        let parsed = serde_json::from_str::<Envelope>(&text)
            .map_err(|e| format!("unreadable cache file {}: {e}", path.display()))
            .and_then(|env| {
                if digest_of(&env.payload) != env.digest {
                    return Err(format!("digest mismatch in {}; recomputing", path.display()));
                }
                serde_json::from_value(env.payload).map_err(|e| format!("unexpected payload in {}: {e}", path.display()))
            });
        match parsed {
            Ok(v) => {
                self.hits.fetch_add(1, Ordering::Relaxed);
                Some(v)
            }
            Err(msg) => {
                self.warn(msg);
                self.misses.fetch_add(1, Ordering::Relaxed);
                None
            }
        }
    }

    /// Store `payload` at `key` by writing a sibling temporary file and renaming it into place.
    pub fn put<T: Serialize>(&self, key: &str, payload: &T) -> std::io::Result<()> {
        let path = self.root.join(key);
        let dir = path.parent().unwrap_or(&self.root);
        fs::create_dir_all(dir)?;
        let payload = serde_json::to_value(payload)?;
        let env = Envelope { digest: digest_of(&payload), payload };
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        tmp.write_all(serde_json::to_string(&env)?.as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(&path).map_err(|e| e.error)?;
        Ok(())
    }
}

/// Relative keys of the cache layout.
pub mod keys {
    /// Plus-space operators depend on `p` through the working precision.
    pub fn modsym_dir(p: u64, ell: u64, k: u32) -> String {
        format!("modsym/{ell}_{k}/p{p}")
    }

    pub fn modsym_space(p: u64, ell: u64, k: u32) -> String {
        format!("{}/space.json", modsym_dir(p, ell, k))
    }

    pub fn modsym_operator(p: u64, ell: u64, k: u32, name: &str) -> String {
        format!("{}/{name}.json", modsym_dir(p, ell, k))
    }

    pub fn hecke_algebra(p: u64, ell: u64, k: u32) -> String {
        format!("hecke/{p}_{ell}_{k}/algebra.json")
    }

    pub fn hecke_report(p: u64, ell: u64, k: u32) -> String {
        format!("hecke/{p}_{ell}_{k}/report.json")
    }
}
