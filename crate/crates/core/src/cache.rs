//! Content-addressed results cache, so long searches are only run once.
//!
//! Entries live at `<dir>/<key>.json`, where the key hashes the solver
//! version, the operation name and the graph's edge multiset. Writes go to a
//! temporary file first and are renamed into place, so concurrent writers
//! never leave a torn entry.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::graph::Graph;

/// Part of every key; bump when any cached computation changes meaning.
pub const SOLVER_VERSION: &str = concat!("chessgon-", env!("CARGO_PKG_VERSION"), "/1");

/// Environment variable naming the cache directory.
pub const CACHE_DIR_ENV: &str = "CHESSGON_CACHE_DIR";

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

#[derive(Serialize, Deserialize)]
struct Entry<T> {
    version: String,
    key: String,
    value: T,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Lookup<T> {
    Hit(T),
    Miss,
    /// The entry existed but could not be read back; it will be overwritten.
    Corrupt(String),
}

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
    version: String,
}

/// A computed or cached value, plus any cache problem that was worked around.
#[derive(Debug, Clone)]
pub struct Cached<T> {
    pub value: T,
    pub hit: bool,
    pub warnings: Vec<String>,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into(), version: SOLVER_VERSION.to_string() }
    }

    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_DIR_ENV).filter(|d| !d.is_empty()).map(Self::new)
    }

    /// Same directory, different version string; for tests of invalidation.
    pub fn with_version(mut self, version: impl Into<String>) -> Self {
        self.version = version.into();
        self
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Hex SHA-256 over the version, the operation and the graph's edges.
    /// Coordinate labels do not affect the key.
    pub fn key(&self, g: &Graph, operation: &str) -> String {
        let mut h = Sha256::new();
        h.update(self.version.as_bytes());
        h.update([0]);
        h.update(operation.as_bytes());
        h.update([0]);
        h.update((g.vertex_count() as u64).to_le_bytes());
        for e in g.edges() {
            h.update((e.v as u64).to_le_bytes());
            h.update((e.w as u64).to_le_bytes());
            h.update(e.mult.to_le_bytes());
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn get<T: DeserializeOwned>(&self, key: &str) -> Lookup<T> {
        let text = match fs::read_to_string(self.path(key)) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Lookup::Miss,
            Err(e) => return Lookup::Corrupt(e.to_string()),
        };
        match serde_json::from_str::<Entry<T>>(&text) {
            Ok(entry) if entry.version == self.version && entry.key == key => Lookup::Hit(entry.value),
            Ok(_) => Lookup::Corrupt("entry belongs to another key or version".into()),
            Err(e) => Lookup::Corrupt(e.to_string()),
        }
    }

    pub fn put<T: Serialize>(&self, key: &str, value: &T) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let entry = Entry { version: self.version.clone(), key: key.to_string(), value };
        let tmp =
            self.dir.join(format!(".{key}.{}.{}.tmp", std::process::id(), TMP_COUNTER.fetch_add(1, Ordering::Relaxed)));
        let mut f = fs::File::create(&tmp)?;
        f.write_all(serde_json::to_string(&entry)?.as_bytes())?;
        f.sync_all()?;
        drop(f);
        fs::rename(&tmp, self.path(key)).inspect_err(|_| {
            let _ = fs::remove_file(&tmp);
        })?;
        Ok(())
    }

    /// Returns the cached value for `key`, or computes and stores it. Cache
    /// failures never change the answer; they are reported as warnings.
    pub fn get_or_compute<T, F>(&self, key: &str, compute: F) -> Result<Cached<T>>
    where
        T: Serialize + DeserializeOwned,
        F: FnOnce() -> Result<T>,
    {
        let mut warnings = Vec::new();
        match self.get(key) {
            Lookup::Hit(value) => return Ok(Cached { value, hit: true, warnings }),
            Lookup::Miss => {}
            Lookup::Corrupt(why) => warnings.push(format!("cache entry {key} unreadable ({why}); recomputing")),
        }
        let value = compute()?;
        if let Err(e) = self.put(key, &value) {
            warnings.push(format!("could not write cache entry {key}: {e}"));
        }
        Ok(Cached { value, hit: false, warnings })
    }
}

/// Runs `compute` through `cache` when one is given.
pub fn cached<T, F>(cache: Option<&Cache>, g: &Graph, operation: &str, compute: F) -> Result<Cached<T>>
where
    T: Serialize + DeserializeOwned,
    F: FnOnce() -> Result<T>,
{
    match cache {
        Some(c) => c.get_or_compute(&c.key(g, operation), compute),
        None => Ok(Cached { value: compute()?, hit: false, warnings: Vec::new() }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families;

    #[test]
    fn second_call_hits() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let g = families::cycle(5);
        let key = cache.key(&g, "gonality");
        let first = cache.get_or_compute(&key, || Ok(2u64)).unwrap();
        assert!(!first.hit);
        let second = cache.get_or_compute::<u64, _>(&key, || panic!("recomputed")).unwrap();
        assert!(second.hit);
        assert_eq!(second.value, 2);
    }

    #[test]
    fn keys_depend_on_version_operation_and_edges() {
        let dir = tempfile::tempdir().unwrap();
        let a = Cache::new(dir.path());
        let b = Cache::new(dir.path()).with_version("other");
        let g = families::cycle(5);
        assert_ne!(a.key(&g, "gonality"), b.key(&g, "gonality"));
        assert_ne!(a.key(&g, "gonality"), a.key(&g, "rank"));
        assert_ne!(a.key(&g, "gonality"), a.key(&families::path(5), "gonality"));
        assert_eq!(a.key(&g, "gonality").len(), 64);
    }

    #[test]
    fn version_bump_invalidates() {
        let dir = tempfile::tempdir().unwrap();
        let old = Cache::new(dir.path()).with_version("v1");
        let new = Cache::new(dir.path()).with_version("v2");
        let g = families::complete(4);
        old.put(&old.key(&g, "gonality"), &3u64).unwrap();
        assert!(matches!(new.get::<u64>(&new.key(&g, "gonality")), Lookup::Miss));
    }

    #[test]
    fn corrupt_entry_is_recomputed_and_overwritten() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let g = families::complete(4);
        let key = cache.key(&g, "gonality");
        fs::write(dir.path().join(format!("{key}.json")), "{not json").unwrap();
        assert!(matches!(cache.get::<u64>(&key), Lookup::Corrupt(_)));
        let r = cache.get_or_compute(&key, || Ok(3u64)).unwrap();
        assert!(!r.hit);
        assert_eq!(r.warnings.len(), 1);
        assert_eq!(cache.get::<u64>(&key), Lookup::Hit(3));
    }

    #[test]
    fn unwritable_directory_only_warns() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("plain-file");
        fs::write(&file, "x").unwrap();
        let cache = Cache::new(file.join("sub"));
        let g = families::path(2);
        let r = cached(Some(&cache), &g, "gonality", || Ok(1u64)).unwrap();
        assert_eq!(r.value, 1);
        assert!(!r.warnings.is_empty());
    }
}
