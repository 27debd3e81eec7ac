//! On-disk cache of expensive intermediates, keyed by content hashes of the
//! multiplication tables involved.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::group::FiniteGroup;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub version: u32,
    pub kind: String,
    pub key: String,
    pub payload: serde_json::Value,
}

/// A cache directory. Entries are written to a temporary file and renamed
/// into place, so concurrent processes never observe partial writes.
#[derive(Clone, Debug)]
pub struct Store {
    dir: PathBuf,
}

static TEMP_COUNTER: AtomicU64 = AtomicU64::new(0);

impl Store {
    pub fn open(dir: impl AsRef<Path>) -> Result<Store> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(&dir)?;
        Ok(Store { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Hex SHA-256 over the kind, the table hashes of `groups`, and `params`.
    pub fn key(kind: &str, groups: &[&FiniteGroup], params: &str) -> String {
        let mut h = Sha256::new();
        h.update(kind.as_bytes());
        h.update([0]);
        for g in groups {
            h.update(g.table_hash());
        }
        h.update([0]);
        h.update(params.as_bytes());
        hex::encode(h.finalize())
    }

    fn path(&self, kind: &str, key: &str) -> PathBuf {
        self.dir.join(format!("{kind}-{key}.json"))
    }

    /// The payload stored under `(kind, key)`, if present, current and readable.
    pub fn get<T: DeserializeOwned>(&self, kind: &str, key: &str) -> Option<T> {
        let text = fs::read(self.path(kind, key)).ok()?;
        let entry: CacheEntry = serde_json::from_slice(&text).ok()?;
        if entry.version != FORMAT_VERSION || entry.kind != kind || entry.key != key {
            return None;
        }
        serde_json::from_value(entry.payload).ok()
    }

    pub fn put<T: Serialize>(&self, kind: &str, key: &str, payload: &T) -> Result<()> {
        let entry = CacheEntry {
            version: FORMAT_VERSION,
            kind: kind.to_string(),
            key: key.to_string(),
            payload: serde_json::to_value(payload)?,
        };
        let bytes = serde_json::to_vec(&entry)?;
        let tmp = self.dir.join(format!(
            ".{kind}-{key}.{}.{}.tmp",
            std::process::id(),
            TEMP_COUNTER.fetch_add(1, Ordering::Relaxed)
        ));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(&bytes)?;
            f.sync_all()?;
        }
        fs::rename(&tmp, self.path(kind, key))?;
        Ok(())
    }

    /// Number of entries on disk.
    pub fn len(&self) -> usize {
        fs::read_dir(&self.dir)
            .map(|it| {
                it.filter_map(|e| e.ok())
                    .filter(|e| e.path().extension().is_some_and(|x| x == "json"))
                    .count()
            })
            .unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::named_group;

    #[test]
    fn round_trip_and_keys() {
        let dir = tempfile::tempdir().unwrap();
        let store = Store::open(dir.path()).unwrap();
        let c2 = named_group("C2").unwrap();
        let c3 = named_group("C3").unwrap();
        let k = Store::key("demo", &[&c2], "");
        assert_ne!(k, Store::key("demo", &[&c3], ""));
        assert_ne!(k, Store::key("other", &[&c2], ""));
        // Same table, different label: same key.
        assert_eq!(k, Store::key("demo", &[&c2.with_label("Z/2")], ""));
        assert_eq!(store.get::<Vec<u32>>("demo", &k), None);
        store.put("demo", &k, &vec![1u32, 2, 3]).unwrap();
        assert_eq!(store.get::<Vec<u32>>("demo", &k), Some(vec![1, 2, 3]));
        assert_eq!(store.len(), 1);
    }

    #[test]
    fn rejects_stale_versions() {
        let dir = tempfile::tempdir().unwrap();
        let store = Store::open(dir.path()).unwrap();
        let entry = CacheEntry {
            version: FORMAT_VERSION + 1,
            kind: "demo".into(),
            key: "abc".into(),
            payload: serde_json::json!([1]),
        };
        fs::write(store.path("demo", "abc"), serde_json::to_vec(&entry).unwrap()).unwrap();
        assert_eq!(store.get::<Vec<u32>>("demo", "abc"), None);
        fs::write(store.path("demo", "abc"), b"not json").unwrap();
        assert_eq!(store.get::<Vec<u32>>("demo", "abc"), None);
    }
}
