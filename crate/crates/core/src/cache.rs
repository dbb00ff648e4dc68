//! Content-addressed result cache. Purely an optimization: deleting the
//! cache directory never changes results. Keys mix the crate version with
//! the caller-supplied parameter strings.

use sha2::{Digest, Sha256};
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn open(dir: &Path) -> io::Result<Cache> {
        fs::create_dir_all(dir)?;
        Ok(Cache { dir: dir.to_path_buf() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Hash key from the module version and the parameter parts.
    pub fn key(parts: &[&str]) -> String {
        let mut h = Sha256::new();
        h.update(env!("CARGO_PKG_VERSION").as_bytes());
        for p in parts {
            h.update([0x1f]);
            h.update(p.as_bytes());
        }
        hex::encode(h.finalize())
    }

    fn path_for(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn get(&self, key: &str) -> Option<String> {
        fs::read_to_string(self.path_for(key)).ok()
    }

    /// Atomic write: temp file then rename.
    pub fn put(&self, key: &str, value: &str) -> io::Result<()> {
        let target = self.path_for(key);
        let tmp = self.dir.join(format!(".{key}.tmp"));
        fs::write(&tmp, value)?;
        fs::rename(&tmp, &target)
    }

    pub fn clear(&self) -> io::Result<usize> {
        let mut removed = 0;
        for entry in fs::read_dir(&self.dir)? {
            let entry = entry?;
            if entry.path().extension().is_some_and(|e| e == "json") {
                fs::remove_file(entry.path())?;
                removed += 1;
            }
        }
        Ok(removed)
    }

    pub fn len(&self) -> usize {
        fs::read_dir(&self.dir)
            .map(|rd| {
                rd.filter_map(|e| e.ok())
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

    #[test]
    fn round_trip_and_clear() {
        let dir = std::env::temp_dir().join(format!("wbasis-cache-test-{}", std::process::id()));
        let cache = Cache::open(&dir).unwrap();
        let key = Cache::key(&["dims", "b2", "1,0,0", "4"]);
        assert!(cache.get(&key).is_none());
        cache.put(&key, "[1,2,3]").unwrap();
        assert_eq!(cache.get(&key).as_deref(), Some("[1,2,3]"));
        assert_eq!(cache.clear().unwrap(), 1);
        assert!(cache.get(&key).is_none());
        let _ = fs::remove_dir_all(&dir);
    }
}
