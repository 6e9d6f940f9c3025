//! On-disk cache for group tables and character tables.
//!
//! Entry names are content hashes of `(kind, key, format version)`, so stale
//! formats simply miss. Writes go through a temporary file in the same
//! directory followed by a rename.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const CACHE_FORMAT_VERSION: u32 = 1;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CacheStatus {
    Hit,
    Miss,
    Disabled,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub key: String,
    pub status: CacheStatus,
}

impl Provenance {
    pub fn uncached(key: &str) -> Self {
        Provenance { key: key.to_string(), status: CacheStatus::Disabled }
    }
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir).map_err(|e| Error::Cache(format!("{}: {e}", dir.display())))?;
        Ok(Cache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// `<kind>-<sha256 prefix>.<ext>`.
    pub fn entry_name(&self, kind: &str, key: &str, ext: &str) -> String {
        let mut h = Sha256::new();
        h.update(kind.as_bytes());
        h.update([0]);
        h.update(key.as_bytes());
        h.update([0]);
        h.update(CACHE_FORMAT_VERSION.to_le_bytes());
        let digest = hex::encode(h.finalize());
        format!("{kind}-{}.{ext}", &digest[..24])
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }
}

pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_stable_and_distinct() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::open(dir.path()).unwrap();
        let a = c.entry_name("group", "GL2@mixed:3^2", "bin");
        assert_eq!(a, c.entry_name("group", "GL2@mixed:3^2", "bin"));
        assert_ne!(a, c.entry_name("group", "SL2@mixed:3^2", "bin"));
        assert_ne!(a, c.entry_name("chartab", "GL2@mixed:3^2", "bin"));
        assert!(a.starts_with("group-"));
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x");
        atomic_write(&p, b"one").unwrap();
        atomic_write(&p, b"two").unwrap();
        assert_eq!(std::fs::read(&p).unwrap(), b"two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
