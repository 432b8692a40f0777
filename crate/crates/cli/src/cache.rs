//! One JSON file per ADE type, keyed by a hash of `(ade, algorithm version)`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

pub fn key(ade: &str, version: &str) -> String {
    let mut h = Sha256::new();
    h.update(ade.as_bytes());
    h.update([0u8]);
    h.update(version.as_bytes());
    hex::encode(h.finalize())
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, ade: &str) -> PathBuf {
        self.dir.join(format!("{}.json", key(ade, sextic_lattice::ALGORITHM_VERSION)))
    }

    pub fn get(&self, ade: &str) -> Option<String> {
        fs::read_to_string(self.path(ade)).ok()
    }

    /// Write-temp-then-rename, so readers never see a partial file.
    pub fn put(&self, ade: &str, body: &str) -> Result<(), CliError> {
        fs::create_dir_all(&self.dir)?;
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(body.as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(self.path(ade)).map_err(|e| CliError::Io(e.error))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_depends_on_both_parts() {
        assert_ne!(key("A1", "1"), key("A1", "2"));
        assert_ne!(key("A1", "1"), key("A2", "1"));
        assert_eq!(key("A1", "1").len(), 64);
    }

    #[test]
    fn put_then_get() {
        let d = tempfile::tempdir().unwrap();
        let c = Cache::new(d.path());
        assert!(c.get("A2").is_none());
        c.put("A2", "{}").unwrap();
        assert_eq!(c.get("A2").as_deref(), Some("{}"));
        c.put("A2", "[]").unwrap();
        assert_eq!(c.get("A2").as_deref(), Some("[]"));
    }
}
