use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::aut::AutGroup;
use crate::perm::Perm;
use crate::scheme::Scheme;

pub const CACHE_ENV: &str = "AFS_CACHE";
pub const DEFAULT_CACHE_DIR: &str = ".afs-cache";

/// Directory of automorphism groups keyed by the SHA-256 of the canonical
/// scheme serialization. Entries are checked on load and recomputed by the
/// caller when they fail; a hit never changes any result.
#[derive(Debug, Clone)]
pub struct AutCache {
    dir: PathBuf,
}

#[derive(Debug, Serialize, Deserialize)]
struct Payload {
    digest: String,
    n: usize,
    base: Vec<usize>,
    generators: Vec<Vec<usize>>,
    order: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct Entry {
    payload: Payload,
    checksum: String,
}

fn checksum(payload: &Payload) -> String {
    let bytes = serde_json::to_vec(payload).expect("payload serializes");
    hex::encode(Sha256::digest(bytes))
}

impl AutCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        AutCache { dir: dir.into() }
    }

    /// Directory from `AFS_CACHE`, defaulting to `./.afs-cache`.
    pub fn from_env() -> Self {
        let dir = std::env::var_os(CACHE_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR));
        AutCache::new(dir)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn entry_path(&self, digest: &str) -> PathBuf {
        self.dir.join(format!("{digest}.json"))
    }

    /// A verified entry for `x`, or `None` when missing or unusable.
    pub fn load(&self, x: &Scheme, digest: &str) -> Option<AutGroup> {
        let text = fs::read(self.entry_path(digest)).ok()?;
        let entry: Entry = serde_json::from_slice(&text).ok()?;
        let p = &entry.payload;
        if checksum(p) != entry.checksum || p.digest != digest || p.n != x.n() {
            return None;
        }
        let gens = p
            .generators
            .iter()
            .map(|g| Perm::from_images(g.clone()).ok())
            .collect::<Option<Vec<_>>>()?;
        let group = AutGroup::from_generators(x, p.base.clone(), gens).ok()?;
        (group.order().to_string() == p.order).then_some(group)
    }

    /// Writes an entry atomically: temp file in the cache directory, then rename.
    pub fn store(&self, digest: &str, group: &AutGroup) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let payload = Payload {
            digest: digest.to_string(),
            n: group.degree(),
            base: group.base().to_vec(),
            generators: group.generators().iter().map(|g| g.images().to_vec()).collect(),
            order: group.order().to_string(),
        };
        let entry = Entry {
            checksum: checksum(&payload),
            payload,
        };
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(&serde_json::to_vec(&entry).expect("entry serializes"))?;
        tmp.persist(self.entry_path(digest)).map_err(|e| e.error)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aut::automorphism_group;
    use crate::scheme::{tensor_product, trivial_scheme};

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let cache = AutCache::new(dir.path());
        let x = tensor_product(&trivial_scheme(3), &trivial_scheme(3)).unwrap();
        let digest = x.digest().unwrap();
        assert!(cache.load(&x, &digest).is_none());
        let g = automorphism_group(&x).unwrap();
        cache.store(&digest, &g).unwrap();
        let back = cache.load(&x, &digest).unwrap();
        assert_eq!(back.order(), g.order());
        assert_eq!(back.generators(), g.generators());

        let path = cache.entry_path(&digest);
        let text = fs::read_to_string(&path).unwrap().replace("36", "35");
        fs::write(&path, text).unwrap();
        assert!(cache.load(&x, &digest).is_none());
        fs::write(&path, b"not json").unwrap();
        assert!(cache.load(&x, &digest).is_none());
    }
}
