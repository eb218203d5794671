//! On-disk cache of multiplicity maps, keyed by the equation and the digest
//! of the point set. A file that fails to parse or describes another input
//! is treated as absent and rewritten.

use crate::error::Result;
use crate::grid::{EquationSpec, PointSet};
use crate::solutions::{multiplicity_map, MultiplicityMap};
use crate::Budget;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fs;
use std::path::{Path, PathBuf};

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "BKH_CACHE_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheStatus {
    Hit,
    Miss,
    /// A file existed but was unreadable or stale.
    Rebuilt,
}

#[derive(Serialize, Deserialize)]
struct Entry {
    spec_key: String,
    set_digest: String,
    map: MultiplicityMap,
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    /// `$BKH_CACHE_DIR`, falling back to `bkh-cache` under the system temp dir.
    pub fn from_env() -> Self {
        match std::env::var_os(CACHE_ENV) {
            Some(d) if !d.is_empty() => Cache::new(d),
            _ => Cache::new(std::env::temp_dir().join("bkh-cache")),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// File holding the map for this `(spec, A)` pair.
    pub fn path_for(&self, a: &PointSet, spec: &EquationSpec) -> PathBuf {
        let mut h = Sha256::new();
        h.update(spec.key());
        h.update("|");
        h.update(a.digest());
        let name = hex::encode(h.finalize());
        self.dir.join(format!("mult-{}.json", &name[..32]))
    }

    /// The multiplicity map of `a` for the (symmetric) spec, loaded from the
    /// cache when a matching entry exists and built and stored otherwise.
    pub fn multiplicities(&self, a: &PointSet, spec: &EquationSpec, budget: &Budget) -> Result<(MultiplicityMap, CacheStatus)> {
        let h = spec.require_symmetric()?;
        let path = self.path_for(a, spec);
        let key = spec.key();
        let digest = a.digest();
        let mut status = CacheStatus::Miss;
        if path.exists() {
            match fs::read(&path).map_err(crate::Error::from).and_then(|b| Ok(serde_json::from_slice::<Entry>(&b)?)) {
                Ok(e) if e.spec_key == key && e.set_digest == digest && e.map.h == h && e.map.source_digest == digest => {
                    log::info!("cache hit {}", path.display());
                    return Ok((e.map, CacheStatus::Hit));
                }
                Ok(_) => {
                    log::warn!("cache entry {} describes another input; rebuilding", path.display());
                    status = CacheStatus::Rebuilt;
                }
                Err(err) => {
                    log::warn!("cache entry {} unreadable ({err}); rebuilding", path.display());
                    status = CacheStatus::Rebuilt;
                }
            }
        } else {
            log::info!("cache miss {}", path.display());
        }
        let map = multiplicity_map(a, h, budget)?;
        let entry = Entry {
            spec_key: key,
            set_digest: digest,
            map,
        };
        if let Err(err) = self.store(&path, &entry) {
            log::warn!("could not write cache entry {}: {err}", path.display());
        }
        Ok((entry.map, status))
    }

    fn store(&self, path: &Path, entry: &Entry) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, serde_json::to_vec(entry)?)?;
        fs::rename(&tmp, path)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{full_grid, Ambient};
    use crate::solutions::{count_solutions, CountOptions};

    fn spec(n: u32) -> EquationSpec {
        EquationSpec::symmetric(Ambient::Box, 1, n, 2, 2, 4).unwrap()
    }

    #[test]
    fn reuse_truncation_and_spec_change() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let s = spec(7);
        let a = full_grid(&s).unwrap();
        let b = Budget::default();
        let (m1, st1) = cache.multiplicities(&a, &s, &b).unwrap();
        assert_eq!(st1, CacheStatus::Miss);
        let (m2, st2) = cache.multiplicities(&a, &s, &b).unwrap();
        assert_eq!(st2, CacheStatus::Hit);
        assert_eq!(m1, m2);

        let opts = CountOptions {
            multiplicities: Some(&m2),
            ..Default::default()
        };
        let cached = count_solutions(&a, &s, &opts).unwrap();
        let fresh = count_solutions(&a, &s, &CountOptions::default()).unwrap();
        assert_eq!(cached, fresh);

        let path = cache.path_for(&a, &s);
        let bytes = fs::read(&path).unwrap();
        fs::write(&path, &bytes[..bytes.len() / 2]).unwrap();
        let (m3, st3) = cache.multiplicities(&a, &s, &b).unwrap();
        assert_eq!(st3, CacheStatus::Rebuilt);
        assert_eq!(m3, m1);

        let other = s.with_r(5);
        let (_, st4) = cache.multiplicities(&a, &other, &b).unwrap();
        assert_eq!(st4, CacheStatus::Miss);
    }
}
