//! On-disk cache of automorphism groups keyed by table hash.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::automorphism::{enumerate_automorphisms, is_automorphism_on_generators, AutomorphismGroup, GroupMap, MapError};
use crate::group::FiniteGroup;

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "CUBING_CACHE_DIR";

#[derive(Serialize, Deserialize)]
struct CacheFile {
    table_hash: String,
    aut_order: usize,
    members: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CachePolicy {
    #[default]
    Use,
    Bypass,
    Rebuild,
}

#[derive(Clone, Debug)]
pub struct AutCache {
    dir: PathBuf,
}

impl AutCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        AutCache { dir: dir.into() }
    }

    /// `$CUBING_CACHE_DIR`, else `$XDG_CACHE_HOME/cubing`, else `~/.cache/cubing`.
    pub fn default_dir() -> Option<PathBuf> {
        if let Some(d) = std::env::var_os(CACHE_ENV) {
            return Some(PathBuf::from(d));
        }
        if let Some(d) = std::env::var_os("XDG_CACHE_HOME") {
            return Some(PathBuf::from(d).join("cubing"));
        }
        std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("cubing"))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, hash: &str) -> PathBuf {
        self.dir.join(format!("aut-{hash}.json"))
    }

    /// Loads and revalidates a cached entry; anything inconsistent counts as a miss.
    pub fn load(&self, g: &FiniteGroup) -> Option<AutomorphismGroup> {
        let hash = g.table_hash();
        let text = fs::read_to_string(self.path(&hash)).ok()?;
        let file: CacheFile = serde_json::from_str(&text).ok()?;
        if file.table_hash != hash || file.aut_order != file.members.len() || file.members.is_empty() {
            return None;
        }
        let gens = g.small_generating_set();
        let members: Vec<GroupMap> = file.members.into_iter().map(GroupMap::new).collect();
        let sorted = members.windows(2).all(|w| w[0] < w[1]);
        if !sorted || !members[0].is_identity() {
            return None;
        }
        if !members.iter().all(|m| is_automorphism_on_generators(g, &gens, m)) {
            return None;
        }
        Some(AutomorphismGroup { members, generators: gens, nodes: None })
    }

    pub fn store(&self, g: &FiniteGroup, aut: &AutomorphismGroup) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let file = CacheFile {
            table_hash: g.table_hash(),
            aut_order: aut.order(),
            members: aut.members.iter().map(|m| m.images().to_vec()).collect(),
        };
        let hash = g.table_hash();
        let tmp = self.dir.join(format!(".aut-{hash}.{}.tmp", std::process::id()));
        fs::write(&tmp, serde_json::to_vec(&file).expect("plain data serializes"))?;
        fs::rename(tmp, self.path(&hash))
    }
}

/// Enumerates `Aut(G)`, consulting the cache according to `policy`.
///
/// Write failures are ignored: the cache is an accelerator only.
pub fn automorphisms(
    g: &FiniteGroup,
    cache: Option<&AutCache>,
    policy: CachePolicy,
    cap: Option<usize>,
) -> Result<AutomorphismGroup, MapError> {
    let cache = cache.filter(|_| policy != CachePolicy::Bypass);
    if let (Some(c), CachePolicy::Use) = (cache, policy) {
        if let Some(aut) = c.load(g) {
            if cap.is_some_and(|k| aut.order() > k) {
                return Err(MapError::CapExceeded { cap: cap.unwrap_or_default() });
            }
            return Ok(aut);
        }
    }
    let aut = enumerate_automorphisms(g, cap)?;
    if let Some(c) = cache {
        let _ = c.store(g, &aut);
    }
    Ok(aut)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders;

    fn scratch(tag: &str) -> PathBuf {
        let d = std::env::temp_dir().join(format!("cubing-cache-test-{tag}-{}", std::process::id()));
        let _ = fs::remove_dir_all(&d);
        d
    }

    #[test]
    fn round_trip_and_tamper() {
        let dir = scratch("rt");
        let cache = AutCache::new(&dir);
        let g = builders::dihedral(4).unwrap();
        let fresh = automorphisms(&g, Some(&cache), CachePolicy::Use, None).unwrap();
        assert_eq!(fresh.order(), 8);
        let again = cache.load(&g).expect("cached");
        assert_eq!(again.members, fresh.members);
        let path = cache.path(&g.table_hash());
        let mut file: CacheFile = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        file.members[1].swap(1, 2);
        fs::write(&path, serde_json::to_string(&file).unwrap()).unwrap();
        assert!(cache.load(&g).is_none());
        let rebuilt = automorphisms(&g, Some(&cache), CachePolicy::Use, None).unwrap();
        assert_eq!(rebuilt.members, fresh.members);
        assert!(cache.load(&g).is_some());
        let _ = fs::remove_dir_all(&dir);
    }

    #[test]
    fn wrong_hash_is_a_miss() {
        let dir = scratch("hash");
        let cache = AutCache::new(&dir);
        let g = builders::cyclic(5).unwrap();
        let h = builders::cyclic(7).unwrap();
        automorphisms(&h, Some(&cache), CachePolicy::Use, None).unwrap();
        fs::copy(cache.path(&h.table_hash()), cache.path(&g.table_hash())).unwrap();
        assert!(cache.load(&g).is_none());
        let _ = fs::remove_dir_all(&dir);
    }
}
