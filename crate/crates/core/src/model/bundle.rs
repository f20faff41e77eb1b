use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{Cache, CrateKey, CrateRecord, ModelError};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TyposquatPair {
    pub original: CrateKey,
    pub variant: CrateKey,
}

/// Lists the crates a bundle is about. Records of their dependencies sit
/// alongside without being roots.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub roots: Vec<CrateKey>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pairs: Vec<TyposquatPair>,
}

/// A directory in cache layout plus a manifest.
#[derive(Debug, Clone)]
pub struct Bundle {
    pub dir: PathBuf,
    pub manifest: Manifest,
}

impl Bundle {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self, ModelError> {
        let dir = dir.into();
        let path = dir.join(MANIFEST_FILE);
        let text = fs::read_to_string(&path)?;
        let manifest =
            serde_json::from_str(&text).map_err(|e| ModelError::parse(path.display(), e))?;
        Ok(Bundle { dir, manifest })
    }

    pub fn write(
        dir: &Path,
        records: &[CrateRecord],
        manifest: Manifest,
    ) -> Result<Self, ModelError> {
        fs::create_dir_all(dir)?;
        let cache = Cache::new(dir);
        for r in records {
            cache.store(r)?;
        }
        let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        fs::write(dir.join(MANIFEST_FILE), text + "\n")?;
        Ok(Bundle {
            dir: dir.to_path_buf(),
            manifest,
        })
    }

    pub fn cache(&self) -> Cache {
        Cache::new(&self.dir)
    }

    pub fn records(&self) -> Result<Vec<CrateRecord>, ModelError> {
        let cache = self.cache();
        cache.keys()?.iter().map(|k| cache.load(k)).collect()
    }

    /// An optional `assumptions.json` shipped with the bundle.
    pub fn config_path(&self) -> Option<PathBuf> {
        Some(self.dir.join("assumptions.json")).filter(|p| p.is_file())
    }
}
