use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use semver::Version;
use serde::{Deserialize, Serialize};

use super::{resolve_graph, CrateKey, CrateRecord, DependencyGraph, ModelError};

pub const CACHE_SCHEMA: u32 = 1;

/// Overrides the default cache location.
pub const CACHE_ENV: &str = "TRUSTCOST_CACHE";

#[derive(Serialize, Deserialize)]
struct Document {
    schema: u32,
    #[serde(flatten)]
    record: CrateRecord,
}

/// One JSON document per crate version at `<dir>/<name>/<version>.json`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    /// `$TRUSTCOST_CACHE`, else `$XDG_CACHE_HOME/trustcost`, else
    /// `~/.cache/trustcost`.
    pub fn default_dir() -> PathBuf {
        if let Some(dir) = std::env::var_os(CACHE_ENV) {
            return dir.into();
        }
        if let Some(xdg) = std::env::var_os("XDG_CACHE_HOME") {
            return PathBuf::from(xdg).join("trustcost");
        }
        let home = std::env::var_os("HOME")
            .map(PathBuf::from)
            .unwrap_or_else(|| ".".into());
        home.join(".cache").join("trustcost")
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// The dependency graph below `root`, read entirely from this cache.
    pub fn graph(&self, root: &CrateKey) -> Result<DependencyGraph, ModelError> {
        resolve_graph(self.load(root)?, |k| self.load(k))
    }

    pub fn path_for(&self, key: &CrateKey) -> PathBuf {
        self.dir
            .join(&key.name)
            .join(format!("{}.json", key.version))
    }

    /// Written to a temporary file in the target directory and renamed
    /// into place, so readers never observe a partial document.
    pub fn store(&self, record: &CrateRecord) -> Result<PathBuf, ModelError> {
        record.validate()?;
        let path = self.path_for(&record.key());
        let parent = path.parent().expect("cache paths have a parent");
        fs::create_dir_all(parent)?;
        let doc = Document {
            schema: CACHE_SCHEMA,
            record: record.clone(),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(parent)?;
        serde_json::to_writer_pretty(&mut tmp, &doc)
            .map_err(|e| ModelError::parse(path.display(), e))?;
        tmp.write_all(b"\n")?;
        tmp.persist(&path).map_err(|e| ModelError::Io(e.error))?;
        Ok(path)
    }

    pub fn load(&self, key: &CrateKey) -> Result<CrateRecord, ModelError> {
        let path = self.path_for(key);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                return Err(ModelError::NotFound(key.to_string()))
            }
            Err(e) => return Err(e.into()),
        };
        let record = parse_document(&text).map_err(|e| match e {
            ModelError::Parse { message, .. } => ModelError::Parse {
                origin: path.display().to_string(),
                message,
            },
            other => other,
        })?;
        if record.key() != *key {
            return Err(ModelError::Invalid(format!(
                "{} holds {}, not {key}",
                path.display(),
                record.key()
            )));
        }
        Ok(record)
    }

    pub fn contains(&self, key: &CrateKey) -> bool {
        self.path_for(key).is_file()
    }

    /// Cached versions of `name`, oldest first.
    pub fn versions(&self, name: &str) -> Result<Vec<Version>, ModelError> {
        let dir = self.dir.join(name);
        let entries = match fs::read_dir(&dir) {
            Ok(e) => e,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(e.into()),
        };
        let mut out = Vec::new();
        for entry in entries {
            let path = entry?.path();
            if path.extension().is_some_and(|e| e == "json") {
                if let Some(v) = path
                    .file_stem()
                    .and_then(|s| s.to_str())
                    .and_then(|s| Version::parse(s).ok())
                {
                    out.push(v);
                }
            }
        }
        out.sort();
        Ok(out)
    }

    pub fn newest(&self, name: &str) -> Result<Option<Version>, ModelError> {
        Ok(self.versions(name)?.pop())
    }

    /// Every cached record, in key order.
    pub fn keys(&self) -> Result<Vec<CrateKey>, ModelError> {
        let mut keys = Vec::new();
        let entries = match fs::read_dir(&self.dir) {
            Ok(e) => e,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(keys),
            Err(e) => return Err(e.into()),
        };
        for entry in entries {
            let entry = entry?;
            if !entry.file_type()?.is_dir() {
                continue;
            }
            let name = entry.file_name().to_string_lossy().into_owned();
            for v in self.versions(&name)? {
                keys.push(CrateKey::new(&name, v));
            }
        }
        keys.sort();
        Ok(keys)
    }
}

fn parse_document(text: &str) -> Result<CrateRecord, ModelError> {
    // read the schema first so a newer layout is reported as such rather
    // than as whatever field it happened to break
    #[derive(Deserialize)]
    struct Header {
        schema: u32,
    }
    let header: Header =
        serde_json::from_str(text).map_err(|e| ModelError::parse("cache entry", e))?;
    if header.schema != CACHE_SCHEMA {
        return Err(ModelError::SchemaVersionMismatch {
            found: header.schema,
            expected: CACHE_SCHEMA,
        });
    }
    let doc: Document =
        serde_json::from_str(text).map_err(|e| ModelError::parse("cache entry", e))?;
    doc.record.validate()?;
    Ok(doc.record)
}
