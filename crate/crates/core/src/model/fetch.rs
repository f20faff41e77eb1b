use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::time::Duration;

use semver::{Version, VersionReq};
use serde::{Deserialize, Serialize};

use super::{
    Advisory, Audit, Cache, CrateKey, CrateRecord, Dependency, ModelError, Severity, ToolResult,
};

/// Where a piece of metadata came from. Earlier variants win when sources
/// disagree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SourceKind {
    Registry,
    Audits,
    Advisories,
    ToolResults,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FetchError {
    #[error("not found")]
    NotFound,
    /// Worth retrying.
    #[error("network: {0}")]
    Network(String),
    #[error("malformed document: {0}")]
    Malformed(String),
}

/// A source of raw metadata documents for one [`SourceKind`].
///
/// `Ok(None)` means the source has nothing to say about the crate, which
/// is normal for audits, advisories and tool results. `version` is `None`
/// when the caller wants whatever the source considers newest.
pub trait Fetcher: Send + Sync {
    fn kind(&self) -> SourceKind;
    fn get(&self, name: &str, version: Option<&Version>) -> Result<Option<String>, FetchError>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RetryPolicy {
    pub attempts: u32,
    pub initial_backoff: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            attempts: 3,
            initial_backoff: Duration::from_millis(500),
        }
    }
}

impl RetryPolicy {
    /// Runs `op` until it succeeds, fails with a non-network error, or
    /// runs out of attempts. The pause doubles after each failure.
    pub fn run<T>(&self, mut op: impl FnMut() -> Result<T, FetchError>) -> Result<T, FetchError> {
        let mut backoff = self.initial_backoff;
        let mut attempt = 1;
        loop {
            match op() {
                Err(FetchError::Network(_)) if attempt < self.attempts => {
                    std::thread::sleep(backoff);
                    backoff *= 2;
                    attempt += 1;
                }
                other => return other,
            }
        }
    }
}

/// Registry document. The registry is the only source that decides which
/// version exists.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegistryDoc {
    pub name: String,
    pub version: Version,
    #[serde(default)]
    pub downloads: u64,
    #[serde(default)]
    pub authors: Vec<String>,
    #[serde(default)]
    pub stars: u64,
    #[serde(default)]
    pub forks: u64,
    #[serde(default)]
    pub dependencies: Vec<Dependency>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct AuditsDoc {
    pub audits: Vec<Audit>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AdvisoryEntry {
    pub id: String,
    pub severity: Severity,
    /// Requirements satisfied by fixed releases.
    #[serde(default)]
    pub patched: Vec<VersionReq>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct AdvisoriesDoc {
    pub advisories: Vec<AdvisoryEntry>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ToolResultsDoc {
    pub tool_results: Vec<ToolResult>,
}

/// The fields one source contributed.
#[derive(Debug, Clone, Default)]
struct Partial {
    registry: Option<RegistryDoc>,
    audits: Option<Vec<Audit>>,
    advisories: Option<Vec<Advisory>>,
    tool_results: Option<Vec<ToolResult>>,
}

fn parse<T: for<'de> Deserialize<'de>>(kind: SourceKind, text: &str) -> Result<T, ModelError> {
    serde_json::from_str(text).map_err(|e| ModelError::parse(format!("{kind:?} document"), e))
}

fn partial(kind: SourceKind, text: &str, version: &Version) -> Result<Partial, ModelError> {
    let mut p = Partial::default();
    match kind {
        SourceKind::Registry => p.registry = Some(parse(kind, text)?),
        SourceKind::Audits => p.audits = Some(parse::<AuditsDoc>(kind, text)?.audits),
        SourceKind::Advisories => {
            let doc: AdvisoriesDoc = parse(kind, text)?;
            p.advisories = Some(
                doc.advisories
                    .into_iter()
                    .map(|a| Advisory {
                        patched_in_queried_version: a.patched.iter().any(|r| r.matches(version)),
                        id: a.id,
                        severity: a.severity,
                    })
                    .collect(),
            );
        }
        SourceKind::ToolResults => {
            p.tool_results = Some(parse::<ToolResultsDoc>(kind, text)?.tool_results)
        }
    }
    Ok(p)
}

/// Folds per-source contributions into one record. Each field comes from
/// one source kind; the registry document of the first registry wins and
/// list fields from several sources of the same kind are concatenated.
/// Sorting by (kind, fetcher index) first makes the result independent of
/// which fetch finished first.
fn merge(
    name: &str,
    version: &Version,
    mut parts: Vec<(SourceKind, usize, Partial)>,
) -> CrateRecord {
    parts.sort_by_key(|(kind, index, _)| (*kind, *index));
    let mut record = CrateRecord::new(name, version.clone());
    let mut seen_registry = false;
    for (kind, _, p) in parts {
        let mut fields: Vec<&str> = Vec::new();
        if let Some(reg) = p.registry.filter(|_| !seen_registry) {
            seen_registry = true;
            record.downloads = reg.downloads;
            record.authors = reg.authors;
            record.stars = reg.stars;
            record.forks = reg.forks;
            record.dependencies = reg.dependencies;
            fields.extend(["downloads", "authors", "stars", "forks", "dependencies"]);
        }
        if let Some(items) = p.audits {
            record.audits.extend(items);
            fields.push("audits");
        }
        if let Some(items) = p.advisories {
            record.advisories.extend(items);
            fields.push("advisories");
        }
        if let Some(items) = p.tool_results {
            record.tool_results.extend(items);
            fields.push("tool_results");
        }
        for f in fields {
            record.provenance.entry(f.to_string()).or_insert(kind);
        }
    }
    record
}

/// Offline mode never touches a fetcher.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FetchMode {
    #[default]
    Online,
    Offline,
}

/// Cache plus fetchers: the record source behind graph resolution.
pub struct RecordSource {
    pub cache: Option<Cache>,
    pub fetchers: Vec<Box<dyn Fetcher>>,
    pub retry: RetryPolicy,
    pub mode: FetchMode,
}

impl RecordSource {
    pub fn offline(cache: Cache) -> Self {
        RecordSource {
            cache: Some(cache),
            fetchers: Vec::new(),
            retry: RetryPolicy::default(),
            mode: FetchMode::Offline,
        }
    }

    pub fn online(cache: Option<Cache>, fetchers: Vec<Box<dyn Fetcher>>) -> Self {
        RecordSource {
            cache,
            fetchers,
            retry: RetryPolicy::default(),
            mode: FetchMode::Online,
        }
    }

    pub fn with_retry(mut self, retry: RetryPolicy) -> Self {
        self.retry = retry;
        self
    }

    /// Cache first. Online, a miss is fetched from every source and
    /// written through to the cache. Offline, a miss is
    /// [`ModelError::NetworkUnavailable`].
    pub fn fetch_record(
        &self,
        name: &str,
        version: Option<&Version>,
    ) -> Result<CrateRecord, ModelError> {
        let cached_version = match (version, &self.cache) {
            (Some(v), _) => Some(v.clone()),
            // online callers asking for the newest version go to the registry
            (None, Some(cache)) if self.mode == FetchMode::Offline => cache.newest(name)?,
            _ => None,
        };
        if let (Some(v), Some(cache)) = (&cached_version, &self.cache) {
            match cache.load(&CrateKey::new(name, v.clone())) {
                Ok(r) => return Ok(r),
                Err(ModelError::NotFound(_)) => {}
                Err(e) => return Err(e),
            }
        }
        if self.mode == FetchMode::Offline {
            let what = match version {
                Some(v) => format!("{name}@{v}"),
                None => name.to_string(),
            };
            return Err(ModelError::NetworkUnavailable(format!(
                "{what} is not cached and offline mode is on"
            )));
        }
        let record = self.fetch_live(name, version)?;
        if let Some(cache) = &self.cache {
            cache.store(&record)?;
        }
        Ok(record)
    }

    pub fn fetch_key(&self, key: &CrateKey) -> Result<CrateRecord, ModelError> {
        self.fetch_record(&key.name, Some(&key.version))
    }

    fn fetch_live(&self, name: &str, version: Option<&Version>) -> Result<CrateRecord, ModelError> {
        let registries: Vec<&dyn Fetcher> = self
            .fetchers
            .iter()
            .map(|f| f.as_ref())
            .filter(|f| f.kind() == SourceKind::Registry)
            .collect();
        if registries.is_empty() {
            return Err(ModelError::NetworkUnavailable(
                "no registry source configured".into(),
            ));
        }
        let not_found =
            || ModelError::NotFound(version.map_or(name.to_string(), |v| format!("{name}@{v}")));
        let lift = |kind: SourceKind, e: FetchError| match e {
            FetchError::NotFound => not_found(),
            FetchError::Network(m) => ModelError::NetworkUnavailable(m),
            FetchError::Malformed(m) => ModelError::Parse {
                origin: format!("{kind:?} document"),
                message: m,
            },
        };

        // the registry settles the version before anything else is asked
        let text = self
            .retry
            .run(|| registries[0].get(name, version))
            .map_err(|e| lift(SourceKind::Registry, e))?
            .ok_or_else(not_found)?;
        let head = partial(
            SourceKind::Registry,
            &text,
            version.unwrap_or(&Version::new(0, 0, 0)),
        )?;
        let resolved = head
            .registry
            .as_ref()
            .map(|r| r.version.clone())
            .expect("registry partial");
        if version.is_some_and(|v| *v != resolved) {
            return Err(ModelError::Invalid(format!(
                "registry answered {name}@{resolved}"
            )));
        }

        let others: Vec<(usize, &dyn Fetcher)> = self
            .fetchers
            .iter()
            .enumerate()
            .filter(|(_, f)| f.kind() != SourceKind::Registry)
            .map(|(i, f)| (i, f.as_ref()))
            .collect();
        type Fetched = Result<Option<(SourceKind, usize, Partial)>, ModelError>;
        let results: Vec<Fetched> = std::thread::scope(|s| {
            let handles: Vec<_> = others
                .iter()
                .map(|&(i, f)| {
                    let resolved = &resolved;
                    s.spawn(move || {
                        let kind = f.kind();
                        match self.retry.run(|| f.get(name, Some(resolved))) {
                            Ok(Some(text)) => Ok(Some((kind, i, partial(kind, &text, resolved)?))),
                            Ok(None) | Err(FetchError::NotFound) => Ok(None),
                            Err(e) => Err(lift(kind, e)),
                        }
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("fetch thread panicked"))
                .collect()
        });
        let mut parts = vec![(SourceKind::Registry, 0, head)];
        for r in results {
            parts.extend(r?);
        }
        let record = merge(name, &resolved, parts);
        record.validate()?;
        Ok(record)
    }
}

/// Serves documents from `<dir>/<name>/<version>.json`, falling back to
/// `<dir>/<name>.json` for sources that describe every version at once.
#[derive(Debug, Clone)]
pub struct DirFetcher {
    kind: SourceKind,
    dir: PathBuf,
}

impl DirFetcher {
    pub fn new(kind: SourceKind, dir: impl Into<PathBuf>) -> Self {
        DirFetcher {
            kind,
            dir: dir.into(),
        }
    }
}

impl Fetcher for DirFetcher {
    fn kind(&self) -> SourceKind {
        self.kind
    }

    fn get(&self, name: &str, version: Option<&Version>) -> Result<Option<String>, FetchError> {
        let mut candidates = Vec::new();
        match version {
            Some(v) => candidates.push(self.dir.join(name).join(format!("{v}.json"))),
            None => {
                let newest = fs::read_dir(self.dir.join(name))
                    .into_iter()
                    .flatten()
                    .filter_map(|e| e.ok())
                    .filter_map(|e| {
                        let p = e.path();
                        let v = Version::parse(p.file_stem()?.to_str()?).ok()?;
                        Some((v, p))
                    })
                    .max_by(|a, b| a.0.cmp(&b.0));
                candidates.extend(newest.map(|(_, p)| p));
            }
        }
        candidates.push(self.dir.join(format!("{name}.json")));
        for path in candidates {
            match fs::read_to_string(&path) {
                Ok(text) => return Ok(Some(text)),
                Err(e) if e.kind() == std::io::ErrorKind::NotFound => continue,
                Err(e) => return Err(FetchError::Network(format!("{}: {e}", path.display()))),
            }
        }
        Ok(None)
    }
}

/// Canned documents keyed by crate name, for tests and demos.
#[derive(Debug, Clone, Default)]
pub struct MemoryFetcher {
    kind: Option<SourceKind>,
    docs: BTreeMap<String, String>,
}

impl MemoryFetcher {
    pub fn new(kind: SourceKind) -> Self {
        MemoryFetcher {
            kind: Some(kind),
            docs: BTreeMap::new(),
        }
    }

    pub fn with(mut self, name: impl Into<String>, doc: impl Serialize) -> Self {
        self.docs.insert(
            name.into(),
            serde_json::to_string(&doc).expect("document serializes"),
        );
        self
    }
}

impl Fetcher for MemoryFetcher {
    fn kind(&self) -> SourceKind {
        self.kind.unwrap_or(SourceKind::Registry)
    }

    fn get(&self, name: &str, _version: Option<&Version>) -> Result<Option<String>, FetchError> {
        Ok(self.docs.get(name).cloned())
    }
}
