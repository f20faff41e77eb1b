use std::sync::Mutex;
use std::time::{Duration, Instant};

use semver::{Version, VersionReq};
use serde::Deserialize;

use super::{Dependency, FetchError, Fetcher, RegistryDoc, SourceKind};

pub const CRATES_IO_API: &str = "https://crates.io/api/v1";

/// Points [`CratesIo::live`] at a mirror or a test server.
pub const REGISTRY_ENV: &str = "TRUSTCOST_REGISTRY";

/// Blocking GET returning the response body.
pub trait Transport: Send + Sync {
    fn get(&self, url: &str) -> Result<String, FetchError>;
}

pub struct UreqTransport {
    agent: ureq::Agent,
    user_agent: String,
}

impl UreqTransport {
    pub fn new(user_agent: impl Into<String>) -> Self {
        let config = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_secs(30)))
            .build();
        UreqTransport {
            agent: config.into(),
            user_agent: user_agent.into(),
        }
    }
}

impl Transport for UreqTransport {
    fn get(&self, url: &str) -> Result<String, FetchError> {
        let response = self
            .agent
            .get(url)
            .header("User-Agent", &self.user_agent)
            .call();
        match response {
            Ok(mut r) => r
                .body_mut()
                .read_to_string()
                .map_err(|e| FetchError::Network(e.to_string())),
            Err(ureq::Error::StatusCode(404)) => Err(FetchError::NotFound),
            Err(ureq::Error::StatusCode(code)) if code < 500 && code != 429 => {
                Err(FetchError::Malformed(format!("{url}: http status {code}")))
            }
            Err(e) => Err(FetchError::Network(format!("{url}: {e}"))),
        }
    }
}

/// Registry metadata from the crates.io web API.
///
/// Downloads are the crate's all-time total. Authors are the crate's
/// owners. Stars and forks are not served by the registry and stay zero.
/// Normal, non-optional dependencies are resolved to the newest
/// non-yanked release matching their requirement.
pub struct CratesIo<T: Transport> {
    transport: T,
    base: String,
    min_interval: Duration,
    last_request: Mutex<Option<Instant>>,
}

impl CratesIo<UreqTransport> {
    pub fn live() -> Self {
        let ua = format!(
            "trustcost/{} (supply-chain trust report)",
            env!("CARGO_PKG_VERSION")
        );
        // the registry's crawler policy asks for at most one request per second
        let base = std::env::var(REGISTRY_ENV).unwrap_or_else(|_| CRATES_IO_API.to_string());
        CratesIo::new(UreqTransport::new(ua), base).with_min_interval(Duration::from_secs(1))
    }
}

#[derive(Deserialize)]
struct CrateResponse {
    #[serde(rename = "crate")]
    krate: CrateInfo,
    versions: Vec<VersionInfo>,
}

#[derive(Deserialize)]
struct CrateInfo {
    downloads: u64,
    max_stable_version: Option<Version>,
    max_version: Version,
}

#[derive(Deserialize)]
struct VersionInfo {
    num: Version,
    #[serde(default)]
    yanked: bool,
}

#[derive(Deserialize)]
struct DependenciesResponse {
    dependencies: Vec<DependencyInfo>,
}

#[derive(Deserialize)]
struct DependencyInfo {
    crate_id: String,
    req: VersionReq,
    #[serde(default)]
    kind: Option<String>,
    #[serde(default)]
    optional: bool,
}

#[derive(Deserialize)]
struct OwnersResponse {
    users: Vec<Owner>,
}

#[derive(Deserialize)]
struct Owner {
    login: String,
}

impl<T: Transport> CratesIo<T> {
    pub fn new(transport: T, base: impl Into<String>) -> Self {
        CratesIo {
            transport,
            base: base.into().trim_end_matches('/').to_string(),
            min_interval: Duration::ZERO,
            last_request: Mutex::new(None),
        }
    }

    pub fn with_min_interval(mut self, interval: Duration) -> Self {
        self.min_interval = interval;
        self
    }

    fn request<R: for<'de> Deserialize<'de>>(&self, path: &str) -> Result<R, FetchError> {
        {
            let mut last = self.last_request.lock().unwrap_or_else(|e| e.into_inner());
            if let Some(t) = *last {
                let wait = self.min_interval.saturating_sub(t.elapsed());
                if !wait.is_zero() {
                    std::thread::sleep(wait);
                }
            }
            *last = Some(Instant::now());
        }
        let body = self.transport.get(&format!("{}{path}", self.base))?;
        serde_json::from_str(&body).map_err(|e| FetchError::Malformed(format!("{path}: {e}")))
    }

    fn crate_info(&self, name: &str) -> Result<CrateResponse, FetchError> {
        self.request(&format!("/crates/{name}"))
    }

    fn resolve(&self, name: &str, req: &VersionReq) -> Result<Version, FetchError> {
        let info = self.crate_info(name)?;
        info.versions
            .into_iter()
            .filter(|v| !v.yanked && req.matches(&v.num))
            .map(|v| v.num)
            .max()
            .ok_or(FetchError::NotFound)
    }

    pub fn registry_doc(
        &self,
        name: &str,
        version: Option<&Version>,
    ) -> Result<RegistryDoc, FetchError> {
        let info = self.crate_info(name)?;
        let version = match version {
            Some(v) => {
                if !info.versions.iter().any(|x| x.num == *v) {
                    return Err(FetchError::NotFound);
                }
                v.clone()
            }
            None => info
                .krate
                .max_stable_version
                .unwrap_or(info.krate.max_version),
        };
        let deps: DependenciesResponse =
            self.request(&format!("/crates/{name}/{version}/dependencies"))?;
        let owners: OwnersResponse = self.request(&format!("/crates/{name}/owners"))?;
        let mut dependencies = Vec::new();
        for d in deps.dependencies {
            if d.optional || d.kind.as_deref().is_some_and(|k| k != "normal") {
                continue;
            }
            let resolved = self.resolve(&d.crate_id, &d.req)?;
            dependencies.push(Dependency {
                name: d.crate_id,
                req: d.req,
                version: resolved,
            });
        }
        Ok(RegistryDoc {
            name: name.to_string(),
            version,
            downloads: info.krate.downloads,
            authors: owners.users.into_iter().map(|u| u.login).collect(),
            stars: 0,
            forks: 0,
            dependencies,
        })
    }
}

impl<T: Transport> Fetcher for CratesIo<T> {
    fn kind(&self) -> SourceKind {
        SourceKind::Registry
    }

    fn get(&self, name: &str, version: Option<&Version>) -> Result<Option<String>, FetchError> {
        match self.registry_doc(name, version) {
            Ok(doc) => Ok(Some(
                serde_json::to_string(&doc).expect("registry document serializes"),
            )),
            Err(FetchError::NotFound) => Ok(None),
            Err(e) => Err(e),
        }
    }
}
