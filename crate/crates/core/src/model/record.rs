use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use semver::{Version, VersionReq};
use serde::{Deserialize, Serialize};

use super::{ModelError, SourceKind};

/// A crate at one exact version. Used as the identity of graph nodes and
/// cache entries. Serialized as `name@version`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct CrateKey {
    pub name: String,
    pub version: Version,
}

impl CrateKey {
    pub fn new(name: impl Into<String>, version: Version) -> Self {
        CrateKey {
            name: name.into(),
            version,
        }
    }
}

impl fmt::Display for CrateKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.name, self.version)
    }
}

impl From<CrateKey> for String {
    fn from(k: CrateKey) -> String {
        k.to_string()
    }
}

impl TryFrom<String> for CrateKey {
    type Error = ModelError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl FromStr for CrateKey {
    type Err = ModelError;

    /// `name@1.2.3`
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, version) = s
            .rsplit_once('@')
            .ok_or_else(|| ModelError::Invalid(format!("`{s}` is not of the form name@version")))?;
        let version =
            Version::parse(version).map_err(|e| ModelError::Invalid(format!("`{s}`: {e}")))?;
        Ok(CrateKey::new(name, version))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dependency {
    pub name: String,
    /// Requirement as declared by the depending crate.
    pub req: VersionReq,
    /// Version the requirement was resolved to when the record was captured.
    pub version: Version,
}

impl Dependency {
    pub fn key(&self) -> CrateKey {
        CrateKey::new(&self.name, self.version.clone())
    }
}

/// Which versions an audit speaks for.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AuditScope {
    Version(Version),
    Range(VersionReq),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Audit {
    pub organization: String,
    pub criteria: String,
    pub scope: AuditScope,
    pub passed: bool,
}

impl Audit {
    pub fn covers(&self, version: &Version) -> bool {
        match &self.scope {
            AuditScope::Version(v) => v == version,
            AuditScope::Range(req) => req.matches(version),
        }
    }

    /// An exact-version audit of a release older than `version`.
    pub fn is_before(&self, version: &Version) -> bool {
        matches!(&self.scope, AuditScope::Version(v) if v < version)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ToolKind {
    /// Undefined-behaviour detector run over the crate's tests.
    Miri,
    /// Static scan counting calls with observable effects.
    SideEffects,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToolResult {
    pub tool: ToolKind,
    #[serde(default)]
    pub flagged: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side_effect_count: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Critical,
    High,
    Medium,
    Low,
    Informational,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Critical => "critical",
            Severity::High => "high",
            Severity::Medium => "medium",
            Severity::Low => "low",
            Severity::Informational => "informational",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Advisory {
    pub id: String,
    pub severity: Severity,
    #[serde(default)]
    pub patched_in_queried_version: bool,
}

/// Everything known about one crate version.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrateRecord {
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
    #[serde(default)]
    pub audits: Vec<Audit>,
    #[serde(default)]
    pub tool_results: Vec<ToolResult>,
    #[serde(default)]
    pub advisories: Vec<Advisory>,
    /// Field name to the source it was taken from.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub provenance: BTreeMap<String, SourceKind>,
}

impl CrateRecord {
    pub fn new(name: impl Into<String>, version: Version) -> Self {
        CrateRecord {
            name: name.into(),
            version,
            downloads: 0,
            authors: Vec::new(),
            stars: 0,
            forks: 0,
            dependencies: Vec::new(),
            audits: Vec::new(),
            tool_results: Vec::new(),
            advisories: Vec::new(),
            provenance: BTreeMap::new(),
        }
    }

    pub fn key(&self) -> CrateKey {
        CrateKey::new(&self.name, self.version.clone())
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let bad = |msg: String| Err(ModelError::Invalid(format!("{}: {msg}", self.key())));
        if self.name.trim().is_empty() {
            return Err(ModelError::Invalid("crate name is empty".into()));
        }
        let mut ids = BTreeSet::new();
        if let Some(a) = self.advisories.iter().find(|a| !ids.insert(&a.id)) {
            return bad(format!("advisory `{}` listed twice", a.id));
        }
        for t in &self.tool_results {
            if t.side_effect_count.is_some() && t.tool != ToolKind::SideEffects {
                return bad(format!("{:?} result carries a side-effect count", t.tool));
            }
        }
        for d in &self.dependencies {
            if !d.req.matches(&d.version) {
                return bad(format!(
                    "dependency {} {} does not match `{}`",
                    d.name, d.version, d.req
                ));
            }
        }
        Ok(())
    }

    pub fn tool(&self, kind: ToolKind) -> Option<&ToolResult> {
        self.tool_results.iter().find(|t| t.tool == kind)
    }

    pub fn side_effect_count(&self) -> Option<u32> {
        self.tool(ToolKind::SideEffects)
            .map(|t| t.side_effect_count.unwrap_or(0))
    }

    pub fn stars_and_forks(&self) -> u64 {
        self.stars + self.forks
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_round_trips_through_text() {
        let k: CrateKey = "serde_yaml@0.9.33".parse().unwrap();
        assert_eq!(k.to_string(), "serde_yaml@0.9.33");
        assert!("no-version".parse::<CrateKey>().is_err());
    }

    #[test]
    fn range_audit_covers_matching_versions() {
        let audit = Audit {
            organization: "google".into(),
            criteria: "safe-to-deploy".into(),
            scope: AuditScope::Range(">=1.0, <2".parse().unwrap()),
            passed: true,
        };
        assert!(audit.covers(&Version::new(1, 4, 0)));
        assert!(!audit.covers(&Version::new(2, 0, 0)));
        assert!(!audit.is_before(&Version::new(2, 0, 0)));
    }

    #[test]
    fn side_effect_count_on_wrong_tool_is_invalid() {
        let mut r = CrateRecord::new("x", Version::new(1, 0, 0));
        r.tool_results.push(ToolResult {
            tool: ToolKind::Miri,
            flagged: true,
            side_effect_count: Some(3),
        });
        assert!(r.validate().is_err());
    }

    #[test]
    fn duplicate_advisory_is_invalid() {
        let mut r = CrateRecord::new("x", Version::new(1, 0, 0));
        let adv = Advisory {
            id: "RUSTSEC-0000-0001".into(),
            severity: Severity::High,
            patched_in_queried_version: false,
        };
        r.advisories = vec![adv.clone(), adv];
        assert!(r.validate().is_err());
    }
}
