//! Crate metadata: records, dependency graphs, the on-disk cache and the
//! sources that fill it.

mod bundle;
mod cache;
mod cratesio;
mod fetch;
mod graph;
mod record;
mod synth;

pub use bundle::{Bundle, Manifest, TyposquatPair, MANIFEST_FILE};
pub use cache::{Cache, CACHE_ENV, CACHE_SCHEMA};
pub use cratesio::{CratesIo, Transport, UreqTransport, CRATES_IO_API, REGISTRY_ENV};
pub use fetch::{
    AdvisoriesDoc, AdvisoryEntry, AuditsDoc, DirFetcher, FetchError, FetchMode, Fetcher,
    MemoryFetcher, RecordSource, RegistryDoc, RetryPolicy, SourceKind, ToolResultsDoc,
};
pub use graph::{resolve_graph, DependencyGraph};
pub use record::{
    Advisory, Audit, AuditScope, CrateKey, CrateRecord, Dependency, Severity, ToolKind, ToolResult,
};
pub use synth::{
    synthetic_tree, typosquat, typosquat_bundle, typosquat_name, SYNTHETIC_ROOT,
    TYPOSQUAT_DOWNLOADS,
};

use std::fmt::Display;

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("{0} not found")]
    NotFound(String),
    #[error("network unavailable: {0}")]
    NetworkUnavailable(String),
    #[error("cannot parse {origin}: {message}")]
    Parse { origin: String, message: String },
    #[error("cache schema {found} is not supported (expected {expected})")]
    SchemaVersionMismatch { found: u32, expected: u32 },
    #[error("dependency cycle: {}", .0.join(" -> "))]
    CyclicDependency(Vec<String>),
    #[error("invalid record: {0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl ModelError {
    pub(crate) fn parse(origin: impl Display, e: impl Display) -> Self {
        ModelError::Parse {
            origin: origin.to_string(),
            message: e.to_string(),
        }
    }
}
