//! Candidate assumptions derived from crate metadata, and the
//! configuration that prices them.

mod config;
mod instantiate;
mod template;

pub use config::{Anchor, Anchors, CostConfig, CostSpec, CustomAssumption, Violation};
pub use instantiate::{conclusion, instantiate, no_side_effects, safe, unsafe_};
pub use template::{parameterized_cost, DefaultCost, Direction, Metric, Polarity, TemplateId};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CatalogError {
    #[error("inconsistent configuration: {}", join(.0))]
    InvalidConfig(Vec<Violation>),
    #[error("invalid smoothing anchors: {0}")]
    InvalidAnchors(String),
    #[error("cannot read configuration: {0}")]
    Parse(String),
}

fn join(v: &[Violation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
