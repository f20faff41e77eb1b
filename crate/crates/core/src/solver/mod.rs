//! The minimum trust problem: pick the cheapest set of assumptions that
//! entails a conclusion.
//!
//! Three solvers share one contract:
//!
//! * [`solve_horn`] unfolds acyclic definite Horn assumptions into a formula
//!   over tracker variables and binary-searches the cost bound.
//! * [`solve_naive`] eliminates fact variables by Shannon expansion, with no
//!   Horn restriction. Exponential in the number of facts.
//! * [`solve_bruteforce`] enumerates every subset. Used as an oracle.

mod bruteforce;
mod horn;
mod instance;
mod join;
mod naive;
mod query;
mod reduction;
mod search;
mod unfold;

pub use bruteforce::{solve_bruteforce, solve_bruteforce_with_limit, DEFAULT_BRUTEFORCE_LIMIT};
pub use horn::solve_horn;
pub use instance::{InstanceAssumption, InstanceFile};
pub use join::{join_assumptions, Joined};
pub use naive::solve_naive;
pub use query::{AssumptionInstance, SolveStatus, TrustQuery, TrustSolution, MAX_ASSUMPTION_COST};
pub use reduction::{reduce_vertex_cover, SimpleGraph};
pub use unfold::unfold;

use std::fmt;
use std::str::FromStr;

use crate::logic::{LogicError, ResourceLimit};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolverError {
    #[error("not a definite Horn shape: {0}")]
    NonHornShape(String),
    #[error("assumption clauses are cyclic")]
    CyclicClauses,
    #[error("dependency cycle: {}", .0.join(" -> "))]
    CyclicDependency(Vec<String>),
    #[error("{n} assumptions exceed the enumeration limit of {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error(transparent)]
    ResourceLimit(#[from] ResourceLimit),
}

impl From<LogicError> for SolverError {
    fn from(e: LogicError) -> Self {
        match e {
            LogicError::NonHornShape(s) => SolverError::NonHornShape(s),
            LogicError::ResourceLimit(r) => SolverError::ResourceLimit(r),
        }
    }
}

/// Which solver to run.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, Default, serde::Serialize, serde::Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Naive,
    #[default]
    Horn,
    Bruteforce,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Naive, Algorithm::Horn, Algorithm::Bruteforce];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Naive => "naive",
            Algorithm::Horn => "horn",
            Algorithm::Bruteforce => "bruteforce",
        }
    }

    pub fn solve(self, query: &TrustQuery) -> Result<TrustSolution, SolverError> {
        match self {
            Algorithm::Naive => solve_naive(query),
            Algorithm::Horn => solve_horn(query),
            Algorithm::Bruteforce => solve_bruteforce(query),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown algorithm `{s}` (expected naive, horn or bruteforce)"))
    }
}
