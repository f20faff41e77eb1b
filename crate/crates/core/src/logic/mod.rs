//! Self-contained propositional logic kernel.

mod budget;
mod formula;
mod horn;
mod sat;

pub use budget::{
    Budget, LimitKind, Meter, ResourceLimit, DEFAULT_MAX_FORMULA_SIZE, DEFAULT_TIMEOUT,
};
pub use formula::{Formula, Node, Var, VarKind};
pub use horn::{acyclic_ranking, forward_chain, is_acyclic, to_horn_clauses, Head, HornClause};
pub use sat::{sat_search, sat_search_with_cost, Assignment, CostedSearch};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LogicError {
    #[error("not a definite Horn shape: {0}")]
    NonHornShape(String),
    #[error(transparent)]
    ResourceLimit(#[from] ResourceLimit),
}
