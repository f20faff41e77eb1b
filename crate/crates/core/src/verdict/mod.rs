//! Trust and distrust queries for a crate, the label they combine to, and
//! the report.

mod combine;
mod evaluate;
mod logs;
mod report;

pub use combine::{combine, SeverityBands, SeverityLabel};
pub use evaluate::{build_query, evaluate, ChosenAssumption, PolarityOutcome, Verdict};
pub use logs::render_logs;
pub use report::{render_report, ReportFormat};

use crate::catalog::CatalogError;
use crate::solver::SolverError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VerdictError {
    #[error("costs ({trust}, {distrust}) are outside 0..=100")]
    CostOutOfRange { trust: u32, distrust: u32 },
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}
