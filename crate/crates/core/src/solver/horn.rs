use super::search::minimize_cost;
use super::{unfold, SolverError, TrustQuery, TrustSolution};

/// Minimum trust for acyclic definite Horn assumptions.
pub fn solve_horn(query: &TrustQuery) -> Result<TrustSolution, SolverError> {
    let mut meter = query.budget.start();
    let valid = match unfold(
        &query.formula(),
        &query.conclusion,
        &query.trackers(),
        &mut meter,
    ) {
        Ok(e) => e,
        Err(SolverError::ResourceLimit(_)) => return Ok(TrustSolution::resource_limit()),
        Err(e) => return Err(e),
    };
    Ok(
        minimize_cost(&valid, query, &mut meter)
            .unwrap_or_else(|_| TrustSolution::resource_limit()),
    )
}
