use std::collections::BTreeSet;

use super::{TrustQuery, TrustSolution};
use crate::logic::{CostedSearch, Formula, Meter, ResourceLimit};

/// Least `k` such that `valid ∧ cost ≤ k` is satisfiable, by binary search
/// over `[0, Σ costs]`.
pub(super) fn minimize_cost(
    valid: &Formula,
    query: &TrustQuery,
    meter: &mut Meter,
) -> Result<TrustSolution, ResourceLimit> {
    if valid.is_false() {
        return Ok(TrustSolution::infeasible());
    }
    let search = CostedSearch::new(valid, &query.tracker_costs());
    let mut left = 0;
    let mut right = query.total_cost();
    let Some(mut witness) = search.solve(Some(right), meter)? else {
        return Ok(TrustSolution::infeasible());
    };
    while left < right {
        // lower midpoint: with right ← k on success the upper one can stall
        let k = left + (right - left) / 2;
        match search.solve(Some(k), meter)? {
            Some(model) => {
                right = k;
                witness = model;
            }
            None => left = k + 1,
        }
    }
    let chosen: BTreeSet<String> = query
        .assumptions
        .iter()
        .filter(|a| witness.value(&a.tracker))
        .map(|a| a.id.clone())
        .collect();
    debug_assert_eq!(query.cost_of(&chosen), left);
    Ok(TrustSolution::solved(left, chosen))
}
