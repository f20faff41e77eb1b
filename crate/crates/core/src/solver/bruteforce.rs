use std::collections::BTreeSet;

use super::{SolverError, TrustQuery, TrustSolution};
use crate::logic::{forward_chain, HornClause};

pub const DEFAULT_BRUTEFORCE_LIMIT: usize = 20;

pub fn solve_bruteforce(query: &TrustQuery) -> Result<TrustSolution, SolverError> {
    solve_bruteforce_with_limit(query, DEFAULT_BRUTEFORCE_LIMIT)
}

/// Enumerates all `2ⁿ` subsets. Among the cheapest entailing subsets the one
/// whose sorted id list is lexicographically smallest wins.
pub fn solve_bruteforce_with_limit(
    query: &TrustQuery,
    limit: usize,
) -> Result<TrustSolution, SolverError> {
    let n = query.assumptions.len();
    if n > limit {
        return Err(SolverError::TooLarge { n, limit });
    }
    let meter = query.budget.start();
    let clauses: Option<Vec<Vec<HornClause>>> =
        query.assumptions.iter().map(|a| a.clauses().ok()).collect();

    let mut best: Option<(u64, Vec<&str>)> = None;
    for mask in 0u64..(1u64 << n) {
        if mask % 4096 == 0 && meter.check_time().is_err() {
            return Ok(TrustSolution::resource_limit());
        }
        let picked: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let cost: u64 = picked
            .iter()
            .map(|&i| u64::from(query.assumptions[i].cost))
            .sum();
        if best.as_ref().is_some_and(|(b, _)| cost > *b) {
            continue;
        }
        let mut ids: Vec<&str> = picked
            .iter()
            .map(|&i| query.assumptions[i].id.as_str())
            .collect();
        ids.sort_unstable();
        if let Some((b, best_ids)) = &best {
            if cost == *b && ids >= *best_ids {
                continue;
            }
        }
        let entails = match &clauses {
            Some(cs) => {
                let selected: Vec<HornClause> =
                    picked.iter().flat_map(|&i| cs[i].iter().cloned()).collect();
                forward_chain(&selected, &BTreeSet::new()).contains(&query.conclusion)
            }
            None => query.entails(ids.iter().map(|s| s.to_string()).collect::<Vec<_>>().iter()),
        };
        if entails {
            best = Some((cost, ids));
        }
    }
    Ok(match best {
        Some((cost, ids)) => {
            TrustSolution::solved(cost, ids.into_iter().map(str::to_string).collect())
        }
        None => TrustSolution::infeasible(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Var;
    use crate::solver::AssumptionInstance;

    #[test]
    fn base_assumption_only() {
        let c = Var::fact("c");
        let q = TrustQuery::new(
            vec![AssumptionInstance::horn("base", [], c.clone(), 100, "")],
            c,
        )
        .unwrap();
        let s = solve_bruteforce(&q).unwrap();
        assert_eq!(s.min_cost, Some(100));
    }

    #[test]
    fn three_link_chain_needs_all_three() {
        let (a, b, c) = (Var::fact("a"), Var::fact("b"), Var::fact("c"));
        let q = TrustQuery::new(
            vec![
                AssumptionInstance::horn("ab", [a.clone()], b.clone(), 1, ""),
                AssumptionInstance::horn("bc", [b], c.clone(), 1, ""),
                AssumptionInstance::horn("a", [], a, 1, ""),
            ],
            c,
        )
        .unwrap();
        let s = solve_bruteforce(&q).unwrap();
        assert_eq!(s.min_cost, Some(3));
        assert_eq!(s.chosen.len(), 3);
    }

    #[test]
    fn ties_break_towards_smallest_ids() {
        let c = Var::fact("c");
        let q = TrustQuery::new(
            vec![
                AssumptionInstance::horn("z", [], c.clone(), 5, ""),
                AssumptionInstance::horn("b", [], c.clone(), 5, ""),
                AssumptionInstance::horn("m", [], c.clone(), 5, ""),
            ],
            c,
        )
        .unwrap();
        assert_eq!(
            solve_bruteforce(&q).unwrap().chosen,
            ["b".to_string()].into()
        );
    }

    #[test]
    fn too_many_assumptions() {
        let c = Var::fact("c");
        let many = (0..5)
            .map(|i| AssumptionInstance::horn(i.to_string(), [], c.clone(), 1, ""))
            .collect();
        let q = TrustQuery::new(many, c).unwrap();
        assert_eq!(
            solve_bruteforce_with_limit(&q, 4).unwrap_err(),
            SolverError::TooLarge { n: 5, limit: 4 }
        );
    }
}
