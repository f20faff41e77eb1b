use std::collections::BTreeSet;

use super::search::minimize_cost;
use super::{SolverError, TrustQuery, TrustSolution};
use crate::logic::{Formula, Meter, ResourceLimit, Var};

/// Minimum trust without the Horn restriction.
///
/// The validity condition `¬∃c ∃v₁…vₘ (F ∧ ¬c)` is made quantifier-free by
/// Shannon expansion, `∃v. G ≡ G[v/⊤] ∨ G[v/⊥]`, over every fact variable.
/// The formula can double with each variable, so this is only practical for
/// small dependency graphs.
pub fn solve_naive(query: &TrustQuery) -> Result<TrustSolution, SolverError> {
    let mut meter = query.budget.start();
    let valid = match validity(query, &mut meter) {
        Ok(v) => v,
        Err(_) => return Ok(TrustSolution::resource_limit()),
    };
    Ok(
        minimize_cost(&valid, query, &mut meter)
            .unwrap_or_else(|_| TrustSolution::resource_limit()),
    )
}

fn validity(query: &TrustQuery, meter: &mut Meter) -> Result<Formula, ResourceLimit> {
    let f = query.formula();
    let trackers = query.trackers();
    let facts: BTreeSet<Var> = f
        .atoms()
        .into_iter()
        .filter(|v| !trackers.contains(v))
        .collect();

    let mut g = Formula::and([f, Formula::not(Formula::var(query.conclusion.clone()))]);
    // the conclusion first: substituting ⊤ collapses one branch immediately
    let order =
        std::iter::once(&query.conclusion).chain(facts.iter().filter(|v| **v != query.conclusion));
    for v in order {
        meter.check_time()?;
        g = Formula::or([
            g.substitute(v, &Formula::top()),
            g.substitute(v, &Formula::bottom()),
        ]);
        meter.check_size(g.dag_size())?;
    }
    Ok(Formula::not(g))
}
