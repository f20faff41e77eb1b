use std::collections::{BTreeMap, BTreeSet};

use super::SolverError;
use crate::logic::{acyclic_ranking, to_horn_clauses, Formula, Meter, Var};

/// Rewrites `F = ⋀ (aᵢ ⇒ Aᵢ)` into a formula over the trackers alone that
/// holds exactly when the selected assumptions entail `conclusion`.
///
/// Starts from the disjunction of the bodies of the clauses concluding
/// `conclusion`, then eliminates fact variables from the highest rank down,
/// substituting each by the disjunction of the bodies of its own clauses.
/// Body variables always rank below their head, so once a variable is
/// eliminated it never reappears.
pub fn unfold(
    f: &Formula,
    conclusion: &Var,
    trackers: &BTreeSet<Var>,
    meter: &mut Meter,
) -> Result<Formula, SolverError> {
    let clauses = to_horn_clauses(f)?;
    let ranking = acyclic_ranking(&clauses).ok_or(SolverError::CyclicClauses)?;

    let mut bodies: BTreeMap<&Var, Vec<Formula>> = BTreeMap::new();
    for clause in &clauses {
        if let Some(head) = clause.head_var() {
            bodies.entry(head).or_default().push(clause.body_formula());
        }
    }
    let definition = |v: &Var| Formula::or(bodies.get(v).cloned().unwrap_or_default());

    let mut e = definition(conclusion);
    let mut eliminate: Vec<&Var> = ranking
        .keys()
        .filter(|v| !trackers.contains(*v) && *v != conclusion)
        .collect();
    eliminate.sort_by(|a, b| ranking[*b].cmp(&ranking[*a]).then_with(|| a.cmp(b)));

    for v in eliminate {
        meter.check_time()?;
        e = e.substitute(v, &definition(v));
        meter.check_size(e.dag_size())?;
    }
    debug_assert!(e.atoms().is_subset(trackers));
    Ok(e)
}
