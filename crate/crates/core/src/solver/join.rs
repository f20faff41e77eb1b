use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Display;

use super::{AssumptionInstance, SolverError};
use crate::logic::{Formula, Var};

/// Result of joining the assumptions of a package and all of its
/// dependencies.
#[derive(Debug, Clone)]
pub struct Joined {
    /// `⋀ (aᵢ ⇒ Aᵢ)` over every visited node.
    pub formula: Formula,
    /// In visit order: the root's assumptions first, then each dependency's.
    pub assumptions: Vec<AssumptionInstance>,
    /// Tracker to index into `assumptions`.
    pub trackers: BTreeMap<Var, usize>,
}

/// Recursively conjoins the assumptions of `root` and its dependencies.
/// Each node is instantiated once, however many paths reach it.
pub fn join_assumptions<K, D, I>(
    root: &K,
    dependencies: D,
    mut instantiate: I,
) -> Result<Joined, SolverError>
where
    K: Ord + Clone + Display,
    D: Fn(&K) -> Vec<K>,
    I: FnMut(&K) -> Vec<AssumptionInstance>,
{
    fn visit<K, D, I>(
        node: &K,
        dependencies: &D,
        instantiate: &mut I,
        done: &mut BTreeSet<K>,
        path: &mut Vec<K>,
        out: &mut Vec<AssumptionInstance>,
    ) -> Result<(), SolverError>
    where
        K: Ord + Clone + Display,
        D: Fn(&K) -> Vec<K>,
        I: FnMut(&K) -> Vec<AssumptionInstance>,
    {
        if let Some(start) = path.iter().position(|p| p == node) {
            let mut cycle: Vec<String> = path[start..].iter().map(ToString::to_string).collect();
            cycle.push(node.to_string());
            return Err(SolverError::CyclicDependency(cycle));
        }
        if done.contains(node) {
            return Ok(());
        }
        out.extend(instantiate(node));
        path.push(node.clone());
        for dep in dependencies(node) {
            visit(&dep, dependencies, instantiate, done, path, out)?;
        }
        path.pop();
        done.insert(node.clone());
        Ok(())
    }

    let mut assumptions = Vec::new();
    visit(
        root,
        &dependencies,
        &mut instantiate,
        &mut BTreeSet::new(),
        &mut Vec::new(),
        &mut assumptions,
    )?;
    let formula = Formula::and(assumptions.iter().map(AssumptionInstance::guarded));
    let trackers = assumptions
        .iter()
        .enumerate()
        .map(|(i, a)| (a.tracker.clone(), i))
        .collect();
    Ok(Joined {
        formula,
        assumptions,
        trackers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn deps(
        graph: &'static [(&'static str, &'static [&'static str])],
    ) -> impl Fn(&String) -> Vec<String> {
        move |k: &String| {
            graph
                .iter()
                .find(|(n, _)| n == k)
                .map(|(_, ds)| ds.iter().map(|d| d.to_string()).collect())
                .unwrap_or_default()
        }
    }

    fn one_each(k: &String) -> Vec<AssumptionInstance> {
        vec![AssumptionInstance::horn(
            format!("{k}/base"),
            [],
            Var::fact(format!("safe({k})")),
            100,
            "",
        )]
    }

    #[test]
    fn leaf_gives_single_conjunct() {
        let j = join_assumptions(&"leaf".to_string(), deps(&[]), one_each).unwrap();
        assert_eq!(j.assumptions.len(), 1);
        assert!(j.formula.as_var().is_none());
    }

    #[test]
    fn diamond_dependency_is_instantiated_once() {
        static G: &[(&str, &[&str])] = &[("A", &["B", "C"]), ("B", &["D"]), ("C", &["D"])];
        let mut calls: BTreeMap<String, usize> = BTreeMap::new();
        let j = join_assumptions(&"A".to_string(), deps(G), |k| {
            *calls.entry(k.clone()).or_default() += 1;
            one_each(k)
        })
        .unwrap();
        assert_eq!(j.assumptions.len(), 4);
        assert!(calls.values().all(|&n| n == 1));
        let ids: Vec<_> = j.assumptions.iter().map(|a| a.id.as_str()).collect();
        assert_eq!(ids, ["A/base", "B/base", "D/base", "C/base"]);
    }

    #[test]
    fn cycle_is_reported_with_its_path() {
        static G: &[(&str, &[&str])] = &[("A", &["B"]), ("B", &["C"]), ("C", &["A"])];
        let err = join_assumptions(&"A".to_string(), deps(G), one_each).unwrap_err();
        assert_eq!(
            err,
            SolverError::CyclicDependency(vec!["A".into(), "B".into(), "C".into(), "A".into()])
        );
    }
}
