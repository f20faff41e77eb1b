mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use trustcost::logic::{
    acyclic_ranking, forward_chain, sat_search, to_horn_clauses, Budget, Formula, HornClause, Var,
};

fn var_pool(n: usize) -> Vec<Var> {
    (0..n).map(|i| Var::fact(format!("v{i}"))).collect()
}

/// Definite clauses over at most `n` variables, possibly cyclic.
fn clauses(n: usize) -> impl Strategy<Value = Vec<HornClause>> {
    let clause =
        (proptest::collection::btree_set(0..n, 0..3), 0..n).prop_map(move |(body, head)| {
            let pool = var_pool(n);
            HornClause::new(
                body.into_iter().map(|i| pool[i].clone()),
                pool[head].clone(),
            )
        });
    proptest::collection::vec(clause, 0..10)
}

fn facts(n: usize) -> impl Strategy<Value = BTreeSet<Var>> {
    proptest::collection::btree_set(0..n, 0..4).prop_map(move |s| {
        let pool = var_pool(n);
        s.into_iter().map(|i| pool[i].clone()).collect()
    })
}

proptest! {
    #[test]
    fn chaining_is_monotone(cs in clauses(8), f1 in facts(8), extra in facts(8)) {
        let f2: BTreeSet<Var> = f1.union(&extra).cloned().collect();
        let small = forward_chain(&cs, &f1);
        let large = forward_chain(&cs, &f2);
        prop_assert!(small.is_subset(&large));
    }

    #[test]
    fn chaining_reaches_a_fixed_point(cs in clauses(8), fs in facts(8)) {
        let out = forward_chain(&cs, &fs);
        prop_assert!(fs.is_subset(&out));
        for c in &cs {
            if c.body.is_subset(&out) {
                prop_assert!(out.contains(c.head_var().unwrap()));
            }
        }
    }

    #[test]
    fn chaining_agrees_with_refutation(cs in clauses(10), fs in facts(10), goal in 0usize..10) {
        let goal = var_pool(10)[goal].clone();
        let derived = forward_chain(&cs, &fs).contains(&goal);
        let refutation = Formula::and(
            cs.iter()
                .map(HornClause::to_formula)
                .chain(fs.iter().cloned().map(Formula::var))
                .chain([Formula::not(Formula::var(goal))]),
        );
        let unsat = sat_search(&refutation, &Budget::unlimited()).unwrap().is_none();
        prop_assert_eq!(derived, unsat);
    }

    #[test]
    fn ranking_orders_every_clause(cs in clauses(8)) {
        if let Some(rank) = acyclic_ranking(&cs) {
            for c in &cs {
                let h = rank[c.head_var().unwrap()];
                prop_assert!(c.body.iter().all(|b| rank[b] < h));
            }
        } else {
            // a cycle exists: some strongly connected pair reaches itself
            prop_assert!(has_cycle(&cs));
        }
    }
}

/// Depth-first reachability from every head back to itself.
fn has_cycle(cs: &[HornClause]) -> bool {
    let reaches = |from: &Var, to: &Var| {
        let mut seen = BTreeSet::new();
        let mut stack = vec![from.clone()];
        while let Some(v) = stack.pop() {
            for c in cs.iter().filter(|c| c.body.contains(&v)) {
                let h = c.head_var().unwrap();
                if h == to {
                    return true;
                }
                if seen.insert(h.clone()) {
                    stack.push(h.clone());
                }
            }
        }
        false
    };
    cs.iter()
        .any(|c| reaches(c.head_var().unwrap(), c.head_var().unwrap()))
}

#[test]
fn worked_example_atoms_cover_trackers_and_facts() {
    let q = common::worked_example_query();
    let atoms = q.formula().atoms();
    assert_eq!(atoms.len(), 13);
    assert_eq!(atoms.iter().filter(|v| v.is_tracker()).count(), 8);
    let facts: BTreeSet<&str> = atoms
        .iter()
        .filter(|v| !v.is_tracker())
        .map(Var::name)
        .collect();
    assert_eq!(facts, ["a", "b", "c", "d", "m"].into());
}

#[test]
fn worked_example_clauses_are_acyclic_and_chain_to_c() {
    let q = common::worked_example_query();
    let clauses = to_horn_clauses(&q.formula()).unwrap();
    assert!(acyclic_ranking(&clauses).is_some());
    let asserted: BTreeSet<Var> = ["5", "6", "7", "8"]
        .iter()
        .map(|id| trustcost::solver::AssumptionInstance::tracker_for(id))
        .collect();
    assert!(forward_chain(&clauses, &asserted).contains(&Var::fact("c")));
}

#[test]
fn substituting_d_with_a3() {
    let (a4, a3, d) = (Var::tracker("a4"), Var::tracker("a3"), Var::fact("d"));
    let f = Formula::and([Formula::var(a4.clone()), Formula::var(d.clone())]);
    let g = f.substitute(&d, &Formula::var(a3.clone()));
    assert_eq!(g, Formula::and([Formula::var(a4), Formula::var(a3)]));
}
