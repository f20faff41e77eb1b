//! Generators and independent oracles shared by the integration tests and
//! the acceptance harness.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;
use trustcost::logic::{Formula, Var};
use trustcost::solver::{AssumptionInstance, SimpleGraph, TrustQuery};

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn worked_example_query() -> TrustQuery {
    let text = std::fs::read_to_string(fixtures_dir().join("worked_example/instance.json")).unwrap();
    trustcost::solver::InstanceFile::from_json(&text)
        .unwrap()
        .to_query()
        .unwrap()
}

/// Random acyclic definite Horn instance over facts `f0 < f1 < … < c`.
/// Bodies only use lower facts, so the clause graph is acyclic by
/// construction. Facts are reused across bodies, which forces the
/// unfolding to substitute one variable into several places.
pub fn random_horn_instance(rng: &mut impl Rng, max_assumptions: usize) -> TrustQuery {
    let n_facts = rng.gen_range(1..=5);
    let mut facts: Vec<Var> = (0..n_facts).map(|i| Var::fact(format!("f{i}"))).collect();
    facts.push(Var::fact("c"));
    let n = rng.gen_range(1..=max_assumptions);
    let mut assumptions = Vec::with_capacity(n);
    for i in 0..n {
        // lean toward the conclusion so most instances are feasible
        let head_idx = if rng.gen_bool(0.35) {
            facts.len() - 1
        } else {
            rng.gen_range(0..facts.len())
        };
        let body_len = rng.gen_range(0..=head_idx.min(3));
        let body: Vec<Var> = facts[..head_idx]
            .choose_multiple(rng, body_len)
            .cloned()
            .collect();
        let cost = rng.gen_range(0..=100);
        assumptions.push(AssumptionInstance::horn(
            format!("h{i:02}"),
            body,
            facts[head_idx].clone(),
            cost,
            "",
        ));
    }
    TrustQuery::new(assumptions, Var::fact("c")).unwrap()
}

/// Entailment by repeated passes until nothing changes. Deliberately
/// simpler than the library's counter-based chaining.
pub fn naive_closure_entails(query: &TrustQuery, chosen: &BTreeSet<String>) -> bool {
    let clauses: Vec<_> = query
        .assumptions
        .iter()
        .filter(|a| chosen.contains(&a.id))
        .flat_map(|a| a.clauses().unwrap())
        .collect();
    let mut known: BTreeSet<Var> = BTreeSet::new();
    loop {
        let before = known.len();
        for c in &clauses {
            if c.body.iter().all(|b| known.contains(b)) {
                if let Some(h) = c.head_var() {
                    known.insert(h.clone());
                }
            }
        }
        if known.len() == before {
            break;
        }
    }
    known.contains(&query.conclusion)
}

/// Minimum cost over all subsets, or `None` when nothing entails the
/// conclusion.
pub fn oracle_min_cost(query: &TrustQuery) -> Option<u64> {
    let n = query.assumptions.len();
    assert!(n <= 16, "oracle is exponential");
    let mut best: Option<u64> = None;
    for mask in 0u32..(1 << n) {
        let chosen: BTreeSet<String> = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| query.assumptions[i].id.clone())
            .collect();
        let cost = query.cost_of(&chosen);
        if best.is_some_and(|b| cost >= b) {
            continue;
        }
        if naive_closure_entails(query, &chosen) {
            best = Some(cost);
        }
    }
    best
}

pub fn random_graph(rng: &mut impl Rng, max_vertices: usize) -> SimpleGraph {
    let n = rng.gen_range(2..=max_vertices);
    let p = rng.gen_range(0.2..0.8);
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    if edges.is_empty() {
        let u = rng.gen_range(0..n - 1);
        edges.push((u, rng.gen_range(u + 1..n)));
    }
    SimpleGraph::new(n, edges)
}

pub fn min_vertex_cover(graph: &SimpleGraph) -> usize {
    (0u32..(1 << graph.vertices))
        .filter(|mask| {
            graph
                .edges
                .iter()
                .all(|&(u, v)| mask >> u & 1 == 1 || mask >> v & 1 == 1)
        })
        .map(u32::count_ones)
        .min()
        .unwrap() as usize
}

/// Whether two formulas agree on every assignment of `vars`.
pub fn equivalent_on(f: &Formula, g: &Formula, vars: &[Var]) -> bool {
    assert!(vars.len() <= 20);
    (0u32..(1 << vars.len())).all(|mask| {
        let lookup = |v: &Var| {
            let i = vars
                .iter()
                .position(|w| w == v)
                .expect("variable outside the table");
            mask >> i & 1 == 1
        };
        f.eval(lookup) == g.eval(lookup)
    })
}

pub fn tracker(id: &str) -> Formula {
    Formula::var(AssumptionInstance::tracker_for(id))
}
