//! Unfolding an acyclic Horn query into a formula over tracker variables,
//! then checking a few selections against it.
//!
//!     cargo run --example unfolding -- crates/core/fixtures/worked_example/instance.json

use std::collections::BTreeSet;

use trustcost::logic::{forward_chain, Budget};
use trustcost::solver::{unfold, InstanceFile};

fn main() -> anyhow::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| {
        concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/worked_example/instance.json").into()
    });
    let query = InstanceFile::from_json(&std::fs::read_to_string(&path)?)?.to_query()?;

    let e = unfold(
        &query.formula(),
        &query.conclusion,
        &query.trackers(),
        &mut Budget::default().start(),
    )?;
    println!("conclusion: {}", query.conclusion);
    println!("unfolded:   {e}");
    println!("size:       {} nodes and edges", e.dag_size());

    for pick in [
        vec!["1"],
        vec!["3", "4"],
        vec!["2", "5", "7"],
        vec!["5", "6", "7", "8"],
        vec!["5", "7"],
    ] {
        let chosen: BTreeSet<String> = pick.iter().map(|s| s.to_string()).collect();
        let by_formula = e.eval(|v| {
            query
                .assumptions
                .iter()
                .any(|a| &a.tracker == v && chosen.contains(&a.id))
        });
        let clauses: Vec<_> = query
            .assumptions
            .iter()
            .filter(|a| chosen.contains(&a.id))
            .flat_map(|a| a.clauses().unwrap())
            .collect();
        let by_chaining = forward_chain(&clauses, &BTreeSet::new()).contains(&query.conclusion);
        println!(
            "{pick:?}: formula {by_formula}, chaining {by_chaining}, cost {}",
            query.cost_of(&chosen)
        );
    }
    Ok(())
}
