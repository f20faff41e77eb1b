//! The eight-assumption example: which assumptions are cheapest to make
//! if we want to conclude that aho_corasick is safe?

use trustcost::logic::Var;
use trustcost::solver::{Algorithm, AssumptionInstance as A, TrustQuery};

fn main() -> anyhow::Result<()> {
    let c = Var::fact("safe(aho_corasick)");
    let m = Var::fact("safe(memchr)");
    let d = Var::fact("many_downloads(aho_corasick)");
    let alice = Var::fact("trusted(alice)");
    let bob = Var::fact("trusted(bob)");

    let assumptions = vec![
        A::horn("1", [], c.clone(), 100, "aho_corasick is safe"),
        A::horn("2", [], m.clone(), 100, "memchr is safe"),
        A::horn("3", [], d.clone(), 30, "aho_corasick is widely downloaded"),
        A::horn("4", [d], c.clone(), 20, "widely downloaded crates are safe"),
        A::horn("5", [], alice.clone(), 20, "alice is trustworthy"),
        A::horn("6", [], bob.clone(), 5, "bob is trustworthy"),
        A::horn(
            "7",
            [alice, m.clone()],
            c.clone(),
            10,
            "alice's crate over a safe memchr is safe",
        ),
        A::horn("8", [bob], m, 10, "bob vouches for memchr"),
    ];
    let query = TrustQuery::new(assumptions, c)?;

    for algorithm in Algorithm::ALL {
        let sol = algorithm.solve(&query)?;
        println!(
            "{:>10}: cost {:?}, assumptions {:?}",
            algorithm.as_str(),
            sol.min_cost,
            sol.chosen
        );
    }
    for id in &Algorithm::Horn.solve(&query)?.chosen {
        let a = query.assumption(id).unwrap();
        println!("  {id}: {} (cost {})", a.label, a.cost);
    }
    Ok(())
}
