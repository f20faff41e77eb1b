//! Wall time of the naive and Horn solvers on synthetic trees of growing
//! size. Prints the bench CSV.
//!
//!     cargo run --release --example scaling -- 1,5,10,15,20 30

use std::time::Duration;

use trustcost::bench::{run_bench, BenchPlan, CSV_HEADER};
use trustcost::catalog::CostConfig;
use trustcost::solver::Algorithm;

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let sizes = match args.next() {
        Some(s) => s
            .split(',')
            .map(str::parse)
            .collect::<Result<Vec<usize>, _>>()?,
        None => vec![1, 2, 4, 6, 8, 10, 12, 15],
    };
    let timeout = Duration::from_secs(args.next().map(|s| s.parse()).transpose()?.unwrap_or(30));
    let plan = BenchPlan {
        sizes,
        algorithms: vec![Algorithm::Naive, Algorithm::Horn],
        seed: 2024,
        timeout,
    };
    println!("{CSV_HEADER}");
    run_bench(&plan, &CostConfig::default(), |run| {
        println!("{}", run.csv_row())
    })?;
    Ok(())
}
