//! Reports for four crates from the bundled incident fixtures: two
//! legitimate crates and two lookalikes.

use trustcost::catalog::CostConfig;
use trustcost::logic::Budget;
use trustcost::model::Bundle;
use trustcost::solver::Algorithm;
use trustcost::verdict::{evaluate, render_report, ReportFormat};

fn main() -> anyhow::Result<()> {
    let bundle = Bundle::open(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/incidents"))?;
    let cfg = CostConfig::load_checked(&bundle.config_path().expect("bundle ships a config"))?;
    for root in &bundle.manifest.roots {
        let graph = bundle.cache().graph(root)?;
        let verdict = evaluate(&graph, &cfg, Algorithm::Horn, Budget::default())?;
        println!("{}", render_report(&verdict, ReportFormat::Text, false));
    }
    Ok(())
}
