//! Generates a lookalike for each popular crate and compares labels.
//! Popularity, audits and author reputation do not carry over to the copy.

use trustcost::catalog::CostConfig;
use trustcost::logic::Budget;
use trustcost::model::{typosquat_bundle, Bundle};
use trustcost::solver::Algorithm;
use trustcost::verdict::evaluate;

fn main() -> anyhow::Result<()> {
    let base = Bundle::open(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/popular"))?;
    let out = tempfile::tempdir()?;
    let bundle = typosquat_bundle(&base, out.path())?;
    let cfg = CostConfig::load_checked(&bundle.config_path().expect("config is copied"))?;
    let cache = bundle.cache();

    let h = ["original", "trust", "label", "variant"];
    println!("{:<22} {:>6} {:<16} {:<22} {:>6} {}", h[0], h[1], h[2], h[3], h[1], h[2]);
    for pair in &bundle.manifest.pairs {
        let o = evaluate(
            &cache.graph(&pair.original)?,
            &cfg,
            Algorithm::Horn,
            Budget::default(),
        )?;
        let v = evaluate(
            &cache.graph(&pair.variant)?,
            &cfg,
            Algorithm::Horn,
            Budget::default(),
        )?;
        println!(
            "{:<22} {:>6} {:<16} {:<22} {:>6} {}",
            pair.original.to_string(),
            o.trust_cost().unwrap(),
            o.label.unwrap().to_string(),
            pair.variant.to_string(),
            v.trust_cost().unwrap(),
            v.label.unwrap()
        );
    }
    Ok(())
}
