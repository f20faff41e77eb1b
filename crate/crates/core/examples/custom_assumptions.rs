//! Tuning the catalog: trusting an author, adding a hand-written
//! assumption, and what the consistency check rejects.

use trustcost::catalog::CostConfig;
use trustcost::logic::Budget;
use trustcost::model::{Bundle, CrateKey};
use trustcost::solver::Algorithm;
use trustcost::verdict::evaluate;

fn main() -> anyhow::Result<()> {
    let bundle = Bundle::open(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/incidents"))?;
    let key: CrateKey = "fast_log@1.7.7".parse()?;
    let graph = bundle.cache().graph(&key)?;
    let trust = |cfg: &CostConfig| -> anyhow::Result<u32> {
        Ok(evaluate(&graph, cfg, Algorithm::Horn, Budget::default())?
            .trust_cost()
            .unwrap())
    };

    println!(
        "defaults:          trust {}",
        trust(&CostConfig::default())?
    );

    let author = CostConfig::from_json(r#"{ "trusted_authors": ["zhuxiujia"] }"#)?;
    println!("trusted author:    trust {}", trust(&author)?);

    let reviewed = CostConfig::from_json(
        r#"{
          "custom": [
            { "crate": "fast_log", "polarity": "trust", "id": "reviewed",
              "head": "reviewed_in_house(fast_log)", "cost": 8,
              "label": "Our team reviewed fast_log." },
            { "crate": "fast_log", "polarity": "trust", "id": "reviewed_is_safe",
              "body": ["reviewed_in_house(fast_log)"], "head": "safe(fast_log@1.7.7)", "cost": 2,
              "label": "Crates we reviewed are safe." }
          ]
        }"#,
    )?;
    println!("in-house review:   trust {}", trust(&reviewed)?);

    let broken = CostConfig::from_json(
        r#"{ "costs": { "crate_safe": 50, "downloads": { "lo": 90, "hi": 40 } } }"#,
    )?;
    match broken.check_consistency() {
        Ok(()) => println!("unexpectedly consistent"),
        Err(violations) => {
            for v in violations {
                println!("rejected: {}: {}", v.subject, v.message);
            }
        }
    }
    Ok(())
}
