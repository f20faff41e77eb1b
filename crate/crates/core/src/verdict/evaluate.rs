use serde::{Deserialize, Serialize};

use super::{SeverityLabel, VerdictError};
use crate::catalog::{conclusion, instantiate, CostConfig, Polarity};
use crate::logic::Budget;
use crate::model::{CrateKey, DependencyGraph};
use crate::solver::{join_assumptions, Algorithm, SolveStatus, TrustQuery, TrustSolution};

/// One chosen assumption as shown in a report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChosenAssumption {
    pub id: String,
    pub label: String,
    pub cost: u32,
}

/// Outcome of one polarity's query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolarityOutcome {
    pub status: SolveStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cost: Option<u32>,
    pub assumptions: Vec<ChosenAssumption>,
}

impl PolarityOutcome {
    fn from_solution(query: &TrustQuery, sol: &TrustSolution) -> Self {
        let assumptions = query
            .assumptions
            .iter()
            .filter(|a| sol.chosen.contains(&a.id))
            .map(|a| ChosenAssumption {
                id: a.id.clone(),
                label: a.label.clone(),
                cost: a.cost,
            })
            .collect();
        PolarityOutcome {
            status: sol.status,
            cost: sol.min_cost.map(|c| c as u32),
            assumptions,
        }
    }
}

/// Trust and distrust costs for one crate and the label they combine to.
/// `label` is absent when either query hit its resource limit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    #[serde(rename = "crate")]
    pub krate: String,
    pub algorithm: Algorithm,
    pub trust: PolarityOutcome,
    pub distrust: PolarityOutcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<SeverityLabel>,
}

impl Verdict {
    pub fn trust_cost(&self) -> Option<u32> {
        self.trust.cost
    }

    pub fn distrust_cost(&self) -> Option<u32> {
        self.distrust.cost
    }

    pub fn is_complete(&self) -> bool {
        self.label.is_some()
    }

    /// Neither query finished.
    pub fn is_empty(&self) -> bool {
        self.trust.cost.is_none() && self.distrust.cost.is_none()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("verdict serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// The minimum-trust query for `polarity` over the whole graph: every
/// crate's assumptions joined, concluding `safe(root)` or `unsafe(root)`.
pub fn build_query(
    graph: &DependencyGraph,
    cfg: &CostConfig,
    polarity: Polarity,
) -> Result<TrustQuery, VerdictError> {
    let mut failure = None;
    let joined = join_assumptions(
        &graph.root,
        |k: &CrateKey| graph.direct_dependencies(k).to_vec(),
        |k| {
            let record = graph.record(k).expect("graph nodes have records");
            match instantiate(record, graph, cfg, polarity) {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    Vec::new()
                }
            }
        },
    )?;
    if let Some(e) = failure {
        return Err(e.into());
    }
    Ok(TrustQuery::new(
        joined.assumptions,
        conclusion(&graph.root, polarity),
    )?)
}

/// Solves both polarities, concurrently, and labels the result.
pub fn evaluate(
    graph: &DependencyGraph,
    cfg: &CostConfig,
    algorithm: Algorithm,
    budget: Budget,
) -> Result<Verdict, VerdictError> {
    let trust_q = build_query(graph, cfg, Polarity::Trust)?.with_budget(budget);
    let distrust_q = build_query(graph, cfg, Polarity::Distrust)?.with_budget(budget);
    let (trust, distrust) = std::thread::scope(|s| {
        let t = s.spawn(|| algorithm.solve(&trust_q));
        let d = algorithm.solve(&distrust_q);
        (t.join().expect("trust query panicked"), d)
    });
    let (trust, distrust) = (trust?, distrust?);
    let trust = PolarityOutcome::from_solution(&trust_q, &trust);
    let distrust = PolarityOutcome::from_solution(&distrust_q, &distrust);
    let label = match (trust.cost, distrust.cost) {
        (Some(t), Some(d)) => Some(cfg.bands.combine(t, d)?),
        _ => None,
    };
    Ok(Verdict {
        krate: graph.root.to_string(),
        algorithm,
        trust,
        distrust,
        label,
    })
}
