//! Timing runs of the solvers over synthetic dependency trees.

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use crate::catalog::CostConfig;
use crate::logic::Budget;
use crate::model::{resolve_graph, synthetic_tree, DependencyGraph, ModelError};
use crate::solver::Algorithm;
use crate::verdict::evaluate;

pub const CSV_HEADER: &str = "run_id,crate,n_dependencies,algorithm,status,wall_ms";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Solved,
    Timeout,
    Error,
}

impl fmt::Display for RunStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RunStatus::Solved => "solved",
            RunStatus::Timeout => "timeout",
            RunStatus::Error => "error",
        })
    }
}

#[derive(Debug, Clone)]
pub struct BenchRun {
    pub run_id: usize,
    pub krate: String,
    pub n_dependencies: usize,
    pub algorithm: Algorithm,
    pub status: RunStatus,
    pub wall: Duration,
}

impl BenchRun {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.run_id,
            self.krate,
            self.n_dependencies,
            self.algorithm,
            self.status,
            self.wall.as_millis()
        )
    }
}

#[derive(Debug, Clone)]
pub struct BenchPlan {
    pub sizes: Vec<usize>,
    pub algorithms: Vec<Algorithm>,
    pub seed: u64,
    pub timeout: Duration,
}

/// The synthetic tree for `(n_dependencies, seed)` as a resolved graph.
pub fn synthetic_graph(n_dependencies: usize, seed: u64) -> Result<DependencyGraph, ModelError> {
    let mut records: BTreeMap<_, _> = synthetic_tree(n_dependencies, seed)
        .into_iter()
        .map(|r| (r.key(), r))
        .collect();
    let root = records
        .values()
        .find(|r| r.name == crate::model::SYNTHETIC_ROOT)
        .cloned()
        .expect("synthetic trees have a root");
    resolve_graph(root, |k| {
        records
            .remove(k)
            .ok_or_else(|| ModelError::NotFound(k.to_string()))
    })
}

/// Evaluates both polarities with one algorithm and classifies the run.
pub fn time_run(
    graph: &DependencyGraph,
    cfg: &CostConfig,
    algorithm: Algorithm,
    timeout: Duration,
) -> (RunStatus, Duration) {
    let budget = Budget::default().with_timeout(timeout);
    let start = Instant::now();
    let status = match evaluate(graph, cfg, algorithm, budget) {
        Ok(v) if v.is_complete() => RunStatus::Solved,
        Ok(_) => RunStatus::Timeout,
        Err(_) => RunStatus::Error,
    };
    (status, start.elapsed())
}

/// Runs every size with every algorithm, in that order, reporting each
/// run to `on_run` as soon as it finishes.
pub fn run_bench(
    plan: &BenchPlan,
    cfg: &CostConfig,
    mut on_run: impl FnMut(&BenchRun),
) -> Result<Vec<BenchRun>, ModelError> {
    let mut runs = Vec::new();
    for &n in &plan.sizes {
        let graph = synthetic_graph(n, plan.seed)?;
        for &algorithm in &plan.algorithms {
            let (status, wall) = time_run(&graph, cfg, algorithm, plan.timeout);
            let run = BenchRun {
                run_id: runs.len(),
                krate: graph.root.to_string(),
                n_dependencies: n,
                algorithm,
                status,
                wall,
            };
            on_run(&run);
            runs.push(run);
        }
    }
    Ok(runs)
}
