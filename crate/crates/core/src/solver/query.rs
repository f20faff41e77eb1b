use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use super::SolverError;
use crate::logic::{forward_chain, sat_search, to_horn_clauses, Budget, Formula, HornClause, Var};

/// Costs are natural numbers no larger than the base assumption's.
pub const MAX_ASSUMPTION_COST: u32 = 100;

/// One candidate assumption `Aᵢ` with its tracker `aᵢ` and cost.
#[derive(Debug, Clone, PartialEq)]
pub struct AssumptionInstance {
    pub id: String,
    pub tracker: Var,
    pub encoding: Formula,
    pub cost: u32,
    pub label: String,
    /// Template that produced the instance, empty for hand-written ones.
    pub provenance: String,
}

impl AssumptionInstance {
    pub fn new(
        id: impl Into<String>,
        encoding: Formula,
        cost: u32,
        label: impl Into<String>,
    ) -> Self {
        let id = id.into();
        AssumptionInstance {
            tracker: Self::tracker_for(&id),
            id,
            encoding,
            cost,
            label: label.into(),
            provenance: String::new(),
        }
    }

    /// `(body₁ ∧ … ∧ bodyₙ) ⇒ head`, or just `head` for an empty body.
    pub fn horn(
        id: impl Into<String>,
        body: impl IntoIterator<Item = Var>,
        head: Var,
        cost: u32,
        label: impl Into<String>,
    ) -> Self {
        let body: Vec<Var> = body.into_iter().collect();
        let encoding = if body.is_empty() {
            Formula::var(head)
        } else {
            Formula::implies(Formula::conj_vars(&body), Formula::var(head))
        };
        Self::new(id, encoding, cost, label)
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = provenance.into();
        self
    }

    pub fn tracker_for(id: &str) -> Var {
        Var::tracker(format!("a:{id}"))
    }

    /// `aᵢ ⇒ Aᵢ`
    pub fn guarded(&self) -> Formula {
        Formula::implies(Formula::var(self.tracker.clone()), self.encoding.clone())
    }

    /// The encoding as Horn clauses, without the tracker.
    pub fn clauses(&self) -> Result<Vec<HornClause>, SolverError> {
        Ok(to_horn_clauses(&self.encoding)?)
    }
}

#[derive(Debug, Clone)]
pub struct TrustQuery {
    pub assumptions: Vec<AssumptionInstance>,
    pub conclusion: Var,
    pub budget: Budget,
}

impl TrustQuery {
    /// Validates ids, tracker names and cost ranges.
    pub fn new(assumptions: Vec<AssumptionInstance>, conclusion: Var) -> Result<Self, SolverError> {
        let mut ids = HashSet::new();
        let mut trackers = HashSet::new();
        for a in &assumptions {
            if !ids.insert(a.id.as_str()) {
                return Err(SolverError::InvalidQuery(format!(
                    "duplicate assumption id `{}`",
                    a.id
                )));
            }
            if !trackers.insert(a.tracker.name()) {
                return Err(SolverError::InvalidQuery(format!(
                    "duplicate tracker `{}`",
                    a.tracker
                )));
            }
            if !a.tracker.is_tracker() {
                return Err(SolverError::InvalidQuery(format!(
                    "`{}` is not a tracker variable",
                    a.tracker
                )));
            }
            if a.cost > MAX_ASSUMPTION_COST {
                return Err(SolverError::InvalidQuery(format!(
                    "assumption `{}` costs {} (maximum {MAX_ASSUMPTION_COST})",
                    a.id, a.cost
                )));
            }
        }
        let clash = assumptions
            .iter()
            .flat_map(|a| a.encoding.atoms())
            .find(|v| !v.is_tracker() && trackers.contains(v.name()));
        if let Some(v) = clash {
            return Err(SolverError::InvalidQuery(format!(
                "fact `{v}` shares a tracker's name"
            )));
        }
        Ok(TrustQuery {
            assumptions,
            conclusion,
            budget: Budget::default(),
        })
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    /// `⋀ (aᵢ ⇒ Aᵢ)`
    pub fn formula(&self) -> Formula {
        Formula::and(self.assumptions.iter().map(AssumptionInstance::guarded))
    }

    pub fn trackers(&self) -> BTreeSet<Var> {
        self.assumptions.iter().map(|a| a.tracker.clone()).collect()
    }

    pub fn tracker_costs(&self) -> BTreeMap<Var, u64> {
        self.assumptions
            .iter()
            .map(|a| (a.tracker.clone(), u64::from(a.cost)))
            .collect()
    }

    pub fn assumption(&self, id: &str) -> Option<&AssumptionInstance> {
        self.assumptions.iter().find(|a| a.id == id)
    }

    pub fn total_cost(&self) -> u64 {
        self.assumptions.iter().map(|a| u64::from(a.cost)).sum()
    }

    /// Sum of the costs of the named assumptions. Unknown ids are ignored.
    pub fn cost_of<'a>(&self, ids: impl IntoIterator<Item = &'a String>) -> u64 {
        ids.into_iter()
            .filter_map(|id| self.assumption(id))
            .map(|a| u64::from(a.cost))
            .sum()
    }

    /// Whether the named assumptions entail the conclusion. Horn encodings
    /// use forward chaining; anything else falls back to refuting
    /// `Δ ∧ ¬c` with the satisfiability search.
    pub fn entails<'a>(&self, ids: impl IntoIterator<Item = &'a String>) -> bool {
        let chosen: Vec<&AssumptionInstance> = ids
            .into_iter()
            .filter_map(|id| self.assumption(id))
            .collect();
        let horn: Option<Vec<HornClause>> = chosen
            .iter()
            .map(|a| a.clauses().ok())
            .collect::<Option<Vec<_>>>()
            .map(|cs| cs.into_iter().flatten().collect());
        match horn {
            Some(clauses) => forward_chain(&clauses, &BTreeSet::new()).contains(&self.conclusion),
            None => {
                let refutation = Formula::and(
                    chosen
                        .iter()
                        .map(|a| a.encoding.clone())
                        .chain([Formula::not(Formula::var(self.conclusion.clone()))]),
                );
                matches!(sat_search(&refutation, &Budget::unlimited()), Ok(None))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    Solved,
    Infeasible,
    ResourceLimit,
}

/// Minimum cost and one witness set `Δ` of assumption ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrustSolution {
    pub status: SolveStatus,
    pub min_cost: Option<u64>,
    pub chosen: BTreeSet<String>,
}

impl TrustSolution {
    pub fn solved(min_cost: u64, chosen: BTreeSet<String>) -> Self {
        TrustSolution {
            status: SolveStatus::Solved,
            min_cost: Some(min_cost),
            chosen,
        }
    }

    pub fn infeasible() -> Self {
        TrustSolution {
            status: SolveStatus::Infeasible,
            min_cost: None,
            chosen: BTreeSet::new(),
        }
    }

    pub fn resource_limit() -> Self {
        TrustSolution {
            status: SolveStatus::ResourceLimit,
            min_cost: None,
            chosen: BTreeSet::new(),
        }
    }

    pub fn is_solved(&self) -> bool {
        self.status == SolveStatus::Solved
    }
}
