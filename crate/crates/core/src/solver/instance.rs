//! JSON interchange for Horn trust instances.
//!
//! ```json
//! {
//!   "conclusion": "c",
//!   "assumptions": [
//!     { "id": "1", "body": [], "head": "c", "cost": 100, "label": "aho_corasick is safe." }
//!   ]
//! }
//! ```

use serde::{Deserialize, Serialize};

use super::{AssumptionInstance, SolverError, TrustQuery};
use crate::logic::{Head, Var};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceAssumption {
    pub id: String,
    #[serde(default)]
    pub body: Vec<String>,
    pub head: String,
    pub cost: u32,
    #[serde(default)]
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub conclusion: String,
    pub assumptions: Vec<InstanceAssumption>,
}

impl InstanceFile {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }

    pub fn to_query(&self) -> Result<TrustQuery, SolverError> {
        let assumptions = self
            .assumptions
            .iter()
            .map(|a| {
                AssumptionInstance::horn(
                    &a.id,
                    a.body.iter().map(Var::fact),
                    Var::fact(&a.head),
                    a.cost,
                    &a.label,
                )
            })
            .collect();
        TrustQuery::new(assumptions, Var::fact(&self.conclusion))
    }

    /// Fails unless every encoding is a single definite clause.
    pub fn from_query(query: &TrustQuery) -> Result<Self, SolverError> {
        let assumptions = query
            .assumptions
            .iter()
            .map(|a| {
                let clauses = a.clauses()?;
                let [clause] = clauses.as_slice() else {
                    return Err(SolverError::NonHornShape(format!(
                        "assumption `{}` is not a single clause",
                        a.id
                    )));
                };
                let Head::Var(head) = &clause.head else {
                    return Err(SolverError::NonHornShape(format!(
                        "assumption `{}` has no head",
                        a.id
                    )));
                };
                Ok(InstanceAssumption {
                    id: a.id.clone(),
                    body: clause.body.iter().map(|v| v.name().to_string()).collect(),
                    head: head.name().to_string(),
                    cost: a.cost,
                    label: a.label.clone(),
                })
            })
            .collect::<Result<_, _>>()?;
        Ok(InstanceFile {
            conclusion: query.conclusion.name().to_string(),
            assumptions,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{reduce_vertex_cover, solve_horn, SimpleGraph};

    #[test]
    fn reduction_survives_export_and_import() {
        let q = reduce_vertex_cover(&SimpleGraph::new(3, [(0, 1), (1, 2)])).unwrap();
        let file = InstanceFile::from_query(&q).unwrap();
        let back = InstanceFile::from_json(&file.to_json()).unwrap();
        assert_eq!(back, file);
        let q2 = back.to_query().unwrap();
        assert_eq!(
            solve_horn(&q2).unwrap().min_cost,
            solve_horn(&q).unwrap().min_cost
        );
    }

    #[test]
    fn missing_optional_fields_default() {
        let text = r#"{"conclusion":"c","assumptions":[{"id":"x","head":"c","cost":3}]}"#;
        let q = InstanceFile::from_json(text).unwrap().to_query().unwrap();
        assert_eq!(q.assumptions[0].cost, 3);
    }
}
