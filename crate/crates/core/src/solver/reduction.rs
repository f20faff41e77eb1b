use std::collections::BTreeSet;

use super::{AssumptionInstance, SolverError, TrustQuery};
use crate::logic::Var;

/// Undirected simple graph over vertices `0..vertices`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

impl SimpleGraph {
    pub fn new(vertices: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        SimpleGraph {
            vertices,
            edges: edges.into_iter().collect(),
        }
    }

    pub fn is_cover(&self, cover: &BTreeSet<usize>) -> bool {
        self.edges
            .iter()
            .all(|(u, v)| cover.contains(u) || cover.contains(v))
    }
}

/// Builds a Horn instance whose minimum trust cost equals the size of a
/// minimum vertex cover of `graph`:
///
/// * `vᵢ` at cost 1 for every vertex,
/// * `vᵢ ⇒ eⱼ` at cost 0 for every vertex incident to edge `eⱼ`,
/// * `(e₁ ∧ … ∧ e_|E|) ⇒ c` at cost 0.
pub fn reduce_vertex_cover(graph: &SimpleGraph) -> Result<TrustQuery, SolverError> {
    if graph.edges.is_empty() {
        return Err(SolverError::InvalidQuery("graph has no edges".into()));
    }
    let mut seen = BTreeSet::new();
    for &(u, v) in &graph.edges {
        if u == v
            || u >= graph.vertices
            || v >= graph.vertices
            || !seen.insert((u.min(v), u.max(v)))
        {
            return Err(SolverError::InvalidQuery(format!(
                "edge ({u}, {v}) breaks simplicity"
            )));
        }
    }

    let vertex = |i: usize| Var::fact(format!("v{i}"));
    let edge = |j: usize| Var::fact(format!("e{j}"));
    let conclusion = Var::fact("c");

    let mut assumptions: Vec<AssumptionInstance> = (0..graph.vertices)
        .map(|i| {
            AssumptionInstance::horn(
                format!("v{i}"),
                [],
                vertex(i),
                1,
                format!("vertex {i} is in the cover"),
            )
        })
        .collect();
    for (j, &(u, v)) in graph.edges.iter().enumerate() {
        for w in [u, v] {
            assumptions.push(AssumptionInstance::horn(
                format!("v{w}-e{j}"),
                [vertex(w)],
                edge(j),
                0,
                format!("vertex {w} covers edge {j}"),
            ));
        }
    }
    assumptions.push(AssumptionInstance::horn(
        "cover",
        (0..graph.edges.len()).map(edge),
        conclusion.clone(),
        0,
        "every edge is covered",
    ));
    TrustQuery::new(assumptions, conclusion)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::solve_horn;

    #[test]
    fn single_edge() {
        let q = reduce_vertex_cover(&SimpleGraph::new(2, [(0, 1)])).unwrap();
        assert_eq!(solve_horn(&q).unwrap().min_cost, Some(1));
    }

    #[test]
    fn triangle_needs_two() {
        let q = reduce_vertex_cover(&SimpleGraph::new(3, [(0, 1), (1, 2), (0, 2)])).unwrap();
        assert_eq!(solve_horn(&q).unwrap().min_cost, Some(2));
    }

    #[test]
    fn star_is_covered_by_its_center() {
        let g = SimpleGraph::new(5, [(0, 1), (0, 2), (0, 3), (0, 4)]);
        let s = solve_horn(&reduce_vertex_cover(&g).unwrap()).unwrap();
        assert_eq!(s.min_cost, Some(1));
        assert!(s.chosen.contains("v0"));
    }

    #[test]
    fn rejects_loops_and_duplicates() {
        assert!(reduce_vertex_cover(&SimpleGraph::new(2, [(0, 0)])).is_err());
        assert!(reduce_vertex_cover(&SimpleGraph::new(2, [(0, 1), (1, 0)])).is_err());
        assert!(reduce_vertex_cover(&SimpleGraph::new(2, [])).is_err());
    }
}
