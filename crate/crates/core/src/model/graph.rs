use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::{CrateKey, CrateRecord, ModelError};

/// The resolved crate-version DAG below one root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependencyGraph {
    pub root: CrateKey,
    pub nodes: BTreeMap<CrateKey, CrateRecord>,
    /// Direct dependencies of each node, in declaration order.
    pub edges: BTreeMap<CrateKey, Vec<CrateKey>>,
}

impl DependencyGraph {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.values().map(Vec::len).sum()
    }

    pub fn record(&self, key: &CrateKey) -> Option<&CrateRecord> {
        self.nodes.get(key)
    }

    pub fn root_record(&self) -> &CrateRecord {
        &self.nodes[&self.root]
    }

    pub fn direct_dependencies(&self, key: &CrateKey) -> &[CrateKey] {
        self.edges.get(key).map(Vec::as_slice).unwrap_or_default()
    }

    /// Dependencies before their dependents. Fails with the offending path
    /// when the graph has a cycle.
    pub fn topological_order(&self) -> Result<Vec<CrateKey>, ModelError> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            Open,
            Done,
        }
        let mut marks: BTreeMap<&CrateKey, Mark> = BTreeMap::new();
        let mut order = Vec::with_capacity(self.nodes.len());
        for start in self.nodes.keys() {
            if marks.contains_key(start) {
                continue;
            }
            // explicit stack of (node, next child index)
            let mut stack: Vec<(&CrateKey, usize)> = vec![(start, 0)];
            marks.insert(start, Mark::Open);
            while let Some((node, i)) = stack.last_mut() {
                let deps = self.direct_dependencies(node);
                if let Some(child) = deps.get(*i) {
                    *i += 1;
                    match marks.get(child) {
                        None => {
                            marks.insert(child, Mark::Open);
                            stack.push((child, 0));
                        }
                        Some(Mark::Open) => {
                            let from = stack.iter().position(|(k, _)| *k == child).unwrap();
                            let mut path: Vec<String> =
                                stack[from..].iter().map(|(k, _)| k.to_string()).collect();
                            path.push(child.to_string());
                            return Err(ModelError::CyclicDependency(path));
                        }
                        Some(Mark::Done) => {}
                    }
                } else {
                    marks.insert(node, Mark::Done);
                    order.push((*node).clone());
                    stack.pop();
                }
            }
        }
        Ok(order)
    }
}

/// Breadth-first resolution of every transitive dependency at the exact
/// version recorded by its dependent. Each crate version is fetched once.
pub fn resolve_graph<F>(root: CrateRecord, mut fetch: F) -> Result<DependencyGraph, ModelError>
where
    F: FnMut(&CrateKey) -> Result<CrateRecord, ModelError>,
{
    let root_key = root.key();
    let mut nodes = BTreeMap::new();
    let mut edges = BTreeMap::new();
    let mut seen = BTreeSet::from([root_key.clone()]);
    let mut queue = VecDeque::from([root]);
    while let Some(record) = queue.pop_front() {
        let key = record.key();
        let deps: Vec<CrateKey> = record.dependencies.iter().map(|d| d.key()).collect();
        for dep in &deps {
            if seen.insert(dep.clone()) {
                let fetched = fetch(dep)?;
                if fetched.key() != *dep {
                    return Err(ModelError::Invalid(format!(
                        "asked for {dep}, got {}",
                        fetched.key()
                    )));
                }
                queue.push_back(fetched);
            }
        }
        edges.insert(key.clone(), deps);
        nodes.insert(key, record);
    }
    let graph = DependencyGraph {
        root: root_key,
        nodes,
        edges,
    };
    graph.topological_order()?;
    Ok(graph)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Dependency;
    use semver::Version;

    fn rec(name: &str, deps: &[&str]) -> CrateRecord {
        let mut r = CrateRecord::new(name, Version::new(1, 0, 0));
        r.dependencies = deps
            .iter()
            .map(|d| Dependency {
                name: d.to_string(),
                req: "^1".parse().unwrap(),
                version: Version::new(1, 0, 0),
            })
            .collect();
        r
    }

    fn world<'a>(
        defs: &'a [(&'a str, &'a [&'a str])],
    ) -> impl FnMut(&CrateKey) -> Result<CrateRecord, ModelError> + 'a {
        move |k| {
            defs.iter()
                .find(|(n, _)| *n == k.name)
                .map(|(n, ds)| rec(n, ds))
                .ok_or_else(|| ModelError::NotFound(k.to_string()))
        }
    }

    #[test]
    fn leaf_resolves_to_one_node() {
        let g = resolve_graph(rec("leaf", &[]), world(&[])).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn diamond_is_deduplicated() {
        let defs: &[(&str, &[&str])] = &[("b", &["d"]), ("c", &["d"]), ("d", &[])];
        let mut fetched = Vec::new();
        let mut inner = world(defs);
        let g = resolve_graph(rec("a", &["b", "c"]), |k| {
            fetched.push(k.name.clone());
            inner(k)
        })
        .unwrap();
        assert_eq!(g.len(), 4);
        assert_eq!(fetched, ["b", "c", "d"]);
        let order = g.topological_order().unwrap();
        let pos = |n: &str| order.iter().position(|k| k.name == n).unwrap();
        assert!(pos("d") < pos("b") && pos("b") < pos("a"));
    }

    #[test]
    fn cycle_reports_its_path() {
        let defs: &[(&str, &[&str])] = &[("b", &["c"]), ("c", &["a"]), ("a", &["b"])];
        let err = resolve_graph(rec("a", &["b"]), world(defs)).unwrap_err();
        let ModelError::CyclicDependency(path) = err else {
            panic!("{err}")
        };
        assert_eq!(path, ["a@1.0.0", "b@1.0.0", "c@1.0.0", "a@1.0.0"]);
    }

    #[test]
    fn missing_dependency_is_not_found() {
        let err = resolve_graph(rec("a", &["ghost"]), world(&[])).unwrap_err();
        assert!(matches!(err, ModelError::NotFound(_)));
    }
}
