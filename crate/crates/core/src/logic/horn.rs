//! Horn clauses: flattening, acyclicity and forward chaining.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use super::formula::{Formula, Node, Var};
use super::LogicError;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Head {
    Var(Var),
    Bottom,
}

/// `body ⇒ head`. An empty body stands for `⊤`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HornClause {
    pub body: BTreeSet<Var>,
    pub head: Head,
}

impl HornClause {
    pub fn new<I: IntoIterator<Item = Var>>(body: I, head: Var) -> Self {
        HornClause {
            body: body.into_iter().collect(),
            head: Head::Var(head),
        }
    }

    pub fn fact(head: Var) -> Self {
        Self::new([], head)
    }

    pub fn head_var(&self) -> Option<&Var> {
        match &self.head {
            Head::Var(v) => Some(v),
            Head::Bottom => None,
        }
    }

    pub fn is_definite(&self) -> bool {
        matches!(self.head, Head::Var(_))
    }

    pub fn body_formula(&self) -> Formula {
        Formula::conj_vars(&self.body)
    }

    pub fn to_formula(&self) -> Formula {
        let head = match &self.head {
            Head::Var(v) => Formula::var(v.clone()),
            Head::Bottom => Formula::bottom(),
        };
        Formula::implies(self.body_formula(), head)
    }
}

impl fmt::Display for HornClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.body.is_empty() {
            f.write_str("⊤")?;
        } else {
            let names: Vec<_> = self.body.iter().map(Var::name).collect();
            f.write_str(&names.join(" ∧ "))?;
        }
        match &self.head {
            Head::Var(v) => write!(f, " ⇒ {v}"),
            Head::Bottom => f.write_str(" ⇒ ⊥"),
        }
    }
}

/// Flattens a conjunction of nested implications over variables into
/// definite Horn clauses. `a ⇒ ((p ∧ q) ⇒ r)` becomes `{a, p, q} ⇒ r`.
pub fn to_horn_clauses(f: &Formula) -> Result<Vec<HornClause>, LogicError> {
    let mut out = Vec::new();
    flatten(f, &BTreeSet::new(), &mut out)?;
    Ok(out)
}

fn flatten(f: &Formula, body: &BTreeSet<Var>, out: &mut Vec<HornClause>) -> Result<(), LogicError> {
    match f.node() {
        Node::True => Ok(()),
        Node::Var(v) => {
            out.push(HornClause {
                body: body.clone(),
                head: Head::Var(v.clone()),
            });
            Ok(())
        }
        Node::And(cs) => cs.iter().try_for_each(|c| flatten(c, body, out)),
        Node::Implies(ante, cons) => {
            let mut extended = body.clone();
            collect_body(ante, &mut extended).ok_or_else(|| non_horn(ante, "antecedent"))?;
            flatten(cons, &extended, out)
        }
        _ => Err(non_horn(f, "consequent")),
    }
}

fn collect_body(f: &Formula, body: &mut BTreeSet<Var>) -> Option<()> {
    match f.node() {
        Node::True => Some(()),
        Node::Var(v) => {
            body.insert(v.clone());
            Some(())
        }
        Node::And(cs) => cs.iter().try_for_each(|c| collect_body(c, body)),
        _ => None,
    }
}

fn non_horn(f: &Formula, part: &str) -> LogicError {
    LogicError::NonHornShape(format!("{part} `{f}` is not a conjunction of variables"))
}

/// Returns a ranking with `rank(head) > rank(b)` for every body variable `b`
/// of every definite clause, or `None` when the head/body graph has a cycle.
///
/// Ranks are longest-path depths, so variables that never occur as a head
/// get rank 0.
pub fn acyclic_ranking(clauses: &[HornClause]) -> Option<BTreeMap<Var, usize>> {
    let mut succ: HashMap<&Var, Vec<&Var>> = HashMap::new();
    let mut indegree: BTreeMap<&Var, usize> = BTreeMap::new();
    for clause in clauses {
        let Some(head) = clause.head_var() else {
            continue;
        };
        indegree.entry(head).or_default();
        for b in &clause.body {
            indegree.entry(b).or_default();
            succ.entry(b).or_default().push(head);
            *indegree.get_mut(head).unwrap() += 1;
        }
    }
    let total = indegree.len();
    let mut rank: BTreeMap<Var, usize> = BTreeMap::new();
    let mut queue: VecDeque<&Var> = indegree
        .iter()
        .filter(|(_, &d)| d == 0)
        .map(|(v, _)| *v)
        .collect();
    for v in &queue {
        rank.insert((*v).clone(), 0);
    }
    let mut done = 0;
    while let Some(v) = queue.pop_front() {
        done += 1;
        let r = rank[v];
        for &h in succ.get(v).map(Vec::as_slice).unwrap_or_default() {
            let entry = rank.entry(h.clone()).or_insert(0);
            *entry = (*entry).max(r + 1);
            let d = indegree.get_mut(h).unwrap();
            *d -= 1;
            if *d == 0 {
                queue.push_back(h);
            }
        }
    }
    (done == total).then_some(rank)
}

pub fn is_acyclic(clauses: &[HornClause]) -> bool {
    acyclic_ranking(clauses).is_some()
}

/// Least fixed point of the definite clauses starting from `facts`.
/// Linear time: each clause keeps a count of body variables not yet derived.
pub fn forward_chain(clauses: &[HornClause], facts: &BTreeSet<Var>) -> BTreeSet<Var> {
    let definite: Vec<&HornClause> = clauses.iter().filter(|c| c.is_definite()).collect();
    let mut missing: Vec<usize> = definite.iter().map(|c| c.body.len()).collect();
    let mut watchers: HashMap<&Var, Vec<usize>> = HashMap::new();
    for (i, c) in definite.iter().enumerate() {
        for b in &c.body {
            watchers.entry(b).or_default().push(i);
        }
    }

    let mut derived: BTreeSet<Var> = BTreeSet::new();
    let mut agenda: Vec<Var> = facts.iter().cloned().collect();
    for (i, c) in definite.iter().enumerate() {
        if missing[i] == 0 {
            agenda.push(c.head_var().unwrap().clone());
        }
    }
    while let Some(v) = agenda.pop() {
        if !derived.insert(v.clone()) {
            continue;
        }
        if let Some(ws) = watchers.get(&v) {
            for &i in ws {
                missing[i] -= 1;
                if missing[i] == 0 {
                    agenda.push(definite[i].head_var().unwrap().clone());
                }
            }
        }
    }
    derived
}
