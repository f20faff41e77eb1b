//! Propositional formulas with structural sharing.
//!
//! A [`Formula`] is a cheap-to-clone handle onto an immutable node graph.
//! Every constructor folds constants and flattens nested conjunctions and
//! disjunctions, so constant nodes never appear below the root.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

/// Whether a variable tracks the selection of an assumption or stands for a
/// plain fact about the world.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKind {
    Tracker,
    Fact,
}

/// A propositional variable. Ordering is lexicographic by name.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    name: Arc<str>,
    kind: VarKind,
}

impl Var {
    pub fn new(name: impl AsRef<str>, kind: VarKind) -> Self {
        Var {
            name: Arc::from(name.as_ref()),
            kind,
        }
    }

    pub fn fact(name: impl AsRef<str>) -> Self {
        Self::new(name, VarKind::Fact)
    }

    pub fn tracker(name: impl AsRef<str>) -> Self {
        Self::new(name, VarKind::Tracker)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> VarKind {
        self.kind
    }

    pub fn is_tracker(&self) -> bool {
        self.kind == VarKind::Tracker
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

#[derive(Debug)]
pub enum Node {
    True,
    False,
    Var(Var),
    Not(Formula),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Formula, Formula),
}

#[derive(Clone)]
pub struct Formula(Arc<Node>);

impl Formula {
    fn from_node(node: Node) -> Self {
        Formula(Arc::new(node))
    }

    pub fn top() -> Self {
        Self::from_node(Node::True)
    }

    pub fn bottom() -> Self {
        Self::from_node(Node::False)
    }

    pub fn constant(value: bool) -> Self {
        if value {
            Self::top()
        } else {
            Self::bottom()
        }
    }

    pub fn var(v: Var) -> Self {
        Self::from_node(Node::Var(v))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        match f.node() {
            Node::True => Self::bottom(),
            Node::False => Self::top(),
            Node::Not(inner) => inner.clone(),
            _ => Self::from_node(Node::Not(f)),
        }
    }

    pub fn and<I: IntoIterator<Item = Formula>>(items: I) -> Self {
        let mut children = Vec::new();
        for item in items {
            match item.node() {
                Node::True => {}
                Node::False => return Self::bottom(),
                Node::And(inner) => children.extend(inner.iter().cloned()),
                _ => children.push(item),
            }
        }
        match children.len() {
            0 => Self::top(),
            1 => children.pop().unwrap(),
            _ => Self::from_node(Node::And(children)),
        }
    }

    pub fn or<I: IntoIterator<Item = Formula>>(items: I) -> Self {
        let mut children = Vec::new();
        for item in items {
            match item.node() {
                Node::False => {}
                Node::True => return Self::top(),
                Node::Or(inner) => children.extend(inner.iter().cloned()),
                _ => children.push(item),
            }
        }
        match children.len() {
            0 => Self::bottom(),
            1 => children.pop().unwrap(),
            _ => Self::from_node(Node::Or(children)),
        }
    }

    pub fn implies(antecedent: Formula, consequent: Formula) -> Self {
        match (antecedent.node(), consequent.node()) {
            (Node::True, _) => consequent,
            (Node::False, _) | (_, Node::True) => Self::top(),
            (_, Node::False) => Self::not(antecedent),
            _ => Self::from_node(Node::Implies(antecedent, consequent)),
        }
    }

    /// Conjunction of variables, `⊤` when empty.
    pub fn conj_vars<'a, I: IntoIterator<Item = &'a Var>>(vars: I) -> Self {
        Self::and(vars.into_iter().cloned().map(Self::var))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn is_true(&self) -> bool {
        matches!(self.node(), Node::True)
    }

    pub fn is_false(&self) -> bool {
        matches!(self.node(), Node::False)
    }

    pub fn as_var(&self) -> Option<&Var> {
        match self.node() {
            Node::Var(v) => Some(v),
            _ => None,
        }
    }

    pub(crate) fn addr(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    pub fn ptr_eq(&self, other: &Formula) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    fn for_each_child(&self, mut f: impl FnMut(&Formula)) {
        match self.node() {
            Node::True | Node::False | Node::Var(_) => {}
            Node::Not(c) => f(c),
            Node::And(cs) | Node::Or(cs) => cs.iter().for_each(f),
            Node::Implies(a, b) => {
                f(a);
                f(b);
            }
        }
    }

    /// Distinct nodes in post-order (children before parents).
    pub fn post_order(&self) -> Vec<Formula> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        // explicit stack: (node, children_pushed)
        let mut stack = vec![(self.clone(), false)];
        while let Some((f, expanded)) = stack.pop() {
            if expanded {
                out.push(f);
                continue;
            }
            if !seen.insert(f.addr()) {
                continue;
            }
            stack.push((f.clone(), true));
            f.for_each_child(|c| {
                if !seen.contains(&c.addr()) {
                    stack.push((c.clone(), false));
                }
            });
        }
        out
    }

    /// The set of variables occurring in the formula.
    pub fn atoms(&self) -> BTreeSet<Var> {
        self.post_order()
            .iter()
            .filter_map(|f| f.as_var().cloned())
            .collect()
    }

    /// Number of distinct nodes plus child edges of the shared graph.
    pub fn dag_size(&self) -> usize {
        self.post_order()
            .iter()
            .map(|f| {
                1 + match f.node() {
                    Node::Not(_) => 1,
                    Node::And(cs) | Node::Or(cs) => cs.len(),
                    Node::Implies(..) => 2,
                    _ => 0,
                }
            })
            .sum()
    }

    pub fn eval(&self, lookup: impl Fn(&Var) -> bool) -> bool {
        let mut memo: HashMap<usize, bool> = HashMap::new();
        for f in self.post_order() {
            let value = match f.node() {
                Node::True => true,
                Node::False => false,
                Node::Var(v) => lookup(v),
                Node::Not(c) => !memo[&c.addr()],
                Node::And(cs) => cs.iter().all(|c| memo[&c.addr()]),
                Node::Or(cs) => cs.iter().any(|c| memo[&c.addr()]),
                Node::Implies(a, b) => !memo[&a.addr()] || memo[&b.addr()],
            };
            memo.insert(f.addr(), value);
        }
        memo[&self.addr()]
    }

    /// Replaces every occurrence of `v` by `replacement`, folding constants.
    /// Untouched subgraphs keep their sharing.
    pub fn substitute(&self, v: &Var, replacement: &Formula) -> Formula {
        let mut memo: HashMap<usize, Formula> = HashMap::new();
        for f in self.post_order() {
            let rebuilt = match f.node() {
                Node::Var(x) if x == v => replacement.clone(),
                Node::True | Node::False | Node::Var(_) => f.clone(),
                Node::Not(c) => {
                    let nc = &memo[&c.addr()];
                    if nc.ptr_eq(c) {
                        f.clone()
                    } else {
                        Formula::not(nc.clone())
                    }
                }
                Node::And(cs) | Node::Or(cs) => {
                    let new: Vec<Formula> = cs.iter().map(|c| memo[&c.addr()].clone()).collect();
                    if new.iter().zip(cs).all(|(n, o)| n.ptr_eq(o)) {
                        f.clone()
                    } else if matches!(f.node(), Node::And(_)) {
                        Formula::and(new)
                    } else {
                        Formula::or(new)
                    }
                }
                Node::Implies(a, b) => {
                    let (na, nb) = (&memo[&a.addr()], &memo[&b.addr()]);
                    if na.ptr_eq(a) && nb.ptr_eq(b) {
                        f.clone()
                    } else {
                        Formula::implies(na.clone(), nb.clone())
                    }
                }
            };
            memo.insert(f.addr(), rebuilt);
        }
        memo.remove(&self.addr()).expect("root visited")
    }

    /// True if no negation or implication occurs anywhere.
    pub fn is_monotone(&self) -> bool {
        self.post_order()
            .iter()
            .all(|f| !matches!(f.node(), Node::Not(_) | Node::Implies(..)))
    }
}

impl PartialEq for Formula {
    fn eq(&self, other: &Self) -> bool {
        if self.ptr_eq(other) {
            return true;
        }
        match (self.node(), other.node()) {
            (Node::True, Node::True) | (Node::False, Node::False) => true,
            (Node::Var(a), Node::Var(b)) => a == b,
            (Node::Not(a), Node::Not(b)) => a == b,
            (Node::And(a), Node::And(b)) | (Node::Or(a), Node::Or(b)) => a == b,
            (Node::Implies(a1, b1), Node::Implies(a2, b2)) => a1 == a2 && b1 == b2,
            _ => false,
        }
    }
}

impl Eq for Formula {}

impl From<Var> for Formula {
    fn from(v: Var) -> Self {
        Formula::var(v)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn join(f: &mut fmt::Formatter<'_>, cs: &[Formula], op: &str) -> fmt::Result {
            f.write_str("(")?;
            for (i, c) in cs.iter().enumerate() {
                if i > 0 {
                    write!(f, " {op} ")?;
                }
                write!(f, "{c}")?;
            }
            f.write_str(")")
        }
        match self.node() {
            Node::True => f.write_str("⊤"),
            Node::False => f.write_str("⊥"),
            Node::Var(v) => write!(f, "{v}"),
            Node::Not(c) => write!(f, "¬{c}"),
            Node::And(cs) => join(f, cs, "∧"),
            Node::Or(cs) => join(f, cs, "∨"),
            Node::Implies(a, b) => write!(f, "({a} ⇒ {b})"),
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(name: &str) -> Formula {
        Formula::var(Var::fact(name))
    }

    fn t(name: &str) -> Formula {
        Formula::var(Var::tracker(name))
    }

    #[test]
    fn atoms_of_constant_is_empty() {
        assert!(Formula::top().atoms().is_empty());
    }

    #[test]
    fn atoms_read_off_syntax() {
        let f = Formula::and([
            Formula::implies(t("a1"), v("c")),
            Formula::implies(t("a4"), Formula::implies(v("d"), v("c"))),
        ]);
        let names: Vec<_> = f.atoms().iter().map(|x| x.name().to_string()).collect();
        assert_eq!(names, ["a1", "a4", "c", "d"]);
    }

    #[test]
    fn substitute_variable_by_variable() {
        let f = Formula::and([t("a4"), v("d")]);
        let g = f.substitute(&Var::fact("d"), &t("a3"));
        assert_eq!(g, Formula::and([t("a4"), t("a3")]));
    }

    #[test]
    fn substitute_absent_variable_is_identity() {
        let f = v("c");
        let g = f.substitute(&Var::fact("m"), &Formula::bottom());
        assert!(g.ptr_eq(&f));
    }

    #[test]
    fn substitute_folds_constants() {
        let f = Formula::or([v("m"), v("x")]);
        let g = f.substitute(&Var::fact("m"), &Formula::bottom());
        assert_eq!(g, v("x"));
        let h = Formula::and([v("m"), v("x")]).substitute(&Var::fact("m"), &Formula::bottom());
        assert!(h.is_false());
    }

    #[test]
    fn constructors_flatten() {
        let f = Formula::or([Formula::or([v("a"), v("b")]), v("c")]);
        assert!(matches!(f.node(), Node::Or(cs) if cs.len() == 3));
        assert!(Formula::and(Vec::new()).is_true());
        assert!(Formula::or(Vec::new()).is_false());
        assert_eq!(Formula::not(Formula::not(v("a"))), v("a"));
    }

    #[test]
    fn shared_nodes_are_counted_once() {
        let shared = Formula::and([v("a"), v("b")]);
        let f = Formula::or([shared.clone(), Formula::and([shared, v("c")])]);
        // or(2) + and(2) + and(2) + a + b + c
        assert_eq!(f.post_order().len(), 6);
    }

    fn arb_formula() -> impl Strategy<Value = Formula> {
        let leaf = prop_oneof![
            (0..4usize).prop_map(|i| v(["p", "q", "r", "s"][i])),
            any::<bool>().prop_map(Formula::constant),
        ];
        leaf.prop_recursive(4, 24, 3, |inner| {
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                prop::collection::vec(inner.clone(), 0..3).prop_map(Formula::and),
                prop::collection::vec(inner.clone(), 0..3).prop_map(Formula::or),
                (inner.clone(), inner).prop_map(|(a, b)| Formula::implies(a, b)),
            ]
        })
    }

    proptest! {
        #[test]
        fn substitute_then_eval_matches_rebinding(
            f in arb_formula(),
            g in arb_formula(),
            bits in 0u8..16,
            target in 0..4usize,
        ) {
            let names = ["p", "q", "r", "s"];
            let sigma = |x: &Var| {
                let i = names.iter().position(|n| *n == x.name()).unwrap();
                bits & (1 << i) != 0
            };
            let target = Var::fact(names[target]);
            let g_val = g.eval(sigma);
            let lhs = f.substitute(&target, &g).eval(sigma);
            let rhs = f.eval(|x: &Var| if *x == target { g_val } else { sigma(x) });
            prop_assert_eq!(lhs, rhs);
        }
    }
}
