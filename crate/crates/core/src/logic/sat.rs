//! Backtracking satisfiability search with unit propagation.
//!
//! Formulas are translated to clauses with one auxiliary variable per shared
//! connective node (full equivalence encoding), so assigning every original
//! variable determines the rest by propagation. Decisions are taken only on
//! original variables, in lexicographic order of their names, trying `false`
//! first.
//!
//! An optional cost bound `Σ cost(v) · v ≤ k` is enforced natively: the
//! running cost of true variables is tracked on the trail, over-budget
//! variables are forced false, and a lower bound on the cost still needed to
//! satisfy the formula prunes hopeless branches.

use std::collections::{BTreeMap, HashMap};

use super::budget::{Budget, Meter, ResourceLimit};
use super::formula::{Formula, Node, Var};

/// A total assignment over a declared variable set.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Assignment(BTreeMap<Var, bool>);

impl Assignment {
    pub fn new(map: BTreeMap<Var, bool>) -> Self {
        Assignment(map)
    }

    pub fn get(&self, v: &Var) -> Option<bool> {
        self.0.get(v).copied()
    }

    pub fn value(&self, v: &Var) -> bool {
        self.0.get(v).copied().unwrap_or(false)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, bool)> {
        self.0.iter().map(|(v, b)| (v, *b))
    }

    pub fn true_vars(&self) -> impl Iterator<Item = &Var> {
        self.0.iter().filter(|(_, b)| **b).map(|(v, _)| v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn satisfies(&self, f: &Formula) -> bool {
        f.eval(|v| self.value(v))
    }
}

/// Searches for a satisfying assignment over `atoms(f)`.
/// `Ok(None)` means the formula is unsatisfiable.
pub fn sat_search(f: &Formula, budget: &Budget) -> Result<Option<Assignment>, ResourceLimit> {
    let mut meter = budget.start();
    CostedSearch::new(f, &BTreeMap::new()).solve(None, &mut meter)
}

/// Like [`sat_search`], additionally requiring the total cost of the
/// variables set true to be at most `bound`.
pub fn sat_search_with_cost(
    f: &Formula,
    costs: &BTreeMap<Var, u64>,
    bound: u64,
    budget: &Budget,
) -> Result<Option<Assignment>, ResourceLimit> {
    let mut meter = budget.start();
    CostedSearch::new(f, costs).solve(Some(bound), &mut meter)
}

type Lit = u32;

fn lit(var: usize, negated: bool) -> Lit {
    ((var as u32) << 1) | negated as u32
}

fn lit_var(l: Lit) -> usize {
    (l >> 1) as usize
}

fn lit_neg(l: Lit) -> bool {
    l & 1 == 1
}

const UNASSIGNED: u8 = 0;
const TRUE: u8 = 1;
const FALSE: u8 = 2;

#[derive(Debug)]
enum Gate {
    Const(bool),
    Var(usize),
    Not(usize),
    And(Vec<usize>),
    Or(Vec<usize>),
    Implies(usize, usize),
}

#[derive(Debug)]
struct EncNode {
    gate: Gate,
    lit: Lit,
}

/// Clause encoding of one formula, reusable across cost bounds.
#[derive(Debug)]
pub struct CostedSearch {
    originals: Vec<Var>,
    num_vars: usize,
    clauses: Vec<Vec<Lit>>,
    nodes: Vec<EncNode>,
    costs: Vec<u64>,
    occurrences: Vec<f64>,
    by_cost_desc: Vec<usize>,
}

impl CostedSearch {
    pub fn new(f: &Formula, costs: &BTreeMap<Var, u64>) -> Self {
        let order = f.post_order();
        let originals: Vec<Var> = f.atoms().into_iter().collect();
        let var_index: HashMap<&Var, usize> =
            originals.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let mut num_vars = originals.len();
        let mut index: HashMap<usize, usize> = HashMap::with_capacity(order.len());
        let mut nodes: Vec<EncNode> = Vec::with_capacity(order.len());
        let mut clauses: Vec<Vec<Lit>> = Vec::new();

        let mut fresh = || {
            num_vars += 1;
            num_vars - 1
        };

        for node in &order {
            let child = |c: &Formula| index[&c.addr()];
            let (gate, l) = match node.node() {
                Node::True | Node::False => {
                    let value = node.is_true();
                    let g = fresh();
                    clauses.push(vec![lit(g, !value)]);
                    (Gate::Const(value), lit(g, false))
                }
                Node::Var(v) => {
                    let i = var_index[v];
                    (Gate::Var(i), lit(i, false))
                }
                Node::Not(c) => {
                    let ci = child(c);
                    (Gate::Not(ci), nodes[ci].lit ^ 1)
                }
                Node::And(cs) => {
                    let kids: Vec<usize> = cs.iter().map(child).collect();
                    let g = lit(fresh(), false);
                    let mut big = vec![g];
                    for &k in &kids {
                        let kl = nodes[k].lit;
                        clauses.push(vec![g ^ 1, kl]);
                        big.push(kl ^ 1);
                    }
                    clauses.push(big);
                    (Gate::And(kids), g)
                }
                Node::Or(cs) => {
                    let kids: Vec<usize> = cs.iter().map(child).collect();
                    let g = lit(fresh(), false);
                    let mut big = vec![g ^ 1];
                    for &k in &kids {
                        let kl = nodes[k].lit;
                        clauses.push(vec![g, kl ^ 1]);
                        big.push(kl);
                    }
                    clauses.push(big);
                    (Gate::Or(kids), g)
                }
                Node::Implies(a, b) => {
                    let (ai, bi) = (child(a), child(b));
                    let (al, bl) = (nodes[ai].lit, nodes[bi].lit);
                    let g = lit(fresh(), false);
                    // g ↔ (¬a ∨ b)
                    clauses.push(vec![g, al]);
                    clauses.push(vec![g, bl ^ 1]);
                    clauses.push(vec![g ^ 1, al ^ 1, bl]);
                    (Gate::Implies(ai, bi), g)
                }
            };
            index.insert(node.addr(), nodes.len());
            nodes.push(EncNode { gate, lit: l });
        }
        let root = nodes.last().expect("formula has a root").lit;
        clauses.push(vec![root]);
        let clauses = clauses.into_iter().filter_map(normalize_clause).collect();

        let mut cost_vec = vec![0u64; num_vars];
        for (v, &c) in costs {
            if let Some(&i) = var_index.get(v) {
                cost_vec[i] = c;
            }
        }

        // Occurrences of each variable in the tree unfolding of the graph.
        let mut paths = vec![0f64; nodes.len()];
        if let Some(last) = paths.last_mut() {
            *last = 1.0;
        }
        let mut occurrences = vec![0f64; originals.len()];
        for i in (0..nodes.len()).rev() {
            let p = paths[i];
            match &nodes[i].gate {
                Gate::Var(v) => occurrences[*v] += p,
                Gate::Not(c) => paths[*c] += p,
                Gate::And(ks) | Gate::Or(ks) => ks.iter().for_each(|&k| paths[k] += p),
                Gate::Implies(a, b) => {
                    paths[*a] += p;
                    paths[*b] += p;
                }
                Gate::Const(_) => {}
            }
        }

        let mut by_cost_desc: Vec<usize> =
            (0..originals.len()).filter(|&i| cost_vec[i] > 0).collect();
        by_cost_desc.sort_by(|&a, &b| cost_vec[b].cmp(&cost_vec[a]).then(a.cmp(&b)));

        CostedSearch {
            originals,
            num_vars,
            clauses,
            nodes,
            costs: cost_vec,
            occurrences,
            by_cost_desc,
        }
    }

    pub fn variables(&self) -> &[Var] {
        &self.originals
    }

    /// Runs the search under an optional cost bound, charging decisions and
    /// time to `meter`.
    pub fn solve(
        &self,
        bound: Option<u64>,
        meter: &mut Meter,
    ) -> Result<Option<Assignment>, ResourceLimit> {
        meter.check_time()?;
        let mut st = State::new(self, bound);
        for c in &self.clauses {
            if c.len() == 1 && !st.enqueue(c[0]) {
                return Ok(None);
            }
        }
        // (decision variable, already flipped), trail length at the decision
        let mut decisions: Vec<(usize, bool, usize)> = Vec::new();
        loop {
            if !st.settle() {
                // chronological backtracking
                loop {
                    let Some((var, flipped, mark)) = decisions.pop() else {
                        return Ok(None);
                    };
                    st.undo_to(mark);
                    if !flipped {
                        decisions.push((var, true, mark));
                        st.enqueue(lit(var, false));
                        break;
                    }
                }
                continue;
            }
            let next = (0..self.originals.len())
                .find(|&v| st.value[v] == UNASSIGNED)
                .or_else(|| {
                    (self.originals.len()..self.num_vars).find(|&v| st.value[v] == UNASSIGNED)
                });
            let Some(var) = next else {
                let model = self
                    .originals
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (v.clone(), st.value[i] == TRUE))
                    .collect();
                return Ok(Some(Assignment(model)));
            };
            meter.decide()?;
            decisions.push((var, false, st.trail.len()));
            st.enqueue(lit(var, true));
        }
    }
}

fn normalize_clause(mut c: Vec<Lit>) -> Option<Vec<Lit>> {
    c.sort_unstable();
    c.dedup();
    // x and ¬x differ only in the low bit and sort adjacently
    if c.windows(2).any(|w| w[0] ^ 1 == w[1]) {
        return None;
    }
    Some(c)
}

struct State<'a> {
    enc: &'a CostedSearch,
    bound: Option<u64>,
    value: Vec<u8>,
    trail: Vec<Lit>,
    qhead: usize,
    clauses: Vec<Vec<Lit>>,
    watches: Vec<Vec<usize>>,
    cost: u64,
    lb_true: Vec<f64>,
    lb_false: Vec<f64>,
}

impl<'a> State<'a> {
    fn new(enc: &'a CostedSearch, bound: Option<u64>) -> Self {
        let clauses = enc.clauses.clone();
        let mut watches = vec![Vec::new(); enc.num_vars * 2];
        for (i, c) in clauses.iter().enumerate() {
            if c.len() >= 2 {
                watches[c[0] as usize].push(i);
                watches[c[1] as usize].push(i);
            }
        }
        State {
            enc,
            bound,
            value: vec![UNASSIGNED; enc.num_vars],
            trail: Vec::new(),
            qhead: 0,
            clauses,
            watches,
            cost: 0,
            lb_true: vec![0.0; enc.nodes.len()],
            lb_false: vec![0.0; enc.nodes.len()],
        }
    }

    fn lit_value(&self, l: Lit) -> u8 {
        match self.value[lit_var(l)] {
            UNASSIGNED => UNASSIGNED,
            v => {
                let is_true = (v == TRUE) != lit_neg(l);
                if is_true {
                    TRUE
                } else {
                    FALSE
                }
            }
        }
    }

    /// Assigns `l` true. Returns false if it is already false.
    fn enqueue(&mut self, l: Lit) -> bool {
        match self.lit_value(l) {
            TRUE => true,
            FALSE => false,
            _ => {
                let v = lit_var(l);
                self.value[v] = if lit_neg(l) { FALSE } else { TRUE };
                if !lit_neg(l) {
                    self.cost += self.enc.costs[v];
                }
                self.trail.push(l);
                true
            }
        }
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let l = self.trail.pop().unwrap();
            let v = lit_var(l);
            if !lit_neg(l) {
                self.cost -= self.enc.costs[v];
            }
            self.value[v] = UNASSIGNED;
        }
        self.qhead = self.trail.len();
    }

    /// Unit propagation to a fixed point. Returns false on conflict.
    fn propagate(&mut self) -> bool {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            let false_lit = p ^ 1;
            let watching = std::mem::take(&mut self.watches[false_lit as usize]);
            let mut keep = Vec::with_capacity(watching.len());
            let mut conflict = false;
            for (pos, &ci) in watching.iter().enumerate() {
                if conflict {
                    keep.extend_from_slice(&watching[pos..]);
                    break;
                }
                let c = &mut self.clauses[ci];
                if c[0] == false_lit {
                    c.swap(0, 1);
                }
                let first = c[0];
                if self.lit_value(first) == TRUE {
                    keep.push(ci);
                    continue;
                }
                let c = &mut self.clauses[ci];
                let mut moved = false;
                for k in 2..c.len() {
                    let candidate = c[k];
                    let val = match self.value[lit_var(candidate)] {
                        UNASSIGNED => UNASSIGNED,
                        v => {
                            if (v == TRUE) != lit_neg(candidate) {
                                TRUE
                            } else {
                                FALSE
                            }
                        }
                    };
                    if val != FALSE {
                        c.swap(1, k);
                        self.watches[candidate as usize].push(ci);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                keep.push(ci);
                if !self.enqueue(first) {
                    conflict = true;
                }
            }
            self.watches[false_lit as usize] = keep;
            if conflict {
                return false;
            }
        }
        true
    }

    /// Propagation plus the cost constraint. Returns false on conflict.
    fn settle(&mut self) -> bool {
        loop {
            if !self.propagate() {
                return false;
            }
            let Some(bound) = self.bound else { return true };
            if self.cost > bound {
                return false;
            }
            let slack = bound - self.cost;
            let mut forced = false;
            for &v in &self.enc.by_cost_desc {
                if self.enc.costs[v] <= slack {
                    break;
                }
                if self.value[v] == UNASSIGNED {
                    self.enqueue(lit(v, true));
                    forced = true;
                }
            }
            if forced {
                continue;
            }
            return self.lower_bound() <= bound as f64 + 1e-6;
        }
    }

    /// Cost of the true variables plus a lower bound on what any completion
    /// must still pay. Each variable's cost is spread over its occurrences,
    /// so the cheapest witness tree never overcounts a shared variable.
    fn lower_bound(&mut self) -> f64 {
        let enc = self.enc;
        for (i, node) in enc.nodes.iter().enumerate() {
            let (mut t, mut f) = match &node.gate {
                Gate::Const(true) => (0.0, f64::INFINITY),
                Gate::Const(false) => (f64::INFINITY, 0.0),
                Gate::Var(v) => match self.value[*v] {
                    TRUE => (0.0, f64::INFINITY),
                    FALSE => (f64::INFINITY, 0.0),
                    _ => {
                        let c = enc.costs[*v] as f64;
                        (
                            if c == 0.0 {
                                0.0
                            } else {
                                c / enc.occurrences[*v]
                            },
                            0.0,
                        )
                    }
                },
                Gate::Not(c) => (self.lb_false[*c], self.lb_true[*c]),
                Gate::And(ks) => (
                    ks.iter().map(|&k| self.lb_true[k]).sum(),
                    ks.iter()
                        .map(|&k| self.lb_false[k])
                        .fold(f64::INFINITY, f64::min),
                ),
                Gate::Or(ks) => (
                    ks.iter()
                        .map(|&k| self.lb_true[k])
                        .fold(f64::INFINITY, f64::min),
                    ks.iter().map(|&k| self.lb_false[k]).sum(),
                ),
                Gate::Implies(a, b) => (
                    self.lb_false[*a].min(self.lb_true[*b]),
                    self.lb_true[*a] + self.lb_false[*b],
                ),
            };
            if !matches!(node.gate, Gate::Var(_) | Gate::Not(_)) {
                match self.lit_value(node.lit) {
                    TRUE => f = f64::INFINITY,
                    FALSE => t = f64::INFINITY,
                    _ => {}
                }
            }
            self.lb_true[i] = t;
            self.lb_false[i] = f;
        }
        let root = enc.nodes.len() - 1;
        self.cost as f64 + self.lb_true[root]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(name: &str) -> Formula {
        Formula::var(Var::tracker(name))
    }

    fn fv(name: &str) -> Formula {
        Formula::var(Var::fact(name))
    }

    fn brute_force_sat(f: &Formula) -> bool {
        let atoms: Vec<Var> = f.atoms().into_iter().collect();
        (0u32..1 << atoms.len()).any(|bits| {
            f.eval(|v| {
                let i = atoms.iter().position(|a| a == v).unwrap();
                bits & (1 << i) != 0
            })
        })
    }

    #[test]
    fn picks_second_disjunct_when_first_is_blocked() {
        let f = Formula::and([
            Formula::or([t("a1"), Formula::and([t("a4"), t("a3")])]),
            Formula::not(t("a1")),
        ]);
        let model = sat_search(&f, &Budget::default()).unwrap().unwrap();
        assert!(!model.value(&Var::tracker("a1")));
        assert!(model.value(&Var::tracker("a3")));
        assert!(model.value(&Var::tracker("a4")));
        assert_eq!(model.len(), 3);
    }

    #[test]
    fn contradiction_is_unsat() {
        let f = Formula::and([fv("a"), Formula::not(fv("a"))]);
        assert_eq!(sat_search(&f, &Budget::default()).unwrap(), None);
    }

    #[test]
    fn constants() {
        assert!(sat_search(&Formula::top(), &Budget::default())
            .unwrap()
            .is_some());
        assert!(sat_search(&Formula::bottom(), &Budget::default())
            .unwrap()
            .is_none());
    }

    #[test]
    fn cost_bound_excludes_expensive_models() {
        let f = Formula::or([t("x"), t("y")]);
        let costs: BTreeMap<Var, u64> = [(Var::tracker("x"), 10), (Var::tracker("y"), 3)].into();
        let m = sat_search_with_cost(&f, &costs, 5, &Budget::default())
            .unwrap()
            .unwrap();
        assert!(m.value(&Var::tracker("y")) && !m.value(&Var::tracker("x")));
        assert!(sat_search_with_cost(&f, &costs, 2, &Budget::default())
            .unwrap()
            .is_none());
    }

    #[test]
    fn shared_variables_do_not_break_the_bound() {
        // (x ∧ y) ∨ (x ∧ z): x is counted once even though it occurs twice
        let f = Formula::or([
            Formula::and([t("x"), t("y")]),
            Formula::and([t("x"), t("z")]),
        ]);
        let costs: BTreeMap<Var, u64> = [
            (Var::tracker("x"), 4),
            (Var::tracker("y"), 1),
            (Var::tracker("z"), 2),
        ]
        .into();
        assert!(sat_search_with_cost(&f, &costs, 5, &Budget::default())
            .unwrap()
            .is_some());
        assert!(sat_search_with_cost(&f, &costs, 4, &Budget::default())
            .unwrap()
            .is_none());
    }

    #[test]
    fn decision_limit_is_reported() {
        let f = Formula::and(
            (0..10).map(|i| Formula::or([fv(&format!("p{i}")), fv(&format!("q{i}"))])),
        );
        let budget = Budget::unlimited().with_max_decisions(3);
        assert!(sat_search(&f, &budget).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        const NAMES: [&str; 5] = ["p", "q", "r", "s", "u"];

        fn arb_formula() -> impl Strategy<Value = Formula> {
            let leaf = (0..NAMES.len()).prop_map(|i| fv(NAMES[i]));
            leaf.prop_recursive(4, 32, 4, |inner| {
                prop_oneof![
                    inner.clone().prop_map(Formula::not),
                    prop::collection::vec(inner.clone(), 1..4).prop_map(Formula::and),
                    prop::collection::vec(inner.clone(), 1..4).prop_map(Formula::or),
                    (inner.clone(), inner).prop_map(|(a, b)| Formula::implies(a, b)),
                ]
            })
        }

        proptest! {
            #[test]
            fn agrees_with_truth_table(f in arb_formula()) {
                let found = sat_search(&f, &Budget::default()).unwrap();
                prop_assert_eq!(found.is_some(), brute_force_sat(&f));
                if let Some(m) = found {
                    prop_assert!(m.satisfies(&f));
                }
            }

            #[test]
            fn cost_bound_matches_enumeration(
                f in arb_formula(),
                costs in prop::collection::vec(0u64..6, NAMES.len()),
                bound in 0u64..12,
            ) {
                let atoms: Vec<Var> = f.atoms().into_iter().collect();
                let cost_map: BTreeMap<Var, u64> =
                    NAMES.iter().zip(&costs).map(|(n, c)| (Var::fact(n), *c)).collect();
                let expected = (0u32..1 << atoms.len()).any(|bits| {
                    let on = |v: &Var| bits & (1 << atoms.iter().position(|a| a == v).unwrap()) != 0;
                    let total: u64 = atoms.iter().filter(|v| on(v)).map(|v| cost_map[v]).sum();
                    total <= bound && f.eval(on)
                });
                let found = sat_search_with_cost(&f, &cost_map, bound, &Budget::default()).unwrap();
                prop_assert_eq!(found.is_some(), expected);
                if let Some(m) = found {
                    prop_assert!(m.satisfies(&f));
                    let total: u64 = m.true_vars().map(|v| cost_map[v]).sum();
                    prop_assert!(total <= bound);
                }
            }
        }
    }
}
