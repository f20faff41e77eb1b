mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use trustcost::logic::{Budget, Formula, Var};
use trustcost::solver::{
    join_assumptions, reduce_vertex_cover, solve_bruteforce, solve_horn, solve_naive, unfold,
    AssumptionInstance, SolveStatus, TrustQuery,
};

fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn worked_example_unfolded() -> (Formula, Vec<Var>) {
    let q = common::worked_example_query();
    let e = unfold(
        &q.formula(),
        &q.conclusion,
        &q.trackers(),
        &mut Budget::default().start(),
    )
    .unwrap();
    (e, q.trackers().into_iter().collect())
}

#[test]
fn worked_example_unfolds_to_every_route_to_c() {
    let (e, trackers) = worked_example_unfolded();
    let t = common::tracker;
    // memchr is safe either outright (2) or through Bob (6, 8)
    let expected = Formula::or([
        t("1"),
        Formula::and([t("4"), t("3")]),
        Formula::and([
            t("7"),
            t("5"),
            Formula::or([t("2"), Formula::and([t("6"), t("8")])]),
        ]),
    ]);
    assert!(common::equivalent_on(&e, &expected, &trackers));
}

#[test]
fn worked_example_three_route_summary_misses_only_the_outright_memchr_route() {
    let (e, trackers) = worked_example_unfolded();
    let t = common::tracker;
    let three_routes = Formula::or([
        t("1"),
        Formula::and([t("4"), t("3")]),
        Formula::and([t("7"), t("5"), t("6"), t("8")]),
    ]);
    assert!(!common::equivalent_on(&e, &three_routes, &trackers));
    // they differ exactly where 2, 5 and 7 are selected and nothing else reaches c
    let patched = Formula::or([three_routes, Formula::and([t("2"), t("5"), t("7")])]);
    assert!(common::equivalent_on(&e, &patched, &trackers));
}

#[test]
fn worked_example_costs_45_under_every_solver() {
    let q = common::worked_example_query();
    let want: BTreeSet<String> = ["5", "6", "7", "8"].map(String::from).into();
    for sol in [solve_horn(&q), solve_naive(&q), solve_bruteforce(&q)] {
        let sol = sol.unwrap();
        assert_eq!(sol.min_cost, Some(45));
        assert_eq!(sol.chosen, want);
    }
}

#[test]
fn zero_cost_conclusion() {
    let c = Var::fact("c");
    let q = TrustQuery::new(
        vec![AssumptionInstance::horn("free", [], c.clone(), 0, "")],
        c,
    )
    .unwrap();
    let sol = solve_horn(&q).unwrap();
    assert_eq!(sol.min_cost, Some(0));
    assert_eq!(sol.chosen, ["free".to_string()].into());
}

#[test]
fn empty_assumption_set_is_infeasible() {
    let q = TrustQuery::new(vec![], Var::fact("c")).unwrap();
    assert_eq!(solve_naive(&q).unwrap().status, SolveStatus::Infeasible);
    assert_eq!(solve_horn(&q).unwrap().status, SolveStatus::Infeasible);
    assert_eq!(
        solve_bruteforce(&q).unwrap().status,
        SolveStatus::Infeasible
    );
}

#[test]
fn triangle_and_star_covers() {
    let k3 = trustcost::solver::SimpleGraph::new(3, [(0, 1), (1, 2), (0, 2)]);
    let star = trustcost::solver::SimpleGraph::new(5, [(0, 1), (0, 2), (0, 3), (0, 4)]);
    for g in [k3, star] {
        let got = solve_horn(&reduce_vertex_cover(&g).unwrap())
            .unwrap()
            .min_cost;
        assert_eq!(got, Some(common::min_vertex_cover(&g) as u64));
    }
}

fn check_witness(
    q: &TrustQuery,
    chosen: &BTreeSet<String>,
    cost: u64,
) -> Result<(), TestCaseError> {
    prop_assert_eq!(q.cost_of(chosen), cost);
    prop_assert!(common::naive_closure_entails(q, chosen));
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn solvers_agree_with_the_oracle(seed in any::<u64>()) {
        let q = common::random_horn_instance(&mut seeded(seed), 12);
        let want = common::oracle_min_cost(&q);
        for sol in [solve_horn(&q).unwrap(), solve_naive(&q).unwrap(), solve_bruteforce(&q).unwrap()] {
            prop_assert_eq!(sol.min_cost, want);
            match want {
                Some(cost) => check_witness(&q, &sol.chosen, cost)?,
                None => prop_assert_eq!(sol.status, SolveStatus::Infeasible),
            }
        }
    }

    #[test]
    fn unfolding_matches_entailment_on_every_assignment(seed in any::<u64>()) {
        let q = common::random_horn_instance(&mut seeded(seed), 10);
        let e = unfold(&q.formula(), &q.conclusion, &q.trackers(), &mut Budget::default().start()).unwrap();
        let n = q.assumptions.len();
        for mask in 0u32..(1 << n) {
            let chosen: BTreeSet<String> =
                (0..n).filter(|i| mask >> i & 1 == 1).map(|i| q.assumptions[i].id.clone()).collect();
            let on = e.eval(|v| q.assumptions.iter().any(|a| &a.tracker == v && chosen.contains(&a.id)));
            prop_assert_eq!(on, common::naive_closure_entails(&q, &chosen));
        }
    }

    #[test]
    fn raising_a_cost_never_lowers_the_minimum(seed in any::<u64>(), pick in any::<prop::sample::Index>(), bump in 1u32..50) {
        let q = common::random_horn_instance(&mut seeded(seed), 10);
        let base = solve_horn(&q).unwrap();
        let i = pick.index(q.assumptions.len());
        let mut raised = q.assumptions.clone();
        raised[i].cost = (raised[i].cost + bump).min(100);
        let after = solve_horn(&TrustQuery::new(raised, q.conclusion.clone()).unwrap()).unwrap();
        if let Some(before) = base.min_cost {
            prop_assert!(after.min_cost.unwrap() >= before);
        }
    }

    #[test]
    fn removing_an_assumption_never_lowers_the_minimum(seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
        let q = common::random_horn_instance(&mut seeded(seed), 10);
        let base = solve_horn(&q).unwrap();
        let mut fewer = q.assumptions.clone();
        fewer.remove(pick.index(fewer.len()));
        let after = solve_horn(&TrustQuery::new(fewer, q.conclusion.clone()).unwrap()).unwrap();
        match (base.min_cost, after.min_cost) {
            (Some(before), Some(now)) => prop_assert!(now >= before),
            (None, now) => prop_assert_eq!(now, None),
            (Some(_), None) => {}
        }
    }

    #[test]
    fn the_base_assumption_caps_the_cost(seed in any::<u64>()) {
        let q = common::random_horn_instance(&mut seeded(seed), 8);
        let mut with_base = q.assumptions.clone();
        with_base.push(AssumptionInstance::horn("base", [], q.conclusion.clone(), 100, ""));
        let sol = solve_horn(&TrustQuery::new(with_base, q.conclusion.clone()).unwrap()).unwrap();
        prop_assert_eq!(sol.status, SolveStatus::Solved);
        prop_assert!(sol.min_cost.unwrap() <= 100);
    }

    #[test]
    fn vertex_cover_reduction_is_exact(seed in any::<u64>()) {
        let g = common::random_graph(&mut seeded(seed), 8);
        let sol = solve_horn(&reduce_vertex_cover(&g).unwrap()).unwrap();
        prop_assert_eq!(sol.min_cost, Some(common::min_vertex_cover(&g) as u64));
        let cover: BTreeSet<usize> = sol
            .chosen
            .iter()
            .filter_map(|id| id.strip_prefix('v').and_then(|n| n.parse().ok()))
            .collect();
        prop_assert!(g.is_cover(&cover));
    }
}

#[test]
fn diamond_join_solves_like_a_flat_query() {
    // A depends on B and C, both depend on D. D's assumptions are joined once.
    let deps = |k: &&str| -> Vec<&str> {
        match *k {
            "A" => vec!["B", "C"],
            "B" | "C" => vec!["D"],
            _ => vec![],
        }
    };
    let safe = |k: &str| Var::fact(format!("safe({k})"));
    let joined = join_assumptions(&"A", deps, |k| {
        let mut v = vec![AssumptionInstance::horn(
            format!("{k}:base"),
            [],
            safe(k),
            100,
            "",
        )];
        let ds = deps(k);
        if !ds.is_empty() {
            v.push(AssumptionInstance::horn(
                format!("{k}:deps"),
                ds.iter().map(|d| safe(d)),
                safe(k),
                10,
                "",
            ));
        } else {
            v.push(AssumptionInstance::horn(
                format!("{k}:audit"),
                [],
                safe(k),
                5,
                "",
            ));
        }
        v
    })
    .unwrap();
    assert_eq!(
        joined
            .assumptions
            .iter()
            .filter(|a| a.id.starts_with("D:"))
            .count(),
        2
    );
    let q = TrustQuery::new(joined.assumptions, safe("A")).unwrap();
    // A:deps + B:deps + C:deps + D:audit
    assert_eq!(solve_horn(&q).unwrap().min_cost, Some(35));
    assert_eq!(common::oracle_min_cost(&q), Some(35));
}
