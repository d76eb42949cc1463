use switchcost::baselines::{PriorityOracle, RandomPermutation, SortedOrder};
use switchcost::multiset::{enumerate, for_each_combination};
use switchcost::oracle::{
    disperser_search, exact_feasible, exhaustive_max_switching, min_switching_cost, ramsey_witness, verify_exhaustive,
    AuditScope, SearchBudget, Verdict,
};
use switchcost::{AssignmentFn, DisperserFamily, ExplicitAssigner, RoundSchedule};

fn searched_levels(workers: u32, tasks: u64) -> Vec<DisperserFamily> {
    let domain = ExplicitAssigner::required_domain(workers, tasks);
    (1..=ExplicitAssigner::level_count(workers))
        .map(|level| {
            let k = ExplicitAssigner::level_entropy(workers, level);
            let (bins, seeds) = if k == 0 { (1, 1) } else { (1 << k, 8) };
            disperser_search(domain, seeds, bins, k, 0.25, &SearchBudget::default(), level as u64)
                .unwrap()
                .expect("a disperser exists at this size")
        })
        .collect()
}

#[test]
fn explicit_assigner_is_fully_assigning_on_every_small_input() {
    let levels = searched_levels(4, 4);
    assert_eq!(levels[0].domain(), 16);
    assert!(levels.iter().all(verify_exhaustive));
    let f = ExplicitAssigner::new(4, 4, levels, 4).unwrap();

    let mut inputs = 0;
    for size in 0..=4usize {
        for_each_combination(4, size, |ws| {
            for_each_combination(16, size, |ts| {
                let ws: Vec<u32> = ws.iter().map(|&w| w as u32).collect();
                let r = f.assign_set(&ws, ts).unwrap();
                assert_eq!(r.fallback_pairs, 0, "W={ws:?} T={ts:?}");
                assert_eq!(r.assignment.assigned_count(), size);
                inputs += 1;
                true
            });
            true
        });
    }
    assert_eq!(inputs, 4845);

    for size in 0..=4 {
        for t in enumerate(4, size, false) {
            let r = f.assign(&t).unwrap();
            assert!(r.assignment.realizes(&t));
            assert!(!r.used_fallback());
        }
    }
    let audit = exhaustive_max_switching(&f, AuditScope { sets_only: false, size_varying: true }).unwrap();
    assert_eq!(audit.fallback_states, 0);
    assert!(audit.max_cost <= f.structural_bound());
}

#[test]
fn every_assigner_is_at_least_the_optimum() {
    let budget = SearchBudget::default();
    let opt = min_switching_cost(3, 5, true, &budget).unwrap().value.unwrap();
    assert_eq!(opt, 3);
    let sets = AuditScope { sets_only: true, size_varying: false };
    let assigners: Vec<Box<dyn AssignmentFn>> = vec![
        Box::new(SortedOrder { workers: 3, universe: 5 }),
        Box::new(RandomPermutation { workers: 3, universe: 5, oracle: PriorityOracle { seed: 1 } }),
        Box::new(RoundSchedule::build(3, 5, 4, 1).unwrap()),
        Box::new(ExplicitAssigner::with_random_tables(3, 5, 4, 4, 1).unwrap()),
    ];
    for f in &assigners {
        let r = exhaustive_max_switching(f.as_ref(), sets).unwrap();
        assert!(r.max_cost >= opt, "{} reached {}", f.name(), r.max_cost);
    }
}

#[test]
fn optimal_costs_at_desk_scale() {
    let budget = SearchBudget::default();
    // (w, t, sets only, s_{w,t})
    for (w, t, sets, want) in [(1, 4, true, 1), (2, 3, true, 2), (2, 4, false, 2), (3, 4, true, 2), (3, 5, true, 3)] {
        let m = min_switching_cost(w, t, sets, &budget).unwrap();
        assert_eq!(m.value, Some(want), "w={w} t={t} sets={sets}");
    }
}

#[test]
fn exact_solutions_are_genuine() {
    let r = exact_feasible(3, 5, 3, true, &SearchBudget::default()).unwrap();
    let Verdict::Feasible(f) = r.verdict else { panic!("expected feasible") };
    assert_eq!(f.len(), 10);
    let sets = AuditScope { sets_only: true, size_varying: false };
    assert!(exhaustive_max_switching(&f, sets).unwrap().max_cost <= 3);
    // its coloring cannot dodge the Ramsey mechanism forever, but at t = 5
    // a witness is optional; whatever is returned must check out
    if let Some(w) = ramsey_witness(&f, 3, 5).unwrap() {
        assert_eq!(w.extreme_cost, 3);
    }
}
