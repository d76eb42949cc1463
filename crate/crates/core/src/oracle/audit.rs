use std::collections::HashMap;

use crate::assigner::AssignmentFn;
use crate::assignment::{switching_cost, Assignment};
use crate::error::{Error, Result};
use crate::multiset::{enumerate, TaskMultiset};
use crate::oracle::state_count;
use crate::TaskId;

/// Largest number of states the audit will enumerate.
pub const MAX_AUDIT_STATES: u64 = 200_000;

/// Which adjacent pairs the audit ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AuditScope {
    /// Only repeat-free task sets.
    pub sets_only: bool,
    /// Every size `0..=w` with insert/remove adjacency, instead of size
    /// `w` only.
    pub size_varying: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditReport {
    pub max_cost: usize,
    /// A pair reaching `max_cost`, if any pair exists.
    pub argmax: Option<(TaskMultiset, TaskMultiset)>,
    pub pairs_checked: u64,
    pub states: usize,
    /// States on which the assigner needed its fallback.
    pub fallback_states: usize,
}

/// Exact maximum switching cost of `f` over every adjacent pair in scope.
pub fn exhaustive_max_switching<A: AssignmentFn + ?Sized>(f: &A, scope: AuditScope) -> Result<AuditReport> {
    let w = f.workers();
    let t = f.universe();
    let sizes: Vec<usize> = if scope.size_varying {
        (0..=w as usize).collect()
    } else {
        vec![w as usize]
    };
    let total: u64 = sizes
        .iter()
        .map(|&s| state_count(t, s as u64, scope.sets_only))
        .fold(0u64, u64::saturating_add);
    if total > MAX_AUDIT_STATES {
        return Err(Error::InvalidParameter(format!(
            "audit needs {total} states; at most {MAX_AUDIT_STATES} are enumerated"
        )));
    }

    let mut states = Vec::new();
    for &s in &sizes {
        states.extend(enumerate(t, s, scope.sets_only));
    }
    let index: HashMap<Vec<TaskId>, usize> = states.iter().enumerate().map(|(i, s)| (s.to_vec(), i)).collect();
    let mut assignments: Vec<Assignment> = Vec::with_capacity(states.len());
    let mut fallback_states = 0;
    for s in &states {
        let r = f.assign(s)?;
        fallback_states += usize::from(r.used_fallback());
        assignments.push(r.assignment);
    }

    let mut report = AuditReport {
        max_cost: 0,
        argmax: None,
        pairs_checked: 0,
        states: states.len(),
        fallback_states,
    };
    let visit = |i: usize, j: usize, report: &mut AuditReport| {
        report.pairs_checked += 1;
        let c = switching_cost(&assignments[i], &assignments[j]);
        if report.argmax.is_none() || c > report.max_cost {
            report.max_cost = c;
            report.argmax = Some((states[i].clone(), states[j].clone()));
        }
    };

    for (i, s) in states.iter().enumerate() {
        // swaps, each unordered pair once
        for &(x, _) in s.entries() {
            for y in 1..=t {
                if y == x || (scope.sets_only && s.multiplicity(y) > 0) {
                    continue;
                }
                let mut next = s.clone();
                next.remove(x);
                next.insert(y).expect("y lies in the universe");
                if let Some(&j) = index.get(&next.to_vec()) {
                    if i < j {
                        visit(i, j, &mut report);
                    }
                }
            }
        }
        // inserts, so each size-changing pair is seen from its smaller side
        if scope.size_varying && s.len() < w as usize {
            for y in 1..=t {
                if scope.sets_only && s.multiplicity(y) > 0 {
                    continue;
                }
                let mut next = s.clone();
                next.insert(y).expect("y lies in the universe");
                if let Some(&j) = index.get(&next.to_vec()) {
                    visit(i, j, &mut report);
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baselines::SortedOrder;
    use crate::RoundSchedule;

    #[test]
    fn sorted_order_small() {
        let r = exhaustive_max_switching(
            &SortedOrder {
                workers: 2,
                universe: 3,
            },
            AuditScope::default(),
        )
        .unwrap();
        assert_eq!(r.states, 6);
        assert!(r.max_cost <= 2);
        let (a, b) = r.argmax.unwrap();
        assert!(a.is_adjacent(&b));
    }

    #[test]
    fn sorted_order_reaches_min_t_minus_one_w() {
        // {1,2,3} -> {2,3,4}-style shifts force every worker to move
        for (w, t) in [(2, 3), (3, 4), (3, 6), (4, 3)] {
            let r = exhaustive_max_switching(&SortedOrder { workers: w, universe: t }, AuditScope::default()).unwrap();
            assert_eq!(r.max_cost as u64, (t - 1).min(w as u64), "w={w} t={t}");
        }
    }

    #[test]
    fn single_task_universe_has_no_pairs() {
        let r = exhaustive_max_switching(&SortedOrder { workers: 3, universe: 1 }, AuditScope::default()).unwrap();
        assert_eq!(r.pairs_checked, 0);
        assert_eq!(r.max_cost, 0);
        assert_eq!(r.argmax, None);
    }

    #[test]
    fn pair_counts() {
        // Johnson graph J(5,2): 10 vertices of degree 6
        let f = SortedOrder { workers: 2, universe: 5 };
        let sets = AuditScope {
            sets_only: true,
            size_varying: false,
        };
        assert_eq!(exhaustive_max_switching(&f, sets).unwrap().pairs_checked, 30);
        // size-varying sets over [3] with w = 2: 1 + 3 + 3 states,
        // 3 swap pairs among the 2-sets, 3 + 6 insert pairs
        let f = SortedOrder { workers: 2, universe: 3 };
        let vary = AuditScope {
            sets_only: true,
            size_varying: true,
        };
        let r = exhaustive_max_switching(&f, vary).unwrap();
        assert_eq!(r.states, 7);
        assert_eq!(r.pairs_checked, 3 + 3 + 3 + 6);
    }

    #[test]
    fn multi_round_within_structural_bound() {
        let s = RoundSchedule::build(3, 4, 4, 11).unwrap();
        let r = exhaustive_max_switching(&s, AuditScope::default()).unwrap();
        assert_eq!(r.states, 20);
        assert_eq!(r.fallback_states, 0);
        assert!(r.max_cost <= s.structural_bound());
        assert!(r.max_cost <= 3);
    }

    #[test]
    fn refuses_huge_instances() {
        let f = SortedOrder {
            workers: 8,
            universe: 64,
        };
        assert!(exhaustive_max_switching(&f, AuditScope::default()).is_err());
    }
}
