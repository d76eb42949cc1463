//! Reference assignment functions: sorted order and the greedy
//! random-permutation rule.

use crate::assigner::{AssignResult, AssignmentFn};
use crate::assignment::Assignment;
use crate::error::Result;
use crate::mix::mix;
use crate::multiset::TaskMultiset;
use crate::reduction::{lift, project};
use crate::{TaskId, WorkerId};

/// Worker `i` takes the `i`-th smallest element of `T`.
pub fn sorted_order(tasks: &TaskMultiset, workers: u32) -> Result<Assignment> {
    crate::assigner::check_multiset(tasks, workers, tasks.universe())?;
    Assignment::from_pairs(workers, tasks.iter().enumerate().map(|(i, t)| (i as WorkerId + 1, t)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SortedOrder {
    pub workers: u32,
    pub universe: u64,
}

impl AssignmentFn for SortedOrder {
    fn workers(&self) -> u32 {
        self.workers
    }
    fn universe(&self) -> u64 {
        self.universe
    }
    fn name(&self) -> &'static str {
        "sorted"
    }
    fn assign(&self, tasks: &TaskMultiset) -> Result<AssignResult> {
        crate::assigner::check_multiset(tasks, self.workers, self.universe)?;
        Ok(AssignResult {
            assignment: sorted_order(tasks, self.workers)?,
            fallback_pairs: 0,
            per_round_matches: Vec::new(),
        })
    }
}

/// Per-worker preference orders: lower key is more preferred, ties go to
/// the smaller task.
pub trait Preferences {
    fn priority(&self, worker: WorkerId, task: TaskId) -> u64;
}

/// Keyed pseudorandom priorities standing in for a random permutation per
/// worker.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PriorityOracle {
    pub seed: u64,
}

impl Preferences for PriorityOracle {
    fn priority(&self, worker: WorkerId, task: TaskId) -> u64 {
        mix(self.seed, &[worker as u64, task])
    }
}

/// Greedy by worker id over a task set: worker `i` takes its favourite
/// among the tasks nobody has taken yet. Returns the task of each worker
/// `1..=|tasks|`.
pub fn random_permutation_set<P: Preferences + ?Sized>(prefs: &P, tasks: &[TaskId]) -> Vec<TaskId> {
    let mut remaining = tasks.to_vec();
    let mut chosen = Vec::with_capacity(tasks.len());
    for worker in 1..=tasks.len() as WorkerId {
        let (idx, _) = remaining
            .iter()
            .enumerate()
            .min_by_key(|&(_, &t)| (prefs.priority(worker, t), t))
            .expect("one task per worker");
        chosen.push(remaining.swap_remove(idx));
    }
    chosen
}

/// The remainder sets `A_0 = T, A_1, ..., A_|T|` of the greedy loop, each
/// sorted: `A_i` is what is left after workers `1..=i` chose.
pub fn random_permutation_remainders<P: Preferences + ?Sized>(prefs: &P, tasks: &[TaskId]) -> Vec<Vec<TaskId>> {
    let chosen = random_permutation_set(prefs, tasks);
    let mut cur: Vec<TaskId> = tasks.to_vec();
    cur.sort_unstable();
    let mut out = vec![cur.clone()];
    for t in chosen {
        let pos = cur.binary_search(&t).expect("chosen task is present");
        cur.remove(pos);
        out.push(cur.clone());
    }
    out
}

/// The random-permutation rule on multisets, run on the lifted set.
pub fn random_permutation_assign<P: Preferences + ?Sized>(
    prefs: &P,
    tasks: &TaskMultiset,
    workers: u32,
) -> Result<Assignment> {
    crate::assigner::check_multiset(tasks, workers, tasks.universe())?;
    let lifted = lift(tasks, workers)?;
    let chosen = random_permutation_set(prefs, &lifted);
    let a = Assignment::from_pairs(
        workers,
        chosen.into_iter().enumerate().map(|(i, t)| (i as WorkerId + 1, t)),
    )?;
    project(&a, tasks, workers)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomPermutation {
    pub workers: u32,
    pub universe: u64,
    pub oracle: PriorityOracle,
}

impl AssignmentFn for RandomPermutation {
    fn workers(&self) -> u32 {
        self.workers
    }
    fn universe(&self) -> u64 {
        self.universe
    }
    fn name(&self) -> &'static str {
        "randperm"
    }
    fn assign(&self, tasks: &TaskMultiset) -> Result<AssignResult> {
        crate::assigner::check_multiset(tasks, self.workers, self.universe)?;
        Ok(AssignResult {
            assignment: random_permutation_assign(&self.oracle, tasks, self.workers)?,
            fallback_pairs: 0,
            per_round_matches: Vec::new(),
        })
    }
}

/// `Σ_{i=1}^{w} 2 / (w - i + 1)`, the expected-cost bound for the
/// random-permutation rule on adjacent sets.
pub fn random_permutation_expected_bound(workers: u32) -> f64 {
    (1..=workers).map(|i| 2.0 / (workers - i + 1) as f64).sum()
}
