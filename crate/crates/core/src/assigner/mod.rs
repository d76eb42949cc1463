//! Full assignment functions built by composing k-bin hash stages.
//!
//! [`RoundSchedule`] is the randomized multi-round balls-to-bins assigner;
//! [`ExplicitAssigner`] drives the same stage rule with bins taken from a
//! strong-disperser family. Both finish any residual the stages leave behind
//! with a rank-order fallback and report how many pairs it produced.

mod explicit;
mod schedule;

pub use explicit::{sweep, DisperserFamily, ExplicitAssigner, SeedStage};
pub use schedule::{Round, RoundSchedule};
pub(crate) use schedule::check_multiset;

use crate::assignment::Assignment;
use crate::binhash::PartialAssignment;
use crate::error::Result;
use crate::multiset::TaskMultiset;
use crate::{TaskId, WorkerId};

/// Default repetition constant `c`.
pub const DEFAULT_REPETITIONS: u32 = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssignResult {
    pub assignment: Assignment,
    /// Pairs produced by the fallback rather than by a stage.
    pub fallback_pairs: usize,
    /// Matched-pair count of every stage, in order. Empty for assigners
    /// that are not stage-based.
    pub per_round_matches: Vec<usize>,
}

impl AssignResult {
    pub fn used_fallback(&self) -> bool {
        self.fallback_pairs > 0
    }
}

/// A memoryless worker-task assignment function over `workers` workers and
/// tasks `[universe]`.
pub trait AssignmentFn {
    fn workers(&self) -> u32;
    fn universe(&self) -> u64;
    fn name(&self) -> &'static str;
    /// Assigns workers `1..=|T|` to `tasks`, leaving the rest idle.
    fn assign(&self, tasks: &TaskMultiset) -> Result<AssignResult>;
}

impl<A: AssignmentFn + ?Sized> AssignmentFn for &A {
    fn workers(&self) -> u32 {
        (**self).workers()
    }
    fn universe(&self) -> u64 {
        (**self).universe()
    }
    fn name(&self) -> &'static str {
        (**self).name()
    }
    fn assign(&self, tasks: &TaskMultiset) -> Result<AssignResult> {
        (**self).assign(tasks)
    }
}

/// Pairs leftover workers and tasks by rank: the i-th smallest residual
/// worker gets the i-th smallest residual task. Inputs must be sorted and
/// of equal length.
pub fn rank_order_fallback(workers: &[WorkerId], tasks: &[TaskId]) -> Vec<(WorkerId, TaskId)> {
    debug_assert_eq!(workers.len(), tasks.len());
    workers.iter().copied().zip(tasks.iter().copied()).collect()
}

/// Per-stage symmetric difference between two stage logs of equal length.
pub fn stage_costs(a: &[PartialAssignment], b: &[PartialAssignment]) -> Vec<usize> {
    a.iter().zip(b).map(|(x, y)| x.symmetric_difference(y)).collect()
}
