//! Multisets over `[t]` become sets over `[n]`, `n = w * t`.
//!
//! The `x`-th copy of task `i` is the lifted task `(i, x)`, encoded as
//! `(i - 1) * w + x`. Copies of one task are contiguous, and the encoding
//! preserves the lexicographic order of `(base, copy)`. Two adjacent
//! multisets lift to two adjacent sets, so any set-assignment function can
//! serve multisets without raising its switching cost: run it on the lifted
//! set and forget the copy index.

use crate::assignment::Assignment;
use crate::error::{Error, Result};
use crate::multiset::TaskMultiset;
use crate::TaskId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LiftedTaskId {
    pub base: TaskId,
    /// 1-based copy index, at most `w`.
    pub copy: u32,
}

impl LiftedTaskId {
    pub fn encode(self, workers: u32) -> TaskId {
        (self.base - 1) * workers as u64 + self.copy as u64
    }

    pub fn decode(encoded: TaskId, workers: u32) -> Self {
        let w = workers as u64;
        LiftedTaskId {
            base: (encoded - 1) / w + 1,
            copy: ((encoded - 1) % w + 1) as u32,
        }
    }
}

/// Size of the lifted universe.
pub fn lifted_universe(workers: u32, tasks: u64) -> u64 {
    workers as u64 * tasks
}

/// The sorted encoded set `{(i, 1), ..., (i, m_T(i))}` over all tasks `i`.
pub fn lift(tasks: &TaskMultiset, workers: u32) -> Result<Vec<TaskId>> {
    let mut out = Vec::with_capacity(tasks.len());
    for &(base, m) in tasks.entries() {
        if m > workers {
            return Err(Error::MultiplicityTooLarge {
                task: base,
                multiplicity: m,
                workers,
            });
        }
        out.extend((1..=m).map(|copy| LiftedTaskId { base, copy }.encode(workers)));
    }
    Ok(out)
}

/// Projects an assignment onto lifted ids back to the multiset. `lifted`
/// must cover every element of `lift(tasks)` exactly once.
pub fn project(lifted: &Assignment, tasks: &TaskMultiset, workers: u32) -> Result<Assignment> {
    let expected = lift(tasks, workers)?;
    let mut got: Vec<TaskId> = lifted.pairs().map(|(_, t)| t).collect();
    got.sort_unstable();
    if got != expected {
        return Err(Error::NotABijection);
    }
    Assignment::from_pairs(
        lifted.workers(),
        lifted
            .pairs()
            .map(|(worker, t)| (worker, LiftedTaskId::decode(t, workers).base)),
    )
}
