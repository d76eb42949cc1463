use std::fmt;

use crate::error::{Error, Result};
use crate::multiset::TaskMultiset;
use crate::{TaskId, WorkerId};

/// A map from workers `1..=workers` to tasks. Unmapped workers are idle.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    slots: Vec<Option<TaskId>>,
}

impl Assignment {
    /// All `workers` workers idle.
    pub fn new(workers: u32) -> Self {
        Assignment {
            slots: vec![None; workers as usize],
        }
    }

    /// Each worker may appear at most once.
    pub fn from_pairs<I>(workers: u32, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (WorkerId, TaskId)>,
    {
        let mut a = Assignment::new(workers);
        for (worker, task) in pairs {
            let slot = a.slot_mut(worker)?;
            if slot.is_some() {
                return Err(Error::InvalidParameter(format!(
                    "worker {worker} assigned twice"
                )));
            }
            *slot = Some(task);
        }
        Ok(a)
    }

    fn slot_mut(&mut self, worker: WorkerId) -> Result<&mut Option<TaskId>> {
        let workers = self.slots.len() as u32;
        if worker == 0 || worker > workers {
            return Err(Error::WorkerOutOfRange { worker, workers });
        }
        Ok(&mut self.slots[worker as usize - 1])
    }

    pub fn workers(&self) -> u32 {
        self.slots.len() as u32
    }

    pub fn get(&self, worker: WorkerId) -> Option<TaskId> {
        if worker == 0 {
            return None;
        }
        self.slots.get(worker as usize - 1).copied().flatten()
    }

    pub fn set(&mut self, worker: WorkerId, task: TaskId) -> Result<()> {
        *self.slot_mut(worker)? = Some(task);
        Ok(())
    }

    /// `(worker, task)` for every busy worker, by worker id.
    pub fn pairs(&self) -> impl Iterator<Item = (WorkerId, TaskId)> + '_ {
        self.slots
            .iter()
            .enumerate()
            .filter_map(|(i, s)| s.map(|t| (i as WorkerId + 1, t)))
    }

    pub fn assigned_count(&self) -> usize {
        self.slots.iter().filter(|s| s.is_some()).count()
    }

    /// The multiset of assigned tasks.
    pub fn task_multiset(&self, universe: u64) -> Result<TaskMultiset> {
        TaskMultiset::from_tasks(universe, self.pairs().map(|(_, t)| t))
    }

    /// Checks the contract of an assignment function's output on `tasks`:
    /// workers `1..=|T|` are busy, the rest idle, and each task is covered
    /// exactly as many times as its multiplicity.
    pub fn realizes(&self, tasks: &TaskMultiset) -> bool {
        let size = tasks.len();
        if size > self.slots.len() {
            return false;
        }
        let prefix_busy = self.slots[..size].iter().all(Option::is_some)
            && self.slots[size..].iter().all(Option::is_none);
        prefix_busy
            && self
                .task_multiset(tasks.universe())
                .map(|m| m == *tasks)
                .unwrap_or(false)
    }

    /// Task of each worker, in worker order; idle workers are skipped.
    pub fn coords(&self) -> Vec<TaskId> {
        self.slots.iter().flatten().copied().collect()
    }
}

/// Number of workers whose task differs between `a` and `b`. A worker that
/// is busy in one and idle in the other counts as changed.
pub fn switching_cost(a: &Assignment, b: &Assignment) -> usize {
    let n = a.slots.len().max(b.slots.len());
    (0..n)
        .filter(|&i| a.slots.get(i).copied().flatten() != b.slots.get(i).copied().flatten())
        .count()
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, slot) in self.slots.iter().enumerate() {
            match slot {
                Some(t) => writeln!(f, "worker {} -> task {}", i + 1, t)?,
                None => writeln!(f, "worker {} -> unassigned", i + 1)?,
            }
        }
        Ok(())
    }
}
