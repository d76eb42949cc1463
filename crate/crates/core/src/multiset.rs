//! Task multisets over a universe `[t] = {1, ..., t}`.
//!
//! A multiset is stored as sorted `(task, multiplicity)` runs. That keeps the
//! algebra linear in the number of distinct tasks and gives every multiset a
//! single canonical text form.

use std::cmp::Ordering;
use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::TaskId;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TaskMultiset {
    universe: u64,
    // strictly increasing task ids, multiplicities >= 1
    entries: Vec<(TaskId, u32)>,
}

impl TaskMultiset {
    /// The empty multiset over `[universe]`.
    pub fn empty(universe: u64) -> Self {
        TaskMultiset {
            universe,
            entries: Vec::new(),
        }
    }

    /// Builds a multiset from task ids in any order. Every id must lie in
    /// `[1, universe]`.
    pub fn from_tasks<I>(universe: u64, tasks: I) -> Result<Self>
    where
        I: IntoIterator<Item = TaskId>,
    {
        let mut tasks: Vec<TaskId> = tasks.into_iter().collect();
        tasks.sort_unstable();
        let mut entries: Vec<(TaskId, u32)> = Vec::new();
        for task in tasks {
            if task == 0 || task > universe {
                return Err(Error::TaskOutOfRange { task, universe });
            }
            match entries.last_mut() {
                Some((last, m)) if *last == task => *m += 1,
                _ => entries.push((task, 1)),
            }
        }
        Ok(TaskMultiset { universe, entries })
    }

    /// Builds a multiset from `(task, multiplicity)` pairs. Zero
    /// multiplicities are dropped; repeated tasks accumulate.
    pub fn from_counts<I>(universe: u64, counts: I) -> Result<Self>
    where
        I: IntoIterator<Item = (TaskId, u32)>,
    {
        let mut counts: Vec<(TaskId, u32)> = counts.into_iter().filter(|&(_, m)| m > 0).collect();
        counts.sort_unstable();
        let mut entries: Vec<(TaskId, u32)> = Vec::with_capacity(counts.len());
        for (task, m) in counts {
            if task == 0 || task > universe {
                return Err(Error::TaskOutOfRange { task, universe });
            }
            match entries.last_mut() {
                Some((last, acc)) if *last == task => *acc += m,
                _ => entries.push((task, m)),
            }
        }
        Ok(TaskMultiset { universe, entries })
    }

    /// Parses the comma-separated text form, e.g. `"1,2,2,5"`. The empty
    /// string is the empty multiset. Ids must be non-decreasing.
    pub fn parse(universe: u64, text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(TaskMultiset::empty(universe));
        }
        let mut tasks = Vec::new();
        for field in text.split(',') {
            let field = field.trim();
            let task: TaskId = field
                .parse()
                .map_err(|_| Error::Parse(format!("bad task id {field:?}")))?;
            if let Some(&prev) = tasks.last() {
                if task < prev {
                    return Err(Error::Parse(format!(
                        "task ids must be non-decreasing ({prev} then {task})"
                    )));
                }
            }
            tasks.push(task);
        }
        TaskMultiset::from_tasks(universe, tasks)
    }

    pub fn universe(&self) -> u64 {
        self.universe
    }

    /// Total size, counting multiplicity.
    pub fn len(&self) -> usize {
        self.entries.iter().map(|&(_, m)| m as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sorted `(task, multiplicity)` runs.
    pub fn entries(&self) -> &[(TaskId, u32)] {
        &self.entries
    }

    pub fn multiplicity(&self, task: TaskId) -> u32 {
        match self.entries.binary_search_by_key(&task, |&(t, _)| t) {
            Ok(i) => self.entries[i].1,
            Err(_) => 0,
        }
    }

    pub fn max_multiplicity(&self) -> u32 {
        self.entries.iter().map(|&(_, m)| m).max().unwrap_or(0)
    }

    /// All elements in non-decreasing order, repeated by multiplicity.
    pub fn iter(&self) -> impl Iterator<Item = TaskId> + '_ {
        self.entries
            .iter()
            .flat_map(|&(t, m)| std::iter::repeat(t).take(m as usize))
    }

    pub fn to_vec(&self) -> Vec<TaskId> {
        self.iter().collect()
    }

    /// True when every element has multiplicity one.
    pub fn is_set(&self) -> bool {
        self.entries.iter().all(|&(_, m)| m == 1)
    }

    pub fn insert(&mut self, task: TaskId) -> Result<()> {
        if task == 0 || task > self.universe {
            return Err(Error::TaskOutOfRange {
                task,
                universe: self.universe,
            });
        }
        match self.entries.binary_search_by_key(&task, |&(t, _)| t) {
            Ok(i) => self.entries[i].1 += 1,
            Err(i) => self.entries.insert(i, (task, 1)),
        }
        Ok(())
    }

    /// Removes one copy of `task`; returns false if it was absent.
    pub fn remove(&mut self, task: TaskId) -> bool {
        match self.entries.binary_search_by_key(&task, |&(t, _)| t) {
            Ok(i) => {
                self.entries[i].1 -= 1;
                if self.entries[i].1 == 0 {
                    self.entries.remove(i);
                }
                true
            }
            Err(_) => false,
        }
    }

    /// Merges the runs of two multisets, combining multiplicities with `f`.
    fn merge_with(&self, other: &Self, f: impl Fn(u32, u32) -> u32) -> Self {
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.entries, &other.entries);
        while i < a.len() || j < b.len() {
            let (task, ma, mb) = match (a.get(i), b.get(j)) {
                (Some(&(ta, ma)), Some(&(tb, mb))) => match ta.cmp(&tb) {
                    Ordering::Less => {
                        i += 1;
                        (ta, ma, 0)
                    }
                    Ordering::Greater => {
                        j += 1;
                        (tb, 0, mb)
                    }
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                        (ta, ma, mb)
                    }
                },
                (Some(&(ta, ma)), None) => {
                    i += 1;
                    (ta, ma, 0)
                }
                (None, Some(&(tb, mb))) => {
                    j += 1;
                    (tb, 0, mb)
                }
                (None, None) => unreachable!(),
            };
            let m = f(ma, mb);
            if m > 0 {
                out.push((task, m));
            }
        }
        TaskMultiset {
            universe: self.universe.max(other.universe),
            entries: out,
        }
    }

    /// `m(i) = max(0, m_A(i) - m_B(i))`
    pub fn difference(&self, other: &Self) -> Self {
        self.merge_with(other, |a, b| a.saturating_sub(b))
    }

    /// `m(i) = max(m_A(i), m_B(i))`
    pub fn union(&self, other: &Self) -> Self {
        self.merge_with(other, u32::max)
    }

    /// `m(i) = min(m_A(i), m_B(i))`
    pub fn intersection(&self, other: &Self) -> Self {
        self.merge_with(other, u32::min)
    }

    /// Adjacency, including the size-varying case: equal sizes with one
    /// element swapped, or sizes differing by one with a single-element
    /// symmetric difference.
    pub fn is_adjacent(&self, other: &Self) -> bool {
        let ab = self.difference(other).len();
        let ba = other.difference(self).len();
        (ab == 1 && ba == 1) || (ab + ba == 1)
    }

    /// One step of a random walk on adjacent multisets.
    ///
    /// The default move removes one element (uniform over the multiset,
    /// so weighted by multiplicity) and inserts a uniform task id different
    /// from the removed one. With `size_varying`, pure insertions (when
    /// `|T| < workers`) and pure removals (when `|T| > 0`) are also offered,
    /// each move kind equally likely.
    pub fn adjacent_step<R: Rng + ?Sized>(&self, rng: &mut R, opts: &StepOptions) -> Result<Self> {
        let size = self.len();
        let can_swap = size >= 1 && self.universe >= 2;
        let can_insert = opts.size_varying && size < opts.workers as usize && self.universe >= 1;
        let can_remove = opts.size_varying && size >= 1;
        let mut kinds = Vec::with_capacity(3);
        if can_swap {
            kinds.push(Move::Swap);
        }
        if can_insert {
            kinds.push(Move::Insert);
        }
        if can_remove {
            kinds.push(Move::Remove);
        }
        if kinds.is_empty() {
            return Err(Error::NoAdjacentMove(if size == 0 {
                "empty multiset and insertion disabled"
            } else {
                "universe has a single task"
            }));
        }
        let mut next = self.clone();
        match kinds[rng.gen_range(0..kinds.len())] {
            Move::Swap => {
                let removed = self.nth(rng.gen_range(0..size));
                next.remove(removed);
                // uniform over [t] \ {removed}
                let mut added = rng.gen_range(1..self.universe);
                if added >= removed {
                    added += 1;
                }
                next.insert(added)?;
            }
            Move::Insert => next.insert(rng.gen_range(1..=self.universe))?,
            Move::Remove => {
                let removed = self.nth(rng.gen_range(0..size));
                next.remove(removed);
            }
        }
        Ok(next)
    }

    // index counts multiplicity
    fn nth(&self, mut index: usize) -> TaskId {
        for &(t, m) in &self.entries {
            if index < m as usize {
                return t;
            }
            index -= m as usize;
        }
        panic!("index out of range");
    }
}

#[derive(Clone, Copy)]
enum Move {
    Swap,
    Insert,
    Remove,
}

/// Knobs for [`TaskMultiset::adjacent_step`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepOptions {
    /// Upper bound on the multiset size (the worker count).
    pub workers: u32,
    pub size_varying: bool,
}

impl fmt::Display for TaskMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for task in self.iter() {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{task}")?;
            first = false;
        }
        Ok(())
    }
}

/// Every multiset of exactly `size` elements over `[universe]`, in
/// lexicographic order of the sorted element sequence. With `sets_only`,
/// only multisets without repeats.
pub fn enumerate(universe: u64, size: usize, sets_only: bool) -> Vec<TaskMultiset> {
    let mut out = Vec::new();
    let mut cur: Vec<TaskId> = Vec::with_capacity(size);
    fn rec(
        universe: u64,
        size: usize,
        sets_only: bool,
        cur: &mut Vec<TaskId>,
        out: &mut Vec<TaskMultiset>,
    ) {
        if cur.len() == size {
            out.push(TaskMultiset::from_tasks(universe, cur.iter().copied()).unwrap());
            return;
        }
        let start = match cur.last() {
            Some(&l) if sets_only => l + 1,
            Some(&l) => l,
            None => 1,
        };
        for task in start..=universe {
            cur.push(task);
            rec(universe, size, sets_only, cur, out);
            cur.pop();
        }
    }
    rec(universe, size, sets_only, &mut cur, &mut out);
    out
}

/// Visits every `size`-subset of `[1, domain]` in lexicographic order until
/// `visit` returns false.
pub fn for_each_combination(domain: u64, size: usize, mut visit: impl FnMut(&[u64]) -> bool) {
    if size as u64 > domain {
        return;
    }
    let mut cur: Vec<u64> = (1..=size as u64).collect();
    loop {
        if !visit(&cur) {
            return;
        }
        // advance to the next combination
        let mut i = size;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if cur[i] < domain - (size - 1 - i) as u64 {
                break;
            }
            if i == 0 {
                return;
            }
        }
        cur[i] += 1;
        for j in i + 1..size {
            cur[j] = cur[j - 1] + 1;
        }
    }
}
