//! Partial-assignment stages built on the k-bin hash.
//!
//! A stage hashes every remaining worker and every remaining task into one
//! of `k` bins. Each bin holding at least one worker and one task matches
//! its smallest worker with its smallest task; everything else passes
//! through to the residual. Stages are fixed functions, so nearby inputs get
//! nearby outputs: adding or removing a single worker or task changes at most
//! two matched pairs and at most one residual element.

use crate::mix::mix;
use crate::{TaskId, WorkerId};

const WORKER_TAG: u64 = 0x5752_4b52; // "WRKR"
const TASK_TAG: u64 = 0x5441_534b; // "TASK"

/// The unmatched workers and tasks handed to a stage. Both sides are sorted
/// and duplicate-free; their sizes may differ.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct WorkerTaskInput {
    pub workers: Vec<WorkerId>,
    pub tasks: Vec<TaskId>,
}

impl WorkerTaskInput {
    pub fn new<W, T>(workers: W, tasks: T) -> Self
    where
        W: IntoIterator<Item = WorkerId>,
        T: IntoIterator<Item = TaskId>,
    {
        let mut workers: Vec<WorkerId> = workers.into_iter().collect();
        let mut tasks: Vec<TaskId> = tasks.into_iter().collect();
        workers.sort_unstable();
        workers.dedup();
        tasks.sort_unstable();
        tasks.dedup();
        WorkerTaskInput { workers, tasks }
    }

    pub fn is_empty(&self) -> bool {
        self.workers.is_empty() && self.tasks.is_empty()
    }
}

/// A matching between some workers and some tasks, sorted by worker.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct PartialAssignment {
    pub pairs: Vec<(WorkerId, TaskId)>,
}

impl PartialAssignment {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Number of pairs present in exactly one of the two matchings.
    pub fn symmetric_difference(&self, other: &Self) -> usize {
        sorted_symmetric_difference(&self.pairs, &other.pairs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageOutcome {
    pub matched: PartialAssignment,
    pub residual: WorkerTaskInput,
    pub active_bins: usize,
}

/// Where a stage puts each worker and each task. Bins are `0..bins()`.
pub trait Binning {
    fn bins(&self) -> u32;
    fn worker_bin(&self, worker: WorkerId) -> u32;
    fn task_bin(&self, task: TaskId) -> u32;
}

impl<B: Binning + ?Sized> Binning for &B {
    fn bins(&self) -> u32 {
        (**self).bins()
    }
    fn worker_bin(&self, worker: WorkerId) -> u32 {
        (**self).worker_bin(worker)
    }
    fn task_bin(&self, task: TaskId) -> u32 {
        (**self).task_bin(task)
    }
}

/// Seeded k-bin hash: `h1(worker)` and `h2(task)` are a fixed mixing
/// function of the seed, a domain tag and the element, reduced mod `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BinHash {
    k: u32,
    seed: u64,
}

impl BinHash {
    pub fn new(k: u32, seed: u64) -> Self {
        assert!(k >= 1, "a k-bin hash needs at least one bin");
        BinHash { k, seed }
    }

    /// The hash used for repetition `rep` of outer round `round`.
    pub fn for_round(master_seed: u64, round: u32, rep: u32, k: u32) -> Self {
        BinHash::new(k, mix(master_seed, &[round as u64, rep as u64]))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

impl Binning for BinHash {
    fn bins(&self) -> u32 {
        self.k
    }
    #[inline]
    fn worker_bin(&self, worker: WorkerId) -> u32 {
        (mix(self.seed, &[WORKER_TAG, worker as u64]) % self.k as u64) as u32
    }
    #[inline]
    fn task_bin(&self, task: TaskId) -> u32 {
        (mix(self.seed, &[TASK_TAG, task]) % self.k as u64) as u32
    }
}

/// Bins given by explicit tables: `worker_bins[i]` is the bin of worker
/// `i + 1`, `task_bins[i]` the bin of task `i + 1`. Looking up an id past
/// the end of a table panics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableBins {
    k: u32,
    worker_bins: Vec<u32>,
    task_bins: Vec<u32>,
}

impl TableBins {
    pub fn new(k: u32, worker_bins: Vec<u32>, task_bins: Vec<u32>) -> Self {
        assert!(
            worker_bins.iter().chain(&task_bins).all(|&b| b < k),
            "bin out of range"
        );
        TableBins {
            k,
            worker_bins,
            task_bins,
        }
    }
}

impl Binning for TableBins {
    fn bins(&self) -> u32 {
        self.k
    }
    fn worker_bin(&self, worker: WorkerId) -> u32 {
        self.worker_bins[worker as usize - 1]
    }
    fn task_bin(&self, task: TaskId) -> u32 {
        self.task_bins[task as usize - 1]
    }
}

/// Runs one stage on `input`.
pub fn apply<B: Binning + ?Sized>(bins: &B, input: &WorkerTaskInput) -> StageOutcome {
    let mut residual = input.clone();
    let mut matched = Vec::new();
    let mut scratch = Scratch::default();
    scratch.run(bins, &mut residual.workers, &mut residual.tasks, &mut matched);
    StageOutcome {
        active_bins: matched.len(),
        matched: PartialAssignment { pairs: matched },
        residual,
    }
}

/// `|W1 \ W2| + |W2 \ W1| + |T1 \ T2| + |T2 \ T1|`
pub fn difference_score(a: &WorkerTaskInput, b: &WorkerTaskInput) -> usize {
    sorted_symmetric_difference(&a.workers, &b.workers) + sorted_symmetric_difference(&a.tasks, &b.tasks)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Composition {
    pub matched: PartialAssignment,
    pub residual: WorkerTaskInput,
    pub trace: Vec<StageOutcome>,
}

/// Applies `stages` in order, feeding each residual into the next stage.
pub fn compose<B: Binning>(stages: &[B], input: &WorkerTaskInput) -> Composition {
    let mut current = input.clone();
    let mut trace = Vec::with_capacity(stages.len());
    let mut all = Vec::new();
    for stage in stages {
        let outcome = apply(stage, &current);
        all.extend_from_slice(&outcome.matched.pairs);
        current = outcome.residual.clone();
        trace.push(outcome);
    }
    all.sort_unstable();
    Composition {
        matched: PartialAssignment { pairs: all },
        residual: current,
        trace,
    }
}

/// Reusable buffers for running many stages without reallocating.
#[derive(Debug, Default)]
pub(crate) struct Scratch {
    min_worker: Vec<WorkerId>,
    min_task: Vec<TaskId>,
    worker_bins: Vec<u32>,
    task_bins: Vec<u32>,
}

impl Scratch {
    /// Matches in place: removes matched elements from `workers`/`tasks`
    /// (both sorted) and appends the pairs to `out` in worker order.
    /// Returns the number of pairs.
    pub(crate) fn run<B: Binning + ?Sized>(
        &mut self,
        bins: &B,
        workers: &mut Vec<WorkerId>,
        tasks: &mut Vec<TaskId>,
        out: &mut Vec<(WorkerId, TaskId)>,
    ) -> usize {
        if workers.is_empty() || tasks.is_empty() {
            return 0;
        }
        let k = bins.bins() as usize;
        if self.min_worker.len() < k {
            self.min_worker.resize(k, 0);
            self.min_task.resize(k, 0);
        }
        // ids start at 1, so 0 marks an empty slot
        self.worker_bins.clear();
        for &w in workers.iter() {
            let b = bins.worker_bin(w);
            self.worker_bins.push(b);
            let slot = &mut self.min_worker[b as usize];
            if *slot == 0 {
                *slot = w;
            }
        }
        self.task_bins.clear();
        for &t in tasks.iter() {
            let b = bins.task_bin(t);
            self.task_bins.push(b);
            let slot = &mut self.min_task[b as usize];
            if *slot == 0 {
                *slot = t;
            }
        }

        let before = out.len();
        let (min_worker, min_task) = (&self.min_worker, &self.min_task);
        let mut wb = self.worker_bins.iter();
        workers.retain(|&w| {
            let b = *wb.next().unwrap() as usize;
            if min_worker[b] == w && min_task[b] != 0 {
                out.push((w, min_task[b]));
                false
            } else {
                true
            }
        });
        let mut tb = self.task_bins.iter();
        tasks.retain(|&t| {
            let b = *tb.next().unwrap() as usize;
            !(min_task[b] == t && min_worker[b] != 0)
        });

        for &b in &self.worker_bins {
            self.min_worker[b as usize] = 0;
        }
        for &b in &self.task_bins {
            self.min_task[b as usize] = 0;
        }
        out.len() - before
    }
}

fn sorted_symmetric_difference<T: Ord>(a: &[T], b: &[T]) -> usize {
    let (mut i, mut j, mut common) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                common += 1;
                i += 1;
                j += 1;
            }
        }
    }
    a.len() + b.len() - 2 * common
}
