use crate::assigner::schedule::{ceil_log2, check_multiset, checked_input, run_stages};
use crate::assigner::{AssignResult, AssignmentFn};
use crate::binhash::{Binning, Composition, PartialAssignment, WorkerTaskInput};
use crate::error::{Error, Result};
use crate::mix::mix;
use crate::multiset::{for_each_combination, TaskMultiset};
use crate::reduction::{lift, lifted_universe, project};
use crate::{TaskId, WorkerId};

/// A seeded function `[N] × [D] → [M]`, stored as a table.
///
/// Elements are 1-based (`1..=N`), seeds and bins 0-based. `min_entropy`
/// and `epsilon` are the claimed `(k, ε)` parameters: every subset of at
/// least `2^k` elements should cover at least `(1 - ε) · M · D` of the
/// `(bin, seed)` pairs. [`verify`](Self::verify) checks the claim.
#[derive(Debug, Clone, PartialEq)]
pub struct DisperserFamily {
    domain: u64,
    seeds: u32,
    bins: u32,
    min_entropy: u32,
    epsilon: f64,
    // (element - 1) * seeds + seed
    table: Vec<u32>,
}

impl DisperserFamily {
    pub fn from_table(
        domain: u64,
        seeds: u32,
        bins: u32,
        min_entropy: u32,
        epsilon: f64,
        table: Vec<u32>,
    ) -> Result<Self> {
        if seeds == 0 || bins == 0 || domain == 0 {
            return Err(Error::InvalidParameter("N, D and M must be positive".into()));
        }
        if table.len() as u64 != domain * seeds as u64 {
            return Err(Error::InvalidParameter(format!(
                "table has {} entries, expected N·D = {}",
                table.len(),
                domain * seeds as u64
            )));
        }
        if table.iter().any(|&b| b >= bins) {
            return Err(Error::InvalidParameter("table entry outside [M]".into()));
        }
        Ok(DisperserFamily {
            domain,
            seeds,
            bins,
            min_entropy,
            epsilon,
            table,
        })
    }

    /// A uniformly random table derived from `seed`. Its disperser claim is
    /// not checked.
    pub fn random_table(domain: u64, seeds: u32, bins: u32, min_entropy: u32, epsilon: f64, seed: u64) -> Self {
        let table = (0..domain * seeds as u64)
            .map(|i| (mix(seed, &[i]) % bins as u64) as u32)
            .collect();
        DisperserFamily::from_table(domain, seeds, bins, min_entropy, epsilon, table)
            .expect("random table is well-formed")
    }

    pub fn domain(&self) -> u64 {
        self.domain
    }
    pub fn seeds(&self) -> u32 {
        self.seeds
    }
    pub fn bins(&self) -> u32 {
        self.bins
    }
    pub fn min_entropy(&self) -> u32 {
        self.min_entropy
    }
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
    pub fn table(&self) -> &[u32] {
        &self.table
    }

    #[inline]
    pub fn eval(&self, element: u64, seed: u32) -> u32 {
        debug_assert!(element >= 1 && element <= self.domain && seed < self.seeds);
        self.table[((element - 1) * self.seeds as u64 + seed as u64) as usize]
    }

    /// `|{(eval(s, d), d) : s ∈ S, d ∈ [D]}|`
    pub fn coverage(&self, subset: &[u64]) -> usize {
        let mut seen = vec![false; self.bins as usize];
        let mut total = 0;
        for d in 0..self.seeds {
            seen.iter_mut().for_each(|s| *s = false);
            for &s in subset {
                let b = self.eval(s, d) as usize;
                if !seen[b] {
                    seen[b] = true;
                    total += 1;
                }
            }
        }
        total
    }

    /// Smallest coverage that satisfies the claim.
    pub fn required_coverage(&self) -> usize {
        ((1.0 - self.epsilon) * self.bins as f64 * self.seeds as f64 - 1e-9).ceil().max(0.0) as usize
    }

    /// Smallest subset size the claim constrains, `2^k`.
    pub fn min_subset_size(&self) -> u64 {
        1u64.checked_shl(self.min_entropy).unwrap_or(u64::MAX)
    }

    /// Checks the disperser claim on every subset of exactly `2^k`
    /// elements. Coverage only grows with the subset, so this decides the
    /// claim for all larger subsets as well. A claim with `2^k > N` is
    /// vacuous.
    pub fn verify(&self) -> bool {
        let size = self.min_subset_size();
        if size > self.domain {
            return true;
        }
        let need = self.required_coverage();
        let mut ok = true;
        for_each_combination(self.domain, size as usize, |s| {
            if self.coverage(s) < need {
                ok = false;
            }
            ok
        });
        ok
    }

    /// The stage that bins workers and tasks with seed `seed`.
    pub fn stage(&self, seed: u32) -> SeedStage<'_> {
        SeedStage { family: self, seed }
    }
}

/// One seed of a disperser family used as a k-bin hash: worker `ω` and task
/// `τ` both go to bin `eval(·, seed)`.
#[derive(Debug, Clone, Copy)]
pub struct SeedStage<'a> {
    family: &'a DisperserFamily,
    seed: u32,
}

impl Binning for SeedStage<'_> {
    fn bins(&self) -> u32 {
        self.family.bins
    }
    fn worker_bin(&self, worker: WorkerId) -> u32 {
        self.family.eval(worker as u64, self.seed)
    }
    fn task_bin(&self, task: TaskId) -> u32 {
        self.family.eval(task, self.seed)
    }
}

/// The explicit assigner.
///
/// Level `i = 1..=L` with `L = max(1, ⌈log2 w⌉)` targets min-entropy
/// `k_i = L - i` and owns one family. A level runs `reps` copies of its
/// sweep, and a sweep is one stage per seed of the family, in seed order.
#[derive(Debug, Clone, PartialEq)]
pub struct ExplicitAssigner {
    workers: u32,
    tasks: u64,
    levels: Vec<DisperserFamily>,
    reps: u32,
}

impl ExplicitAssigner {
    /// Number of levels for `workers` workers.
    pub fn level_count(workers: u32) -> usize {
        (ceil_log2(workers as u64) as usize).max(1)
    }

    /// Min-entropy parameter of 1-based level `level`.
    pub fn level_entropy(workers: u32, level: usize) -> u32 {
        (Self::level_count(workers) - level) as u32
    }

    /// Domain every family must cover: all workers and all lifted tasks,
    /// rounded up to a power of two.
    pub fn required_domain(workers: u32, tasks: u64) -> u64 {
        lifted_universe(workers, tasks).max(workers as u64).next_power_of_two()
    }

    pub fn new(workers: u32, tasks: u64, levels: Vec<DisperserFamily>, reps: u32) -> Result<Self> {
        if workers == 0 || tasks == 0 || reps == 0 {
            return Err(Error::InvalidParameter("w, t and reps must be at least 1".into()));
        }
        let want = Self::level_count(workers);
        if levels.len() < want {
            return Err(Error::MissingLevel { level: levels.len() + 1 });
        }
        if levels.len() > want {
            return Err(Error::InvalidParameter(format!(
                "{} families given for {want} levels",
                levels.len()
            )));
        }
        let required = lifted_universe(workers, tasks).max(workers as u64);
        for family in &levels {
            if family.domain < required {
                return Err(Error::DomainTooSmall {
                    domain: family.domain,
                    required,
                });
            }
        }
        Ok(ExplicitAssigner {
            workers,
            tasks,
            levels,
            reps,
        })
    }

    /// Stand-in families: level `i` gets a random table with
    /// `M_i = 2^{k_i}` bins and `seeds` seeds over the required domain.
    pub fn with_random_tables(workers: u32, tasks: u64, seeds: u32, reps: u32, seed: u64) -> Result<Self> {
        let domain = Self::required_domain(workers, tasks);
        let levels = (1..=Self::level_count(workers))
            .map(|i| {
                let k = Self::level_entropy(workers, i);
                DisperserFamily::random_table(domain, seeds, 1 << k, k, 0.25, mix(seed, &[i as u64]))
            })
            .collect();
        ExplicitAssigner::new(workers, tasks, levels, reps)
    }

    pub fn levels(&self) -> &[DisperserFamily] {
        &self.levels
    }

    pub fn reps(&self) -> u32 {
        self.reps
    }

    /// Total number of stages.
    pub fn stage_count(&self) -> usize {
        self.levels.iter().map(|f| f.seeds as usize).sum::<usize>() * self.reps as usize
    }

    /// Worst-case switching cost between adjacent inputs when neither run
    /// needs the fallback.
    pub fn structural_bound(&self) -> usize {
        4 * self.stage_count()
    }

    /// One sweep of level `level` (1-based) on `input`: a stage per seed.
    pub fn sweep(&self, level: usize, input: &WorkerTaskInput) -> Composition {
        let family = &self.levels[level - 1];
        sweep(family, input)
    }

    fn stages(&self) -> impl Iterator<Item = SeedStage<'_>> + '_ {
        self.levels.iter().flat_map(move |family| {
            (0..self.reps).flat_map(move |_| (0..family.seeds).map(move |d| family.stage(d)))
        })
    }

    pub fn assign_set(&self, workers: &[WorkerId], tasks: &[TaskId]) -> Result<AssignResult> {
        self.run(workers, tasks, None)
    }

    pub fn assign_set_logged(
        &self,
        workers: &[WorkerId],
        tasks: &[TaskId],
    ) -> Result<(AssignResult, Vec<PartialAssignment>)> {
        let mut log = Vec::new();
        let r = self.run(workers, tasks, Some(&mut log))?;
        Ok((r, log))
    }

    fn run(
        &self,
        workers: &[WorkerId],
        tasks: &[TaskId],
        log: Option<&mut Vec<PartialAssignment>>,
    ) -> Result<AssignResult> {
        let input = checked_input(workers, tasks, self.workers, lifted_universe(self.workers, self.tasks))?;
        run_stages(self.workers, input, self.stages(), self.stage_count(), log)
    }

    pub fn assign(&self, tasks: &TaskMultiset) -> Result<AssignResult> {
        check_multiset(tasks, self.workers, self.tasks)?;
        let lifted = lift(tasks, self.workers)?;
        let workers: Vec<WorkerId> = (1..=lifted.len() as WorkerId).collect();
        let mut result = self.run(&workers, &lifted, None)?;
        result.assignment = project(&result.assignment, tasks, self.workers)?;
        Ok(result)
    }

    pub fn assign_logged(&self, tasks: &TaskMultiset) -> Result<(AssignResult, Vec<PartialAssignment>)> {
        check_multiset(tasks, self.workers, self.tasks)?;
        let lifted = lift(tasks, self.workers)?;
        let workers: Vec<WorkerId> = (1..=lifted.len() as WorkerId).collect();
        let (mut result, log) = self.assign_set_logged(&workers, &lifted)?;
        result.assignment = project(&result.assignment, tasks, self.workers)?;
        Ok((result, log))
    }
}

/// One sweep of `family` on `input`: a stage for every seed, in order.
pub fn sweep(family: &DisperserFamily, input: &WorkerTaskInput) -> Composition {
    let stages: Vec<SeedStage<'_>> = (0..family.seeds).map(|d| family.stage(d)).collect();
    crate::binhash::compose(&stages, input)
}

impl AssignmentFn for ExplicitAssigner {
    fn workers(&self) -> u32 {
        self.workers
    }
    fn universe(&self) -> u64 {
        self.tasks
    }
    fn name(&self) -> &'static str {
        "explicit"
    }
    fn assign(&self, tasks: &TaskMultiset) -> Result<AssignResult> {
        ExplicitAssigner::assign(self, tasks)
    }
}
