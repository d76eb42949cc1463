use crate::assigner::{rank_order_fallback, AssignResult, AssignmentFn};
use crate::assignment::Assignment;
use crate::binhash::{BinHash, Binning, PartialAssignment, Scratch, WorkerTaskInput};
use crate::error::{Error, Result};
use crate::multiset::TaskMultiset;
use crate::reduction::{lift, lifted_universe, project};
use crate::{TaskId, WorkerId};

const SHRINK: f64 = 1.1;

/// One stage of the schedule: repetition `rep` of outer round `outer`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Round {
    /// 1-based outer index.
    pub outer: u32,
    /// 1-based repetition index.
    pub rep: u32,
    pub hash: BinHash,
}

impl Round {
    pub fn bins(&self) -> u32 {
        self.hash.bins()
    }
}

/// The multi-round balls-to-bins assigner.
///
/// Outer round `i` (for `i = 1..=⌈log_1.1 w⌉`, at least one round) uses
/// `k_i = max(1, ⌈w / 1.1^i⌉)` bins and is repeated `c · ⌈log2 n⌉` times with
/// independent hashes, where `n = w · t` is the size of the lifted task
/// universe. The last outer round always has a single bin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundSchedule {
    workers: u32,
    tasks: u64,
    repetitions: u32,
    master_seed: u64,
    outer_rounds: u32,
    reps_per_round: u32,
    rounds: Vec<Round>,
}

impl RoundSchedule {
    pub fn build(workers: u32, tasks: u64, repetitions: u32, master_seed: u64) -> Result<Self> {
        if workers == 0 || tasks == 0 || repetitions == 0 {
            return Err(Error::InvalidParameter(
                "w, t and c must all be at least 1".into(),
            ));
        }
        let n = lifted_universe(workers, tasks);
        let outer_rounds = outer_round_count(workers);
        let reps_per_round = repetitions * ceil_log2(n).max(1);
        let mut rounds = Vec::with_capacity((outer_rounds * reps_per_round) as usize);
        for outer in 1..=outer_rounds {
            let k = bins_for_round(workers, outer);
            for rep in 1..=reps_per_round {
                rounds.push(Round {
                    outer,
                    rep,
                    hash: BinHash::for_round(master_seed, outer, rep, k),
                });
            }
        }
        Ok(RoundSchedule {
            workers,
            tasks,
            repetitions,
            master_seed,
            outer_rounds,
            reps_per_round,
            rounds,
        })
    }

    pub fn workers(&self) -> u32 {
        self.workers
    }

    /// Size `t` of the task universe.
    pub fn tasks(&self) -> u64 {
        self.tasks
    }

    /// Size `n = w · t` of the lifted universe.
    pub fn lifted_tasks(&self) -> u64 {
        lifted_universe(self.workers, self.tasks)
    }

    pub fn repetitions(&self) -> u32 {
        self.repetitions
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn outer_rounds(&self) -> u32 {
        self.outer_rounds
    }

    pub fn reps_per_round(&self) -> u32 {
        self.reps_per_round
    }

    pub fn rounds(&self) -> &[Round] {
        &self.rounds
    }

    /// Total number of stages `R`.
    pub fn len(&self) -> usize {
        self.rounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rounds.is_empty()
    }

    /// Worst-case switching cost between adjacent inputs when neither run
    /// needs the fallback: each stage changes at most four matched pairs.
    pub fn structural_bound(&self) -> usize {
        4 * self.len()
    }

    /// Assigns the worker set `workers ⊆ [w]` to the task set
    /// `tasks ⊆ [n]`; the two must have equal sizes. The result is a perfect
    /// matching, completed by the rank-order fallback if the stages leave a
    /// residual.
    pub fn assign_set(&self, workers: &[WorkerId], tasks: &[TaskId]) -> Result<AssignResult> {
        self.run(workers, tasks, None)
    }

    /// Like [`assign_set`](Self::assign_set), also recording the pairs each
    /// stage matched.
    pub fn assign_set_logged(
        &self,
        workers: &[WorkerId],
        tasks: &[TaskId],
    ) -> Result<(AssignResult, Vec<PartialAssignment>)> {
        let mut log = Vec::with_capacity(self.rounds.len());
        let result = self.run(workers, tasks, Some(&mut log))?;
        Ok((result, log))
    }

    /// Multiset entry point: lifts `tasks`, assigns workers `1..=|T|` to the
    /// lifted set and projects back.
    pub fn assign(&self, tasks: &TaskMultiset) -> Result<AssignResult> {
        self.assign_multiset(tasks, None)
    }

    pub fn assign_logged(&self, tasks: &TaskMultiset) -> Result<(AssignResult, Vec<PartialAssignment>)> {
        let mut log = Vec::with_capacity(self.rounds.len());
        let result = self.assign_multiset(tasks, Some(&mut log))?;
        Ok((result, log))
    }

    fn assign_multiset(
        &self,
        tasks: &TaskMultiset,
        log: Option<&mut Vec<PartialAssignment>>,
    ) -> Result<AssignResult> {
        check_multiset(tasks, self.workers, self.tasks)?;
        let lifted = lift(tasks, self.workers)?;
        let workers: Vec<WorkerId> = (1..=lifted.len() as WorkerId).collect();
        let mut result = self.run(&workers, &lifted, log)?;
        result.assignment = project(&result.assignment, tasks, self.workers)?;
        Ok(result)
    }

    fn run(
        &self,
        workers: &[WorkerId],
        tasks: &[TaskId],
        log: Option<&mut Vec<PartialAssignment>>,
    ) -> Result<AssignResult> {
        let input = checked_input(workers, tasks, self.workers, self.lifted_tasks())?;
        run_stages(
            self.workers,
            input,
            self.rounds.iter().map(|r| r.hash),
            self.rounds.len(),
            log,
        )
    }
}

impl AssignmentFn for RoundSchedule {
    fn workers(&self) -> u32 {
        self.workers
    }
    fn universe(&self) -> u64 {
        self.tasks
    }
    fn name(&self) -> &'static str {
        "mrbb"
    }
    fn assign(&self, tasks: &TaskMultiset) -> Result<AssignResult> {
        RoundSchedule::assign(self, tasks)
    }
}

/// Smallest `i >= 1` with `1.1^i >= w`.
fn outer_round_count(workers: u32) -> u32 {
    let mut i = 0;
    while SHRINK.powi(i as i32) < workers as f64 {
        i += 1;
    }
    i.max(1)
}

fn bins_for_round(workers: u32, outer: u32) -> u32 {
    let k = (workers as f64 / SHRINK.powi(outer as i32)).ceil();
    (k as u32).max(1)
}

pub(crate) fn ceil_log2(n: u64) -> u32 {
    if n <= 1 {
        0
    } else {
        64 - (n - 1).leading_zeros()
    }
}

pub(crate) fn check_multiset(tasks: &TaskMultiset, workers: u32, universe: u64) -> Result<()> {
    if tasks.len() > workers as usize {
        return Err(Error::TooManyTasks {
            size: tasks.len(),
            workers,
        });
    }
    if let Some(&(last, _)) = tasks.entries().last() {
        if last > universe {
            return Err(Error::TaskOutOfRange {
                task: last,
                universe,
            });
        }
    }
    Ok(())
}

pub(crate) fn checked_input(
    workers: &[WorkerId],
    tasks: &[TaskId],
    worker_count: u32,
    universe: u64,
) -> Result<WorkerTaskInput> {
    let input = WorkerTaskInput::new(workers.iter().copied(), tasks.iter().copied());
    if input.workers.len() != input.tasks.len() {
        return Err(Error::SizeMismatch {
            workers: input.workers.len(),
            tasks: input.tasks.len(),
        });
    }
    if let Some(&w) = input.workers.iter().find(|&&w| w == 0 || w > worker_count) {
        return Err(Error::WorkerOutOfRange {
            worker: w,
            workers: worker_count,
        });
    }
    if let Some(&t) = input.tasks.iter().find(|&&t| t == 0 || t > universe) {
        return Err(Error::TaskOutOfRange { task: t, universe });
    }
    Ok(input)
}

/// Threads `input` through `stages`, then applies the fallback.
pub(crate) fn run_stages<B, I>(
    worker_count: u32,
    input: WorkerTaskInput,
    stages: I,
    stage_count: usize,
    mut log: Option<&mut Vec<PartialAssignment>>,
) -> Result<AssignResult>
where
    B: Binning,
    I: IntoIterator<Item = B>,
{
    let WorkerTaskInput {
        mut workers,
        mut tasks,
    } = input;
    let mut pairs = Vec::with_capacity(workers.len());
    let mut per_round = Vec::with_capacity(stage_count);
    let mut scratch = Scratch::default();
    for stage in stages {
        let before = pairs.len();
        let matched = scratch.run(&stage, &mut workers, &mut tasks, &mut pairs);
        per_round.push(matched);
        if let Some(log) = log.as_deref_mut() {
            log.push(PartialAssignment {
                pairs: pairs[before..].to_vec(),
            });
        }
    }
    let fallback = rank_order_fallback(&workers, &tasks);
    let fallback_pairs = fallback.len();
    pairs.extend(fallback);
    Ok(AssignResult {
        assignment: Assignment::from_pairs(worker_count, pairs)?,
        fallback_pairs,
        per_round_matches: per_round,
    })
}
