use clap::ValueEnum;

use switchcost::assigner::stage_costs;
use switchcost::baselines::{PriorityOracle, RandomPermutation, SortedOrder};
use switchcost::binhash::PartialAssignment;
use switchcost::{AssignResult, AssignmentFn, ExplicitAssigner, RoundSchedule, TaskMultiset};

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    /// Worker i takes the i-th smallest task.
    Sorted,
    /// Greedy over per-worker random preference orders.
    Randperm,
    /// Multi-round balls-to-bins.
    Mrbb,
    /// Multi-round with disperser-style table families.
    Explicit,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Sorted => "sorted",
            Algorithm::Randperm => "randperm",
            Algorithm::Mrbb => "mrbb",
            Algorithm::Explicit => "explicit",
        }
    }
}

/// Parameters shared by every command that builds an assigner.
#[derive(Debug, Clone, Copy)]
pub struct Params {
    pub algorithm: Algorithm,
    pub w: u32,
    pub t: u64,
    pub c: u32,
    pub seed: u64,
    /// Seeds per family for the explicit assigner.
    pub table_seeds: u32,
}

pub enum Assigner {
    Sorted(SortedOrder),
    Randperm(RandomPermutation),
    Mrbb(RoundSchedule),
    Explicit(ExplicitAssigner),
}

impl Assigner {
    pub fn build(p: &Params) -> Result<Self> {
        Ok(match p.algorithm {
            Algorithm::Sorted => Assigner::Sorted(SortedOrder { workers: p.w, universe: p.t }),
            Algorithm::Randperm => Assigner::Randperm(RandomPermutation {
                workers: p.w,
                universe: p.t,
                oracle: PriorityOracle { seed: p.seed },
            }),
            Algorithm::Mrbb => Assigner::Mrbb(RoundSchedule::build(p.w, p.t, p.c, p.seed)?),
            Algorithm::Explicit => {
                Assigner::Explicit(ExplicitAssigner::with_random_tables(p.w, p.t, p.table_seeds, p.c, p.seed)?)
            }
        })
    }

    pub fn as_fn(&self) -> &dyn AssignmentFn {
        match self {
            Assigner::Sorted(f) => f,
            Assigner::Randperm(f) => f,
            Assigner::Mrbb(f) => f,
            Assigner::Explicit(f) => f,
        }
    }

    /// `4R` for stage-based assigners.
    pub fn structural_bound(&self) -> Option<usize> {
        match self {
            Assigner::Mrbb(s) => Some(s.structural_bound()),
            Assigner::Explicit(e) => Some(e.structural_bound()),
            _ => None,
        }
    }

    /// The result plus the per-stage matchings, if the assigner has stages.
    pub fn assign_logged(&self, tasks: &TaskMultiset) -> Result<(AssignResult, Option<Vec<PartialAssignment>>)> {
        Ok(match self {
            Assigner::Mrbb(s) => {
                let (r, log) = s.assign_logged(tasks)?;
                (r, Some(log))
            }
            Assigner::Explicit(e) => {
                let (r, log) = e.assign_logged(tasks)?;
                (r, Some(log))
            }
            other => (other.as_fn().assign(tasks)?, None),
        })
    }

    /// Stage counts of the groups that per-round costs are summed over:
    /// outer rounds for the multi-round assigner, levels for the explicit
    /// one.
    fn groups(&self) -> Vec<usize> {
        match self {
            Assigner::Mrbb(s) => vec![s.reps_per_round() as usize; s.outer_rounds() as usize],
            Assigner::Explicit(e) => e.levels().iter().map(|f| f.seeds() as usize * e.reps() as usize).collect(),
            _ => Vec::new(),
        }
    }

    /// Per-group sums of the per-stage symmetric differences.
    pub fn per_round_costs(&self, a: Option<&[PartialAssignment]>, b: Option<&[PartialAssignment]>) -> Vec<usize> {
        let (Some(a), Some(b)) = (a, b) else {
            return Vec::new();
        };
        let costs = stage_costs(a, b);
        let mut out = Vec::new();
        let mut at = 0;
        for size in self.groups() {
            out.push(costs[at..at + size].iter().sum());
            at += size;
        }
        out
    }
}
