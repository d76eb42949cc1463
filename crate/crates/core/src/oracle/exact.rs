use std::collections::{HashMap, VecDeque};

use crate::assigner::{AssignResult, AssignmentFn};
use crate::assignment::Assignment;
use crate::error::{Error, Result};
use crate::multiset::{enumerate, TaskMultiset};
use crate::oracle::{state_count, SearchBudget};
use crate::{TaskId, WorkerId};

/// Largest state space the exact search accepts.
pub const MAX_STATES: u64 = 20_000;
/// Largest per-state domain (distinct arrangements of one state).
pub const MAX_DOMAIN: usize = 128;

/// An assignment function given by an explicit table, as produced by a
/// feasible exact search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TabulatedFn {
    workers: u32,
    universe: u64,
    table: HashMap<TaskMultiset, Assignment>,
}

impl TabulatedFn {
    pub fn new(workers: u32, universe: u64, table: HashMap<TaskMultiset, Assignment>) -> Self {
        TabulatedFn {
            workers,
            universe,
            table,
        }
    }

    pub fn get(&self, tasks: &TaskMultiset) -> Option<&Assignment> {
        self.table.get(tasks)
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Entries sorted by multiset text, for stable output.
    pub fn entries(&self) -> Vec<(&TaskMultiset, &Assignment)> {
        let mut v: Vec<_> = self.table.iter().collect();
        v.sort_by_key(|(t, _)| t.to_vec());
        v
    }
}

impl AssignmentFn for TabulatedFn {
    fn workers(&self) -> u32 {
        self.workers
    }
    fn universe(&self) -> u64 {
        self.universe
    }
    fn name(&self) -> &'static str {
        "tabulated"
    }
    fn assign(&self, tasks: &TaskMultiset) -> Result<AssignResult> {
        let assignment = self
            .table
            .get(tasks)
            .cloned()
            .ok_or_else(|| Error::InvalidParameter(format!("multiset {{{tasks}}} not in table")))?;
        Ok(AssignResult {
            assignment,
            fallback_pairs: 0,
            per_round_matches: Vec::new(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Some function reaches the target; here is one.
    Feasible(TabulatedFn),
    Infeasible,
    BudgetExhausted,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Feasible(_) => "feasible",
            Verdict::Infeasible => "infeasible",
            Verdict::BudgetExhausted => "budget_exhausted",
        }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self, Verdict::Feasible(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactOutcome {
    pub verdict: Verdict,
    /// Search nodes expanded (one per tried value).
    pub nodes: u64,
    pub states: usize,
}

/// Decides whether some assignment function over `w` workers and size-`w`
/// task multisets (or sets) over `[t]` has switching cost at most `target`.
///
/// States are fixed in BFS order from the smallest multiset. Each fixed
/// value prunes the domains of its not-yet-fixed neighbours, and an empty
/// domain backtracks immediately. Relabeling workers is a symmetry, so the
/// first state is pinned to sorted order.
pub fn exact_feasible(
    workers: u32,
    universe: u64,
    target: usize,
    sets_only: bool,
    budget: &SearchBudget,
) -> Result<ExactOutcome> {
    let inst = Instance::build(workers, universe, target, sets_only)?;
    Ok(inst.solve(budget))
}

/// Result of scanning targets `0, 1, ..., w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinCost {
    /// Smallest feasible target, or `None` if some smaller target ran out
    /// of budget.
    pub value: Option<usize>,
    pub nodes: u64,
    /// Verdict per target tried, in order.
    pub verdicts: Vec<(usize, &'static str)>,
}

/// The optimal switching cost `s_{w,t}` by trying every target from 0 up.
pub fn min_switching_cost(workers: u32, universe: u64, sets_only: bool, budget: &SearchBudget) -> Result<MinCost> {
    let mut out = MinCost {
        value: None,
        nodes: 0,
        verdicts: Vec::new(),
    };
    for target in 0..=workers as usize {
        let r = exact_feasible(workers, universe, target, sets_only, budget)?;
        out.nodes += r.nodes;
        out.verdicts.push((target, r.verdict.label()));
        match r.verdict {
            Verdict::Feasible(_) => {
                out.value = Some(target);
                break;
            }
            Verdict::Infeasible => {}
            Verdict::BudgetExhausted => break,
        }
    }
    Ok(out)
}

struct Instance {
    workers: u32,
    universe: u64,
    states: Vec<TaskMultiset>,
    // distinct worker-order arrangements per state, sorted order first
    domains: Vec<Vec<Vec<TaskId>>>,
    order: Vec<usize>,
    // forward edges (later neighbour, mask of its values allowed by each
    // value of this state)
    forward: Vec<Vec<(usize, Vec<u128>)>>,
}

impl Instance {
    fn build(workers: u32, universe: u64, target: usize, sets_only: bool) -> Result<Self> {
        if workers == 0 || universe == 0 {
            return Err(Error::InvalidParameter("w and t must be positive".into()));
        }
        let count = state_count(universe, workers as u64, sets_only);
        if count > MAX_STATES {
            return Err(Error::InvalidParameter(format!(
                "instance has {count} states; the exact search accepts at most {MAX_STATES}"
            )));
        }
        let states = enumerate(universe, workers as usize, sets_only);
        let index: HashMap<Vec<TaskId>, usize> =
            states.iter().enumerate().map(|(i, s)| (s.to_vec(), i)).collect();

        let mut domains = Vec::with_capacity(states.len());
        for s in &states {
            let d = arrangements(&s.to_vec());
            if d.len() > MAX_DOMAIN {
                return Err(Error::InvalidParameter(format!(
                    "{} arrangements per state; the exact search accepts at most {MAX_DOMAIN}",
                    d.len()
                )));
            }
            domains.push(d);
        }

        let neighbours: Vec<Vec<usize>> = states
            .iter()
            .map(|s| swap_neighbours(s, universe, sets_only, &index))
            .collect();
        let order = bfs_order(&neighbours);
        let mut pos = vec![0; states.len()];
        for (i, &s) in order.iter().enumerate() {
            pos[s] = i;
        }

        let mut forward = vec![Vec::new(); states.len()];
        for s in 0..states.len() {
            for &u in &neighbours[s] {
                if pos[u] < pos[s] {
                    continue;
                }
                let masks = domains[s]
                    .iter()
                    .map(|a| {
                        domains[u].iter().enumerate().fold(0u128, |m, (j, b)| {
                            if differing(a, b) <= target {
                                m | (1u128 << j)
                            } else {
                                m
                            }
                        })
                    })
                    .collect();
                forward[s].push((u, masks));
            }
        }

        Ok(Instance {
            workers,
            universe,
            states,
            domains,
            order,
            forward,
        })
    }

    fn solve(&self, budget: &SearchBudget) -> ExactOutcome {
        let n = self.states.len();
        let mut meter = budget.meter();
        if n == 0 {
            return self.outcome(Verdict::Feasible(self.table(&[])), 0);
        }
        let mut masks: Vec<u128> = self.domains.iter().map(|d| full_mask(d.len())).collect();
        // pin the first state to sorted order
        masks[self.order[0]] = 1;
        let mut choice = vec![0usize; n];
        let mut trail: Vec<(usize, u128)> = Vec::new();

        struct Frame {
            state: usize,
            remaining: u128,
            trail_len: usize,
        }
        let mut stack = vec![Frame {
            state: self.order[0],
            remaining: masks[self.order[0]],
            trail_len: 0,
        }];

        while let Some(frame) = stack.last_mut() {
            while trail.len() > frame.trail_len {
                let (u, m) = trail.pop().expect("non-empty trail");
                masks[u] = m;
            }
            if frame.remaining == 0 {
                stack.pop();
                continue;
            }
            let value = frame.remaining.trailing_zeros() as usize;
            frame.remaining &= frame.remaining - 1;
            let s = frame.state;
            if !meter.tick() {
                return self.outcome(Verdict::BudgetExhausted, meter.nodes());
            }
            choice[s] = value;

            let mut ok = true;
            for (u, allowed) in &self.forward[s] {
                let narrowed = masks[*u] & allowed[value];
                if narrowed != masks[*u] {
                    trail.push((*u, masks[*u]));
                    masks[*u] = narrowed;
                }
                if narrowed == 0 {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            let depth = stack.len();
            if depth == n {
                return self.outcome(Verdict::Feasible(self.table(&choice)), meter.nodes());
            }
            let next = self.order[depth];
            stack.push(Frame {
                state: next,
                remaining: masks[next],
                trail_len: trail.len(),
            });
        }
        self.outcome(Verdict::Infeasible, meter.nodes())
    }

    fn outcome(&self, verdict: Verdict, nodes: u64) -> ExactOutcome {
        ExactOutcome {
            verdict,
            nodes,
            states: self.states.len(),
        }
    }

    fn table(&self, choice: &[usize]) -> TabulatedFn {
        let table = self
            .states
            .iter()
            .enumerate()
            .map(|(s, t)| {
                let coords = &self.domains[s][choice[s]];
                let a = Assignment::from_pairs(
                    self.workers,
                    coords.iter().enumerate().map(|(i, &task)| (i as WorkerId + 1, task)),
                )
                .expect("arrangement covers every worker once");
                (t.clone(), a)
            })
            .collect();
        TabulatedFn::new(self.workers, self.universe, table)
    }
}

fn full_mask(len: usize) -> u128 {
    if len >= 128 {
        u128::MAX
    } else {
        (1u128 << len) - 1
    }
}

fn differing(a: &[TaskId], b: &[TaskId]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Distinct permutations of `sorted` in lexicographic order.
fn arrangements(sorted: &[TaskId]) -> Vec<Vec<TaskId>> {
    let mut cur = sorted.to_vec();
    let mut out = vec![cur.clone()];
    loop {
        // next lexicographic permutation
        let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..cur.len()).rev().find(|&j| cur[j] > cur[i - 1]).expect("pivot exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

fn swap_neighbours(
    state: &TaskMultiset,
    universe: u64,
    sets_only: bool,
    index: &HashMap<Vec<TaskId>, usize>,
) -> Vec<usize> {
    let mut out = Vec::new();
    for &(x, _) in state.entries() {
        for y in 1..=universe {
            if y == x || (sets_only && state.multiplicity(y) > 0) {
                continue;
            }
            let mut next = state.clone();
            next.remove(x);
            next.insert(y).expect("y lies in the universe");
            if let Some(&i) = index.get(&next.to_vec()) {
                out.push(i);
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn bfs_order(neighbours: &[Vec<usize>]) -> Vec<usize> {
    let n = neighbours.len();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(s) = queue.pop_front() {
            order.push(s);
            for &u in &neighbours[s] {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
    }
    order
}
