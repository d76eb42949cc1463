//! Exact and exhaustive checkers.
//!
//! * [`exact_feasible`] decides whether *any* assignment function on a
//!   small instance reaches a target switching cost.
//! * [`exhaustive_max_switching`] audits a given assigner over every
//!   adjacent pair.
//! * [`disperser_search`] looks for tiny strong dispersers and returns only
//!   verified ones.
//! * [`ramsey_witness`] searches for a monochromatic set of `w + 1` tasks
//!   under the permutation coloring of an assigner.

mod audit;
mod disperser;
mod exact;
mod ramsey;

use std::time::{Duration, Instant};

pub use audit::{exhaustive_max_switching, AuditReport, AuditScope};
pub use disperser::{disperser_search, verify_exhaustive};
pub use exact::{exact_feasible, min_switching_cost, ExactOutcome, MinCost, TabulatedFn, Verdict};
pub use ramsey::{hyperedge_color, ramsey_witness, RamseyWitness};

/// Work limit for the search engines. Running out yields an inconclusive
/// result, never a wrong one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub node_limit: u64,
    pub time_limit: Option<Duration>,
}

impl SearchBudget {
    pub fn nodes(node_limit: u64) -> Self {
        SearchBudget {
            node_limit: node_limit.max(1),
            time_limit: None,
        }
    }

    pub fn with_time_limit(mut self, limit: Duration) -> Self {
        self.time_limit = Some(limit);
        self
    }

    pub(crate) fn meter(&self) -> Meter {
        Meter {
            budget: *self,
            start: Instant::now(),
            nodes: 0,
        }
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget::nodes(100_000_000)
    }
}

pub(crate) struct Meter {
    budget: SearchBudget,
    start: Instant,
    nodes: u64,
}

impl Meter {
    /// Counts one node; false once the budget is spent.
    pub(crate) fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget.node_limit {
            return false;
        }
        match self.budget.time_limit {
            Some(limit) if self.nodes % 4096 == 0 => self.start.elapsed() <= limit,
            _ => true,
        }
    }

    pub(crate) fn nodes(&self) -> u64 {
        self.nodes
    }
}

/// `C(n, k)`, saturating.
pub(crate) fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Number of size-`size` multisets (or sets) over `[universe]`.
pub(crate) fn state_count(universe: u64, size: u64, sets_only: bool) -> u64 {
    if sets_only {
        binomial(universe, size)
    } else if universe == 0 {
        u64::from(size == 0)
    } else {
        binomial(universe + size - 1, size)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 3), 10);
        assert_eq!(binomial(16, 0), 1);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(state_count(4, 3, false), 20);
        assert_eq!(state_count(5, 3, true), 10);
        assert_eq!(state_count(0, 0, false), 1);
    }

    #[test]
    fn meter_stops_at_limit() {
        let mut m = SearchBudget::nodes(3).meter();
        assert!(m.tick() && m.tick() && m.tick());
        assert!(!m.tick());
        assert_eq!(m.nodes(), 4);
    }
}
