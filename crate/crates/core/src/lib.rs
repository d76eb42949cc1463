//! Memoryless worker-task assignment with low switching cost.
//!
//! `w` workers must cover a multiset `T` of at most `w` tasks drawn from
//! `[t]`, and the assignment may depend on nothing but `T`. The switching
//! cost of an assignment function is the largest number of workers that
//! change task when `T` changes by one element. This crate provides
//!
//! * the multi-round balls-to-bins assigner ([`RoundSchedule`]) and its
//!   disperser-driven explicit variant ([`ExplicitAssigner`]),
//! * reference assigners ([`baselines`]),
//! * exact and exhaustive checkers ([`oracle`]),
//! * the densification embedding of sparse binary vectors into
//!   low-dimensional Hamming space ([`embed`]).
//!
//! The guide in `book/` walks through each piece with runnable examples.

pub mod assigner;
pub mod assignment;
pub mod baselines;
pub mod binhash;
pub mod embed;
pub mod error;
pub mod mix;
pub mod multiset;
pub mod oracle;
pub mod reduction;

pub use assigner::{AssignResult, AssignmentFn, DisperserFamily, ExplicitAssigner, RoundSchedule};
pub use assignment::{switching_cost, Assignment};
pub use error::{Error, Result};
pub use multiset::{StepOptions, TaskMultiset};

pub type WorkerId = u32;
pub type TaskId = u64;

// The guide's snippets run as doctests through these modules.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/multisets.md")]
    mod multisets {}
    #[doc = include_str!("../../../book/src/reduction.md")]
    mod reduction {}
    #[doc = include_str!("../../../book/src/binhash.md")]
    mod binhash {}
    #[doc = include_str!("../../../book/src/explicit.md")]
    mod explicit {}
    #[doc = include_str!("../../../book/src/baselines.md")]
    mod baselines {}
    #[doc = include_str!("../../../book/src/oracles.md")]
    mod oracles {}
    #[doc = include_str!("../../../book/src/embedding.md")]
    mod embedding {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
