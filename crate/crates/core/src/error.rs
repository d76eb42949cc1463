use thiserror::Error;

/// Everything that can go wrong in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("task id {task} outside universe [1, {universe}]")]
    TaskOutOfRange { task: u64, universe: u64 },
    #[error("worker id {worker} outside [1, {workers}]")]
    WorkerOutOfRange { worker: u32, workers: u32 },
    #[error("multiset larger than w ({size} > {workers})")]
    TooManyTasks { size: usize, workers: u32 },
    #[error("multiplicity {multiplicity} of task {task} exceeds w = {workers}")]
    MultiplicityTooLarge { task: u64, multiplicity: u32, workers: u32 },
    #[error("worker/task sizes differ ({workers} workers, {tasks} tasks)")]
    SizeMismatch { workers: usize, tasks: usize },
    #[error("task universes differ ({left} vs {right})")]
    UniverseMismatch { left: u64, right: u64 },
    #[error("assignment is not a bijection onto the lifted task set")]
    NotABijection,
    #[error("no adjacent multiset exists: {0}")]
    NoAdjacentMove(&'static str),
    #[error("disperser domain {domain} smaller than required {required}")]
    DomainTooSmall { domain: u64, required: u64 },
    #[error("missing disperser family for level {level}")]
    MissingLevel { level: usize },
    #[error("weight {actual} does not match expected {expected}")]
    WeightMismatch { actual: u64, expected: u64 },
    #[error("dimension mismatch ({left} vs {right})")]
    DimensionMismatch { left: u64, right: u64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
