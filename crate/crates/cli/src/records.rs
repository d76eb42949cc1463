//! JSONL record types. Every record serializes to a single line and parses
//! back to an equal value.

use serde::{Deserialize, Serialize};

/// One step of a walk: the switching cost between two adjacent multisets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub experiment_id: String,
    pub seed: u64,
    pub w: u32,
    pub t: u64,
    pub c: u32,
    pub algorithm: String,
    /// `(T1, T2)` in multiset text format.
    pub pair: (String, String),
    pub switching_cost: usize,
    /// Matched-pair symmetric difference per outer round (per level for
    /// the explicit assigner). Empty for assigners without stages.
    pub per_round_costs: Vec<usize>,
    pub fallback_used: bool,
    pub wall_time_us: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkSummary {
    pub experiment_id: String,
    pub steps: u64,
    pub max_switching_cost: usize,
    pub mean_switching_cost: f64,
    pub fallback_count: u64,
    /// `4R` for stage-based assigners.
    pub structural_bound: Option<usize>,
}

/// Wrapper so summary lines are told apart from step records by key.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryLine<T> {
    pub summary: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleRecord {
    pub mode: String,
    pub verdict: String,
    pub seed: u64,
    #[serde(flatten)]
    pub detail: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeRecord {
    pub index: usize,
    pub vector: String,
    pub code: Vec<u64>,
    pub fallback_used: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairRecord {
    pub left: usize,
    pub right: usize,
    pub distance: u64,
    pub code_distance: usize,
    pub ratio: f64,
    pub lower_bound: usize,
    pub fallback_used: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub chain_total: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub chain_max_step: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbedSummary {
    pub k: u32,
    pub n: u64,
    pub vectors: usize,
    pub pairs: usize,
    pub skipped: usize,
    pub min_ratio: Option<f64>,
    pub max_ratio: Option<f64>,
    pub ratio_ceiling: Option<f64>,
    pub fallback_pairs: usize,
}

/// Serializes `value` as one line.
pub fn to_line<T: Serialize>(value: &T) -> serde_json::Result<String> {
    serde_json::to_string(value)
}
