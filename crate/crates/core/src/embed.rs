//! Densification: weight-`k` vectors in `n` dimensions become length-`k`
//! codes over `[n]`.
//!
//! A vector `x` is read as the task multiset `T(x)` (its support, or its
//! positions repeated by value in ℓ1 mode). An assignment function for
//! `k` workers over `[n]` maps `T(x)` to an assignment, and coordinate `i`
//! of the code is the task of worker `i`. Since the code's multiset is
//! `T(x)`, two codes disagree on at least `|T(x) ∖ T(y)| = d(x, y) / 2`
//! coordinates, whatever the assignment function. Low switching cost keeps
//! the upper side small.

use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::Rng;

use crate::assigner::AssignmentFn;
use crate::assignment::switching_cost;
use crate::error::{Error, Result};
use crate::multiset::TaskMultiset;
use crate::TaskId;

/// A sparse non-negative integer vector. Binary vectors have every value 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SparseVector {
    dimension: u64,
    // strictly increasing positions in [1, dimension], values >= 1
    entries: Vec<(u64, u32)>,
    binary: bool,
}

impl SparseVector {
    /// A 0/1 vector from its sorted support.
    pub fn binary(dimension: u64, support: Vec<u64>) -> Result<Self> {
        Self::build(dimension, support.into_iter().map(|p| (p, 1)).collect(), true)
    }

    /// A vector with positive integer values at sorted positions.
    pub fn l1(dimension: u64, entries: Vec<(u64, u32)>) -> Result<Self> {
        Self::build(dimension, entries, false)
    }

    fn build(dimension: u64, entries: Vec<(u64, u32)>, binary: bool) -> Result<Self> {
        let mut prev = 0;
        for &(p, v) in &entries {
            if p == 0 || p > dimension {
                return Err(Error::Parse(format!("position {p} outside [1, {dimension}]")));
            }
            if p <= prev {
                return Err(Error::Parse("positions must be strictly increasing".into()));
            }
            if v == 0 {
                return Err(Error::Parse(format!("zero value at position {p}")));
            }
            prev = p;
        }
        Ok(SparseVector {
            dimension,
            entries,
            binary,
        })
    }

    /// A uniformly random binary vector of weight `k`.
    pub fn random_binary<R: Rng + ?Sized>(rng: &mut R, dimension: u64, k: usize) -> Result<Self> {
        if k as u64 > dimension {
            return Err(Error::InvalidParameter(format!("weight {k} exceeds dimension {dimension}")));
        }
        let mut support: Vec<u64> = sample(rng, dimension as usize, k).into_iter().map(|i| i as u64 + 1).collect();
        support.sort_unstable();
        Self::binary(dimension, support)
    }

    pub fn dimension(&self) -> u64 {
        self.dimension
    }

    pub fn entries(&self) -> &[(u64, u32)] {
        &self.entries
    }

    pub fn is_binary(&self) -> bool {
        self.binary
    }

    /// Sum of the values; the support size for binary vectors.
    pub fn weight(&self) -> u64 {
        self.entries.iter().map(|&(_, v)| v as u64).sum()
    }

    /// `T(x)`: each position repeated by its value.
    pub fn task_multiset(&self) -> TaskMultiset {
        TaskMultiset::from_counts(self.dimension, self.entries.iter().copied())
            .expect("positions are validated")
    }
}

/// `"n k p1,p2,..."` for binary vectors, `"n k p1:v1,p2:v2,..."` for ℓ1.
/// The declared `k` must equal the weight.
impl FromStr for SparseVector {
    type Err = Error;

    fn from_str(line: &str) -> Result<Self> {
        let mut parts = line.split_whitespace();
        let mut number = |what: &str| -> Result<u64> {
            let tok = parts.next().ok_or_else(|| Error::Parse(format!("missing {what}")))?;
            tok.parse()
                .map_err(|_| Error::Parse(format!("bad {what} {tok:?}")))
        };
        let n = number("dimension")?;
        let k = number("weight")?;
        let body = parts.next().unwrap_or("");
        if let Some(extra) = parts.next() {
            return Err(Error::Parse(format!("unexpected token {extra:?}")));
        }
        let items: Vec<&str> = if body.is_empty() {
            Vec::new()
        } else {
            body.split(',').collect()
        };
        let l1 = items.iter().any(|s| s.contains(':'));
        let v = if l1 {
            let mut entries = Vec::with_capacity(items.len());
            for item in items {
                let (p, val) = item
                    .split_once(':')
                    .ok_or_else(|| Error::Parse(format!("expected position:value, got {item:?}")))?;
                let p = p.trim().parse().map_err(|_| Error::Parse(format!("bad position {p:?}")))?;
                let val = val.trim().parse().map_err(|_| Error::Parse(format!("bad value {val:?}")))?;
                entries.push((p, val));
            }
            SparseVector::l1(n, entries)?
        } else {
            let support = items
                .iter()
                .map(|s| s.trim().parse().map_err(|_| Error::Parse(format!("bad position {s:?}"))))
                .collect::<Result<Vec<u64>>>()?;
            SparseVector::binary(n, support)?
        };
        if v.weight() != k {
            return Err(Error::WeightMismatch {
                actual: v.weight(),
                expected: k,
            });
        }
        Ok(v)
    }
}

impl fmt::Display for SparseVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} ", self.dimension, self.weight())?;
        for (i, &(p, v)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            if self.binary {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}:{v}")?;
            }
        }
        Ok(())
    }
}

/// `Σ |x_i - y_i|`, which is the Hamming distance for binary vectors.
pub fn vector_distance(x: &SparseVector, y: &SparseVector) -> Result<u64> {
    if x.dimension != y.dimension {
        return Err(Error::DimensionMismatch {
            left: x.dimension,
            right: y.dimension,
        });
    }
    let (a, b) = (x.task_multiset(), y.task_multiset());
    Ok((a.difference(&b).len() + b.difference(&a).len()) as u64)
}

/// A length-`k` vector over `[n]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DenseCode {
    pub alphabet: u64,
    pub coords: Vec<TaskId>,
}

impl fmt::Display for DenseCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(">")
    }
}

/// Number of disagreeing coordinates.
pub fn hamming(u: &DenseCode, v: &DenseCode) -> Result<usize> {
    if u.coords.len() != v.coords.len() {
        return Err(Error::DimensionMismatch {
            left: u.coords.len() as u64,
            right: v.coords.len() as u64,
        });
    }
    Ok(u.coords.iter().zip(&v.coords).filter(|(a, b)| a != b).count())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedded {
    pub code: DenseCode,
    pub fallback_used: bool,
}

/// The code of `x` under `f`. `f` must have `k = weight(x)` workers and
/// universe `n = dimension(x)`.
pub fn embed<A: AssignmentFn + ?Sized>(f: &A, x: &SparseVector) -> Result<Embedded> {
    if x.weight() != f.workers() as u64 {
        return Err(Error::WeightMismatch {
            actual: x.weight(),
            expected: f.workers() as u64,
        });
    }
    if x.dimension != f.universe() {
        return Err(Error::DimensionMismatch {
            left: x.dimension,
            right: f.universe(),
        });
    }
    let r = f.assign(&x.task_multiset())?;
    Ok(Embedded {
        code: DenseCode {
            alphabet: x.dimension,
            coords: r.assignment.coords(),
        },
        fallback_used: r.used_fallback(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DistortionOptions {
    /// Also walk a chain of adjacent multisets from `T(x)` to `T(y)` and
    /// record its per-step switching costs.
    pub chain: bool,
    /// Worst-case switching cost of one adjacent step, if known. Reported
    /// as the ratio ceiling `step_bound / 2`.
    pub step_bound: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairRow {
    pub left: usize,
    pub right: usize,
    /// `d(x, y)`.
    pub distance: u64,
    /// `Ham(φ(x), φ(y))`.
    pub code_distance: usize,
    pub ratio: f64,
    /// `|T(x) ∖ T(y)|`, the guaranteed lower bound on `code_distance`.
    pub lower_bound: usize,
    pub fallback_used: bool,
    /// Sum and maximum of the switching costs along the chain, when
    /// requested.
    pub chain_total: Option<usize>,
    pub chain_max_step: Option<usize>,
    /// Any fallback at any chain state.
    pub chain_fallback: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistortionReport {
    pub rows: Vec<PairRow>,
    /// Pairs with `x = y`, left out of the ratios.
    pub skipped: usize,
    pub min_ratio: Option<f64>,
    pub max_ratio: Option<f64>,
    pub ratio_ceiling: Option<f64>,
    pub fallback_pairs: usize,
}

impl DistortionReport {
    /// Every row meets `code_distance ≥ |T(x) ∖ T(y)|`.
    pub fn lower_bound_holds(&self) -> bool {
        self.rows.iter().all(|r| r.code_distance >= r.lower_bound)
    }

    /// Every row with a chain meets `code_distance ≤ chain_total ≤ d · max step`.
    pub fn chain_bound_holds(&self) -> bool {
        self.rows.iter().all(|r| match (r.chain_total, r.chain_max_step) {
            (Some(total), Some(step)) => r.code_distance <= total && total <= r.lower_bound * step,
            _ => true,
        })
    }
}

/// Embeds every vector once and measures each listed pair.
pub fn distortion_audit<A: AssignmentFn + ?Sized>(
    f: &A,
    vectors: &[SparseVector],
    pairs: &[(usize, usize)],
    opts: DistortionOptions,
) -> Result<DistortionReport> {
    let codes = vectors.iter().map(|x| embed(f, x)).collect::<Result<Vec<_>>>()?;
    let mut report = DistortionReport {
        rows: Vec::with_capacity(pairs.len()),
        skipped: 0,
        min_ratio: None,
        max_ratio: None,
        ratio_ceiling: opts.step_bound.map(|b| b as f64 / 2.0),
        fallback_pairs: 0,
    };
    for &(i, j) in pairs {
        let (x, y) = (&vectors[i], &vectors[j]);
        let distance = vector_distance(x, y)?;
        if distance == 0 {
            report.skipped += 1;
            continue;
        }
        let code_distance = hamming(&codes[i].code, &codes[j].code)?;
        let ratio = code_distance as f64 / distance as f64;
        let (tx, ty) = (x.task_multiset(), y.task_multiset());
        let lower_bound = tx.difference(&ty).len();
        let fallback_used = codes[i].fallback_used || codes[j].fallback_used;
        let (chain_total, chain_max_step, chain_fallback) = if opts.chain {
            let c = chain_costs(f, &tx, &ty)?;
            (Some(c.0.iter().sum()), Some(c.0.iter().copied().max().unwrap_or(0)), c.1)
        } else {
            (None, None, false)
        };
        report.fallback_pairs += usize::from(fallback_used);
        report.min_ratio = Some(report.min_ratio.map_or(ratio, |m| m.min(ratio)));
        report.max_ratio = Some(report.max_ratio.map_or(ratio, |m| m.max(ratio)));
        report.rows.push(PairRow {
            left: i,
            right: j,
            distance,
            code_distance,
            ratio,
            lower_bound,
            fallback_used,
            chain_total,
            chain_max_step,
            chain_fallback,
        });
    }
    Ok(report)
}

/// Switching cost of each step of the chain that swaps the `i`-th smallest
/// element of `a ∖ b` for the `i`-th smallest of `b ∖ a`, plus whether any
/// chain state needed a fallback.
pub fn chain_costs<A: AssignmentFn + ?Sized>(f: &A, a: &TaskMultiset, b: &TaskMultiset) -> Result<(Vec<usize>, bool)> {
    let out: Vec<TaskId> = a.difference(b).to_vec();
    let into: Vec<TaskId> = b.difference(a).to_vec();
    if out.len() != into.len() {
        return Err(Error::SizeMismatch {
            workers: a.len(),
            tasks: b.len(),
        });
    }
    let mut cur = a.clone();
    let first = f.assign(&cur)?;
    let mut fallback = first.used_fallback();
    let mut prev = first.assignment;
    let mut costs = Vec::with_capacity(out.len());
    for (&o, &n) in out.iter().zip(&into) {
        cur.remove(o);
        cur.insert(n)?;
        let r = f.assign(&cur)?;
        fallback |= r.used_fallback();
        costs.push(switching_cost(&prev, &r.assignment));
        prev = r.assignment;
    }
    Ok((costs, fallback))
}

/// Every unordered index pair `(i, j)` with `i < j`.
pub fn all_pairs(count: usize) -> Vec<(usize, usize)> {
    (0..count).flat_map(|i| (i + 1..count).map(move |j| (i, j))).collect()
}
