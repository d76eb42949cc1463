use std::fs;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use switchcost::embed::{all_pairs, distortion_audit, embed as embed_one, DistortionOptions, SparseVector};
use switchcost::mix::mix;

use crate::algorithms::{Assigner, Params};
use crate::error::{CliError, Result};
use crate::records::{to_line, CodeRecord, EmbedSummary, PairRecord, SummaryLine};
use crate::{EmbedArgs, MAX_TASKS, MAX_WORKERS};

const PAIR_TAG: u64 = 0x50414952;

/// Parses one vector per non-blank line; `#` starts a comment line.
pub(crate) fn read_vectors(text: &str, k: u32, n: u64) -> Result<Vec<SparseVector>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |msg: String| CliError::Usage(format!("line {}: {msg}", i + 1));
        let v: SparseVector = line.parse().map_err(|e: switchcost::Error| bad(e.to_string()))?;
        if v.dimension() != n {
            return Err(bad(format!("dimension {} but --n is {n}", v.dimension())));
        }
        if v.weight() != k as u64 {
            return Err(bad(format!("weight {} but --k is {k}", v.weight())));
        }
        out.push(v);
    }
    Ok(out)
}

pub(crate) fn embed(args: &EmbedArgs, seed: u64, out: &mut dyn Write) -> Result<u8> {
    if args.k == 0 || args.k > MAX_WORKERS || args.n == 0 || args.n > MAX_TASKS {
        return Err(CliError::Usage(format!(
            "--k must lie in [1, {MAX_WORKERS}] and --n in [1, {MAX_TASKS}]"
        )));
    }
    let text = fs::read_to_string(&args.input)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", args.input.display())))?;
    let vectors = read_vectors(&text, args.k, args.n)?;
    let f = Assigner::build(&Params {
        algorithm: args.alg,
        w: args.k,
        t: args.n,
        c: args.c.max(1),
        seed,
        table_seeds: args.table_seeds.max(1),
    })?;

    for (index, v) in vectors.iter().enumerate() {
        let e = embed_one(f.as_fn(), v)?;
        let record = CodeRecord {
            index,
            vector: v.to_string(),
            code: e.code.coords,
            fallback_used: e.fallback_used,
        };
        writeln!(out, "{}", to_line(&record)?)?;
    }

    let pairs = match args.pairs {
        Some(count) if vectors.len() >= 2 => {
            let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, &[PAIR_TAG]));
            (0..count)
                .map(|_| {
                    let i = rng.gen_range(0..vectors.len());
                    let j = (i + rng.gen_range(1..vectors.len())) % vectors.len();
                    (i.min(j), i.max(j))
                })
                .collect()
        }
        Some(_) => Vec::new(),
        None => all_pairs(vectors.len()),
    };
    let opts = DistortionOptions {
        chain: args.chain,
        step_bound: f.structural_bound(),
    };
    let report = distortion_audit(f.as_fn(), &vectors, &pairs, opts)?;
    if report.rows.is_empty() {
        writeln!(out, "no distinct pairs")?;
        return Ok(0);
    }
    for row in &report.rows {
        let record = PairRecord {
            left: row.left,
            right: row.right,
            distance: row.distance,
            code_distance: row.code_distance,
            ratio: row.ratio,
            lower_bound: row.lower_bound,
            fallback_used: row.fallback_used,
            chain_total: row.chain_total,
            chain_max_step: row.chain_max_step,
        };
        writeln!(out, "{}", to_line(&record)?)?;
    }
    let summary = EmbedSummary {
        k: args.k,
        n: args.n,
        vectors: vectors.len(),
        pairs: report.rows.len(),
        skipped: report.skipped,
        min_ratio: report.min_ratio,
        max_ratio: report.max_ratio,
        ratio_ceiling: report.ratio_ceiling,
        fallback_pairs: report.fallback_pairs,
    };
    writeln!(out, "{}", to_line(&SummaryLine { summary })?)?;

    if !report.lower_bound_holds() || report.min_ratio.is_some_and(|m| m < 0.5) {
        return Err(CliError::Invariant(format!(
            "min ratio {:?} below 1/2",
            report.min_ratio
        )));
    }
    if !report.chain_bound_holds() {
        return Err(CliError::Invariant("a pair exceeded its chain bound".into()));
    }
    Ok(0)
}
