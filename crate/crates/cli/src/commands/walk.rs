use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use switchcost::mix::mix;
use switchcost::{switching_cost, StepOptions, TaskMultiset};

use crate::algorithms::Assigner;
use crate::error::{CliError, Result};
use crate::records::{to_line, ExperimentRecord, SummaryLine, WalkSummary};
use crate::{WalkArgs, MAX_STEPS};

const WALK_TAG: u64 = 0x57414c4b;

pub(crate) fn walk(args: &WalkArgs, seed: u64, out: &mut dyn Write) -> Result<u8> {
    let p = args.alg.params(seed)?;
    if args.steps == 0 || args.steps > MAX_STEPS {
        return Err(CliError::Usage(format!("--steps must lie in [1, {MAX_STEPS}]")));
    }
    let f = Assigner::build(&p)?;
    let experiment_id = args
        .experiment_id
        .clone()
        .unwrap_or_else(|| format!("walk-{}-w{}-t{}-c{}-s{}", p.algorithm.name(), p.w, p.t, p.c, seed));
    let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, &[WALK_TAG]));
    let opts = StepOptions {
        workers: p.w,
        size_varying: args.size_varying,
    };

    let mut cur = TaskMultiset::from_tasks(p.t, (0..p.w).map(|_| rng.gen_range(1..=p.t)))?;
    let (mut cur_result, mut cur_log) = f.assign_logged(&cur)?;
    let (mut max, mut total) = (0usize, 0u64);
    let mut fallbacks = u64::from(cur_result.used_fallback());
    let mut over_bound = 0u64;
    for _ in 0..args.steps {
        let next = cur.adjacent_step(&mut rng, &opts)?;
        let start = Instant::now();
        let (next_result, next_log) = f.assign_logged(&next)?;
        let cost = switching_cost(&cur_result.assignment, &next_result.assignment);
        let wall_time_us = start.elapsed().as_micros() as u64;
        let fallback_used = cur_result.used_fallback() || next_result.used_fallback();
        let record = ExperimentRecord {
            experiment_id: experiment_id.clone(),
            seed,
            w: p.w,
            t: p.t,
            c: p.c,
            algorithm: p.algorithm.name().to_string(),
            pair: (cur.to_string(), next.to_string()),
            switching_cost: cost,
            per_round_costs: f.per_round_costs(cur_log.as_deref(), next_log.as_deref()),
            fallback_used,
            wall_time_us,
        };
        writeln!(out, "{}", to_line(&record)?)?;
        if let Some(bound) = f.structural_bound() {
            over_bound += u64::from(!fallback_used && cost > bound);
        }
        max = max.max(cost);
        total += cost as u64;
        fallbacks += u64::from(next_result.used_fallback());
        cur = next;
        cur_result = next_result;
        cur_log = next_log;
    }
    let summary = WalkSummary {
        experiment_id,
        steps: args.steps,
        max_switching_cost: max,
        mean_switching_cost: total as f64 / args.steps as f64,
        fallback_count: fallbacks,
        structural_bound: f.structural_bound(),
    };
    writeln!(out, "{}", to_line(&SummaryLine { summary })?)?;
    if over_bound > 0 {
        return Err(CliError::Invariant(format!(
            "{over_bound} fallback-free steps exceeded the structural bound"
        )));
    }
    Ok(0)
}
