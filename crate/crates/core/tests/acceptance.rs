//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Every random choice is seeded, so reruns print the same
//! verdicts.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use switchcost::assigner::sweep;
use switchcost::baselines::{random_permutation_expected_bound, PriorityOracle, RandomPermutation, SortedOrder};
use switchcost::binhash::{apply, compose, difference_score, BinHash, WorkerTaskInput};
use switchcost::embed::{all_pairs, distortion_audit, DistortionOptions, SparseVector};
use switchcost::multiset::for_each_combination;
use switchcost::oracle::{disperser_search, exact_feasible, ramsey_witness, verify_exhaustive, SearchBudget, Verdict};
use switchcost::{switching_cost, DisperserFamily, RoundSchedule, StepOptions, TaskMultiset};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn random_subset<R: Rng>(rng: &mut R, universe: u64) -> Vec<u64> {
    let p: f64 = rng.gen();
    (1..=universe).filter(|_| rng.gen_bool(p)).collect()
}

fn random_input<R: Rng>(rng: &mut R, w: u32, n: u64) -> WorkerTaskInput {
    let ws = random_subset(rng, w as u64).into_iter().map(|x| x as u32);
    WorkerTaskInput::new(ws, random_subset(rng, n))
}

/// Adds, removes or replaces one element on one side.
fn perturb<R: Rng>(rng: &mut R, input: &WorkerTaskInput, w: u32, n: u64) -> WorkerTaskInput {
    let mut out = input.clone();
    if rng.gen_bool(0.5) {
        let mut v: Vec<u64> = out.workers.iter().map(|&x| x as u64).collect();
        toggle(rng, &mut v, w as u64);
        out.workers = v.into_iter().map(|x| x as u32).collect();
    } else {
        toggle(rng, &mut out.tasks, n);
    }
    out
}

fn toggle<R: Rng>(rng: &mut R, v: &mut Vec<u64>, universe: u64) {
    let x = rng.gen_range(1..=universe);
    let replace = rng.gen_bool(0.5) && !v.is_empty();
    if replace {
        let i = rng.gen_range(0..v.len());
        v.remove(i);
    }
    match v.binary_search(&x) {
        Ok(pos) if !replace => {
            v.remove(pos);
        }
        Ok(_) => {}
        Err(pos) => v.insert(pos, x),
    }
}

fn random_multiset<R: Rng>(rng: &mut R, size: usize, universe: u64) -> TaskMultiset {
    TaskMultiset::from_tasks(universe, (0..size).map(|_| rng.gen_range(1..=universe))).unwrap()
}

fn composition_friendliness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut violations = 0;
    for i in 0..100_000 {
        let w = rng.gen_range(1..=16);
        let n = rng.gen_range(1..=64);
        let k = rng.gen_range(1..=16);
        let a = random_input(&mut rng, w, n);
        // half unrelated, half a few edits apart
        let b = if i % 2 == 0 {
            random_input(&mut rng, w, n)
        } else {
            let mut b = a.clone();
            for _ in 0..rng.gen_range(1..=3) {
                b = perturb(&mut rng, &b, w, n);
            }
            b
        };
        let stages: Vec<BinHash> = (0..rng.gen_range(1..=3)).map(|_| BinHash::new(k, rng.gen())).collect();
        let (x, y) = (compose(&stages, &a), compose(&stages, &b));
        if difference_score(&x.residual, &y.residual) > difference_score(&a, &b) {
            violations += 1;
        }
    }
    outcome(violations == 0, format!("{violations} violations in 100000 pairs"))
}

fn per_stage_switching() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0;
    let mut over = 0;
    for _ in 0..100_000 {
        let w = rng.gen_range(1..=16);
        let n = rng.gen_range(1..=64);
        let k = rng.gen_range(1..=16);
        let a = random_input(&mut rng, w, n);
        let b = perturb(&mut rng, &a, w, n);
        let h = BinHash::new(k, rng.gen());
        let c = apply(&h, &a).matched.symmetric_difference(&apply(&h, &b).matched);
        worst = worst.max(c);
        over += usize::from(c > 4 || c > 2 * difference_score(&a, &b));
    }
    outcome(over == 0, format!("max symmetric difference {worst}, {over} pairs over the bound"))
}

fn end_to_end_bound() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (w, t) in [(8u32, 8u64), (8, 256), (64, 8), (64, 256)] {
        let s = RoundSchedule::build(w, t, 4, 3).unwrap();
        let bound = s.structural_bound();
        let mut rng = ChaCha8Rng::seed_from_u64(w as u64 * 1000 + t);
        let opts = StepOptions { workers: w, size_varying: false };
        let (mut worst, mut fallbacks, mut over) = (0, 0, 0);
        for _ in 0..10_000 {
            let a = random_multiset(&mut rng, w as usize, t);
            let b = a.adjacent_step(&mut rng, &opts).unwrap();
            let (ra, rb) = (s.assign(&a).unwrap(), s.assign(&b).unwrap());
            fallbacks += usize::from(ra.used_fallback()) + usize::from(rb.used_fallback());
            if !ra.used_fallback() && !rb.used_fallback() {
                let c = switching_cost(&ra.assignment, &rb.assignment);
                worst = worst.max(c);
                over += usize::from(c > bound);
            }
        }
        pass &= over == 0 && fallbacks == 0;
        parts.push(format!("w={w} t={t}: max {worst} <= 4R = {bound}, fallbacks {fallbacks}"));
    }
    outcome(pass, parts.join("; "))
}

fn fully_assigning() -> Outcome {
    let mut clean_seeds = 0;
    let mut inputs = 0;
    for seed in 0..10u64 {
        let s = RoundSchedule::build(4, 4, 4, seed).unwrap();
        let mut fallbacks = 0;
        inputs = 0;
        for size in 0..=4 {
            for_each_combination(4, size, |ws| {
                let ws: Vec<u32> = ws.iter().map(|&w| w as u32).collect();
                for_each_combination(16, size, |ts| {
                    fallbacks += s.assign_set(&ws, ts).unwrap().fallback_pairs;
                    inputs += 1;
                    true
                });
                true
            });
        }
        clean_seeds += usize::from(fallbacks == 0);
    }
    outcome(
        clean_seeds >= 9,
        format!("{clean_seeds}/10 seeds fallback-free over all {inputs} inputs"),
    )
}

fn active_bins() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for k in [16u32, 64, 256] {
        let input = WorkerTaskInput::new(1..=k, 1..=k as u64);
        let total: usize = (0..2000).map(|_| apply(&BinHash::new(k, rng.gen()), &input).active_bins).sum();
        let mean = total as f64 / 2000.0;
        pass &= mean >= 0.24 * k as f64;
        parts.push(format!("k={k}: mean {mean:.2} = {:.3}k", mean / k as f64));
    }
    outcome(pass, parts.join("; "))
}

fn random_permutation_mean() -> Outcome {
    let (w, t) = (64u32, 512u64);
    let f = RandomPermutation { workers: w, universe: t, oracle: PriorityOracle { seed: 6 } };
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let opts = StepOptions { workers: w, size_varying: false };
    let mut total = 0usize;
    for _ in 0..10_000 {
        let a = random_multiset(&mut rng, w as usize, t);
        let b = a.adjacent_step(&mut rng, &opts).unwrap();
        let fa = switchcost::AssignmentFn::assign(&f, &a).unwrap();
        let fb = switchcost::AssignmentFn::assign(&f, &b).unwrap();
        total += switching_cost(&fa.assignment, &fb.assignment);
    }
    let mean = total as f64 / 10_000.0;
    let expected = random_permutation_expected_bound(w);
    outcome(
        mean <= 10.4,
        format!("mean {mean:.3} (expected-value bound {expected:.4}, threshold 10.4)"),
    )
}

fn lower_bound() -> Outcome {
    let budget = SearchBudget::default().with_time_limit(Duration::from_secs(600));
    let k2 = exact_feasible(3, 5, 2, true, &budget).unwrap();
    let k3 = exact_feasible(3, 5, 3, true, &budget).unwrap();
    let pass = k2.verdict == Verdict::Infeasible && k3.verdict.is_feasible();
    outcome(
        pass,
        format!(
            "k=2: {} ({} nodes); k=3=w: {} ({} nodes)",
            k2.verdict.label(),
            k2.nodes,
            k3.verdict.label(),
            k3.nodes
        ),
    )
}

fn ramsey() -> Outcome {
    let f = SortedOrder { workers: 2, universe: 4 };
    match ramsey_witness(&f, 2, 4) {
        Ok(Some(w)) => outcome(
            w.extreme_cost == 2,
            format!("witness {:?}, color {:?}, extreme cost {}", w.vertices, w.color, w.extreme_cost),
        ),
        Ok(None) => outcome(false, "no witness".into()),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn embedding() -> Outcome {
    let s = RoundSchedule::build(8, 64, 4, 9).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let vs: Vec<SparseVector> = (0..100)
        .map(|_| {
            let mut support: Vec<u64> = sample(&mut rng, 64, 8).into_iter().map(|i| i as u64 + 1).collect();
            support.sort_unstable();
            SparseVector::binary(64, support).unwrap()
        })
        .collect();
    let opts = DistortionOptions { chain: false, step_bound: Some(s.structural_bound()) };
    let r = distortion_audit(&s, &vs, &all_pairs(vs.len()), opts).unwrap();
    let min = r.min_ratio.unwrap_or(f64::INFINITY);
    outcome(
        min >= 0.5 && r.lower_bound_holds(),
        format!(
            "{} pairs, min ratio {min:.3}, max ratio {:.3}, ceiling {}",
            r.rows.len(),
            r.max_ratio.unwrap_or(0.0),
            r.ratio_ceiling.unwrap_or(0.0)
        ),
    )
}

/// Checks `4 · matched ≥ M` for one sweep on every `W, T ⊆ [N]` with
/// `|W| = |T| = size`. Returns (inputs, failures, smallest match count).
fn sweep_progress(f: &DisperserFamily, size: usize) -> (u64, u64, usize) {
    let n = f.domain();
    let (mut inputs, mut failures, mut least) = (0, 0, usize::MAX);
    let mut subsets = Vec::new();
    for_each_combination(n, size, |s| {
        subsets.push(s.to_vec());
        true
    });
    for ws in &subsets {
        let workers: Vec<u32> = ws.iter().map(|&w| w as u32).collect();
        for ts in &subsets {
            let input = WorkerTaskInput { workers: workers.clone(), tasks: ts.clone() };
            let m = sweep(f, &input).matched.len();
            least = least.min(m);
            inputs += 1;
            failures += u64::from(4 * m < f.bins() as usize);
        }
    }
    (inputs, failures, least)
}

fn explicit_progress() -> Outcome {
    let budget = SearchBudget::default().with_time_limit(Duration::from_secs(120));
    let Ok(Some(level1)) = disperser_search(16, 8, 2, 1, 0.25, &budget, 10) else {
        return outcome(false, "disperser search found nothing".into());
    };
    let Ok(Some(level2)) = disperser_search(16, 1, 1, 0, 0.25, &budget, 10) else {
        return outcome(false, "disperser search found nothing".into());
    };
    if !verify_exhaustive(&level1) || !verify_exhaustive(&level2) {
        return outcome(false, "searched family failed verification".into());
    }
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, f, sizes) in [("M=2", &level1, 2..=4), ("M=1", &level2, 1..=3)] {
        let (mut inputs, mut failures, mut least) = (0, 0, usize::MAX);
        for size in sizes {
            let (i, fl, l) = sweep_progress(f, size);
            inputs += i;
            failures += fl;
            least = least.min(l);
        }
        pass &= failures == 0;
        parts.push(format!("{name}: {inputs} inputs, min matched {least}, {failures} below M/4"));
    }
    outcome(pass, format!("N=16 D=8 verified; {}", parts.join("; ")))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("composition-friendliness", composition_friendliness),
        ("per-stage switching <= 4", per_stage_switching),
        ("end-to-end bound 4R", end_to_end_bound),
        ("fully assigning at small scale", fully_assigning),
        ("active bins mean >= 0.24k", active_bins),
        ("random-permutation mean", random_permutation_mean),
        ("lower bound s(3,5) >= 3", lower_bound),
        ("Ramsey mechanism", ramsey),
        ("embedding lower distortion", embedding),
        ("explicit-variant progress", explicit_progress),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        failed += usize::from(!o.pass);
        println!(
            "criterion {:>2} {}: {} ({}; {:.2?})",
            i + 1,
            name,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
