use std::io::Write;
use std::process::{Command, Output};

use proptest::prelude::*;
use serde_json::Value;
use switchcost_cli::records::{to_line, ExperimentRecord, PairRecord, SummaryLine, WalkSummary};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_switchcost"))
        .args(args)
        .env_remove("ASSIGN_SEED")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn vectors(lines: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(lines.as_bytes()).unwrap();
    f
}

#[test]
fn sorted_assign_prints_rank_order() {
    let o = bin(&["assign", "--alg", "sorted", "--w", "3", "--t", "10", "--multiset", "2,5,9"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for (w, t) in [(1, 2), (2, 5), (3, 9)] {
        assert!(text.contains(&format!("worker {w} -> task {t}")), "{text}");
    }
}

#[test]
fn assign_is_deterministic() {
    let args = ["assign", "--w", "8", "--t", "100", "--seed", "7", "--multiset", "3,3,17,42,99"];
    let (a, b) = (bin(&args), bin(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn oversized_multiset_is_a_usage_error() {
    let o = bin(&["assign", "--w", "3", "--t", "10", "--multiset", "1,2,3,4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("multiset larger than w"));
}

#[test]
fn bad_arguments_exit_two() {
    assert_eq!(bin(&["assign", "--w", "0", "--t", "10", "--multiset", "1"]).status.code(), Some(2));
    assert_eq!(bin(&["assign", "--w", "2", "--t", "10", "--multiset", "1,11"]).status.code(), Some(2));
    assert_eq!(bin(&["walk", "--w", "2"]).status.code(), Some(2));
}

#[test]
fn one_step_walk_prints_a_record_and_a_summary() {
    let o = bin(&["walk", "--w", "4", "--t", "16", "--steps", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    let rec: ExperimentRecord = serde_json::from_str(lines[0]).unwrap();
    assert_eq!((rec.w, rec.t, rec.algorithm.as_str()), (4, 16, "mrbb"));
    let sum: SummaryLine<WalkSummary> = serde_json::from_str(lines[1]).unwrap();
    assert_eq!(sum.summary.steps, 1);
    assert_eq!(sum.summary.max_switching_cost, rec.switching_cost);
}

fn without_timing(text: &str) -> Vec<Value> {
    text.lines()
        .map(|l| {
            let mut v: Value = serde_json::from_str(l).unwrap();
            if let Some(obj) = v.as_object_mut() {
                obj.remove("wall_time_us");
            }
            v
        })
        .collect()
}

#[test]
fn walks_rerun_identically() {
    for alg in ["sorted", "randperm", "mrbb", "explicit"] {
        let args = ["walk", "--alg", alg, "--w", "5", "--t", "40", "--steps", "30", "--seed", "3", "--size-varying"];
        let (a, b) = (bin(&args), bin(&args));
        assert!(a.status.success(), "{alg}: {}", stderr(&a));
        assert_eq!(without_timing(&stdout(&a)), without_timing(&stdout(&b)), "{alg}");
    }
}

#[test]
fn seed_comes_from_the_environment() {
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_switchcost"));
        cmd.args(["walk", "--w", "3", "--t", "30", "--steps", "5"]).env_remove("ASSIGN_SEED");
        if let Some(s) = env {
            cmd.env("ASSIGN_SEED", s);
        }
        if let Some(s) = flag {
            cmd.args(["--seed", s]);
        }
        without_timing(&String::from_utf8(cmd.output().unwrap().stdout).unwrap())
    };
    let from_env = run(Some("11"), None);
    assert_eq!(from_env[0]["seed"], 11);
    assert_eq!(from_env, run(None, Some("11")));
    assert_eq!(run(Some("5"), Some("11")), from_env);
    assert_ne!(run(None, None), from_env);
}

#[test]
fn exact_oracle_verdicts() {
    let o = bin(&["oracle", "exact", "--w", "1", "--t", "3", "--k", "0"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next(), Some("infeasible"));

    let o = bin(&["oracle", "exact", "--w", "3", "--t", "5", "--k", "2", "--sets-only"]);
    assert_eq!(stdout(&o).lines().next(), Some("infeasible"));

    let o = bin(&["oracle", "exact", "--w", "3", "--t", "5", "--k", "3", "--sets-only", "--table"]);
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("feasible"));
    let rec: Value = serde_json::from_str(text.lines().nth(1).unwrap()).unwrap();
    assert_eq!(rec["table"].as_array().unwrap().len(), 10);
}

#[test]
fn exact_oracle_respects_its_budget() {
    let o = bin(&["oracle", "exact", "--w", "3", "--t", "6", "--k", "2", "--node-limit", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next(), Some("budget_exhausted"));
}

#[test]
fn sorted_order_has_a_ramsey_witness() {
    let o = bin(&["oracle", "ramsey", "--alg", "sorted", "--w", "2", "--t", "4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("witness"));
    let rec: Value = serde_json::from_str(text.lines().nth(1).unwrap()).unwrap();
    assert_eq!(rec["extreme_cost"], 2);
}

#[test]
fn audit_and_disperser_modes_run() {
    let o = bin(&["oracle", "audit", "--alg", "sorted", "--w", "3", "--t", "6", "--sets-only"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next(), Some("max_cost 3"));

    let o = bin(&["oracle", "disperser", "--n", "16", "--d", "8", "--m", "2", "--k", "1"]);
    assert_eq!(stdout(&o).lines().next(), Some("found"));
    let o = bin(&["oracle", "disperser", "--n", "16", "--d", "3", "--m", "2", "--k", "1"]);
    assert_eq!(stdout(&o).lines().next(), Some("none"));
}

#[test]
fn identical_vectors_have_no_distinct_pairs() {
    let f = vectors("6 3 2,4,5\n6 3 2,4,5\n");
    let o = bin(&["embed", "--k", "3", "--n", "6", "--input", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("no distinct pairs"));
}

#[test]
fn malformed_vector_names_its_line() {
    let f = vectors("# header\n6 3 2,4,5\n6 3 2,x,5\n");
    let o = bin(&["embed", "--k", "3", "--n", "6", "--input", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn embedding_echoes_the_assignment() {
    // x = (0,1,0,1,1,0)
    let f = vectors("6 3 2,4,5\n6 3 1,4,6\n6 3 2,3,5\n");
    let path = f.path().to_str().unwrap();
    for alg in ["sorted", "mrbb"] {
        let o = bin(&["embed", "--alg", alg, "--k", "3", "--n", "6", "--input", path, "--chain"]);
        assert!(o.status.success(), "{}", stderr(&o));
        let text = stdout(&o);
        let first: Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        let code: Vec<u64> = serde_json::from_value(first["code"].clone()).unwrap();

        let a = bin(&["assign", "--alg", alg, "--w", "3", "--t", "6", "--multiset", "2,4,5"]);
        let printed: Vec<u64> = stdout(&a)
            .lines()
            .filter_map(|l| l.split("-> task ").nth(1))
            .map(|t| t.trim().parse().unwrap())
            .collect();
        assert_eq!(code, printed, "{alg}");

        for line in text.lines().filter(|l| l.starts_with("{\"left\"")) {
            let row: PairRecord = serde_json::from_str(line).unwrap();
            assert!(row.code_distance >= row.lower_bound);
            assert!(row.ratio >= 0.5);
        }
    }
}

fn record() -> impl Strategy<Value = ExperimentRecord> {
    (
        "[a-z0-9-]{0,12}",
        any::<u64>(),
        any::<u32>(),
        any::<u64>(),
        ("[0-9,]{0,10}", "[0-9,]{0,10}"),
        any::<usize>(),
        prop::collection::vec(any::<usize>(), 0..6),
        any::<bool>(),
        any::<u64>(),
    )
        .prop_map(|(id, seed, w, t, pair, cost, rounds, fb, us)| ExperimentRecord {
            experiment_id: id,
            seed,
            w,
            t,
            c: w / 2,
            algorithm: "mrbb".into(),
            pair,
            switching_cost: cost,
            per_round_costs: rounds,
            fallback_used: fb,
            wall_time_us: us,
        })
}

proptest! {
    #[test]
    fn experiment_records_round_trip(r in record()) {
        let line = to_line(&r).unwrap();
        prop_assert!(!line.contains('\n'));
        prop_assert_eq!(serde_json::from_str::<ExperimentRecord>(&line).unwrap(), r);
    }

    #[test]
    fn summaries_round_trip(mean in any::<f64>().prop_filter("finite", |x| x.is_finite()), steps in any::<u64>()) {
        let s = SummaryLine { summary: WalkSummary {
            experiment_id: "x".into(), steps, max_switching_cost: 3,
            mean_switching_cost: mean, fallback_count: 0, structural_bound: Some(40),
        }};
        let line = to_line(&s).unwrap();
        prop_assert_eq!(serde_json::from_str::<SummaryLine<WalkSummary>>(&line).unwrap(), s);
    }
}
