use std::io::Write;
use std::time::Duration;

use serde_json::json;
use switchcost::oracle::{
    disperser_search, exact_feasible, exhaustive_max_switching, ramsey_witness, AuditScope, SearchBudget, Verdict,
};

use crate::algorithms::Assigner;
use crate::error::{CliError, Result};
use crate::records::{to_line, OracleRecord};
use crate::{BudgetArgs, OracleCommand};

fn budget(args: &BudgetArgs) -> Result<SearchBudget> {
    let mut b = SearchBudget::nodes(args.node_limit);
    if let Some(secs) = args.time_limit {
        if !(secs.is_finite() && secs > 0.0) {
            return Err(CliError::Usage("--time-limit must be a positive number of seconds".into()));
        }
        b = b.with_time_limit(Duration::from_secs_f64(secs));
    }
    Ok(b)
}

fn emit(out: &mut dyn Write, mode: &str, verdict: &str, seed: u64, detail: serde_json::Value) -> Result<()> {
    writeln!(out, "{verdict}")?;
    let record = OracleRecord {
        mode: mode.to_string(),
        verdict: verdict.to_string(),
        seed,
        detail,
    };
    writeln!(out, "{}", to_line(&record)?)?;
    Ok(())
}

pub(crate) fn oracle(cmd: &OracleCommand, seed: u64, out: &mut dyn Write) -> Result<u8> {
    match cmd {
        OracleCommand::Exact {
            w,
            t,
            k,
            sets_only,
            table,
            budget: b,
        } => {
            let r = exact_feasible(*w, *t, *k, *sets_only, &budget(b)?)?;
            let mut detail = json!({
                "w": w, "t": t, "k": k, "sets_only": sets_only,
                "nodes": r.nodes, "states": r.states,
            });
            if let (Verdict::Feasible(f), true) = (&r.verdict, *table) {
                let rows: Vec<_> = f
                    .entries()
                    .into_iter()
                    .map(|(tasks, a)| json!([tasks.to_string(), a.coords()]))
                    .collect();
                detail["table"] = json!(rows);
            }
            emit(out, "exact", r.verdict.label(), seed, detail)?;
        }
        OracleCommand::Audit {
            alg,
            sets_only,
            size_varying,
        } => {
            let p = alg.params(seed)?;
            let f = Assigner::build(&p)?;
            let scope = AuditScope {
                sets_only: *sets_only,
                size_varying: *size_varying,
            };
            let r = exhaustive_max_switching(f.as_fn(), scope)?;
            let argmax = r.argmax.as_ref().map(|(a, b)| (a.to_string(), b.to_string()));
            let detail = json!({
                "algorithm": p.algorithm.name(), "w": p.w, "t": p.t, "c": p.c,
                "sets_only": sets_only, "size_varying": size_varying,
                "max_cost": r.max_cost, "argmax": argmax,
                "pairs_checked": r.pairs_checked, "states": r.states,
                "fallback_states": r.fallback_states,
                "structural_bound": f.structural_bound(),
            });
            emit(out, "audit", &format!("max_cost {}", r.max_cost), seed, detail)?;
            if let Some(bound) = f.structural_bound() {
                if r.fallback_states == 0 && r.max_cost > bound {
                    return Err(CliError::Invariant(format!(
                        "max cost {} exceeds the structural bound {bound}",
                        r.max_cost
                    )));
                }
            }
        }
        OracleCommand::Ramsey { alg } => {
            let p = alg.params(seed)?;
            let f = Assigner::build(&p)?;
            let found = ramsey_witness(f.as_fn(), p.w, p.t)?;
            let (verdict, detail) = match &found {
                Some(w) => (
                    "witness",
                    json!({
                        "algorithm": p.algorithm.name(), "w": p.w, "t": p.t,
                        "vertices": w.vertices, "color": w.color, "extreme_cost": w.extreme_cost,
                    }),
                ),
                None => ("none", json!({ "algorithm": p.algorithm.name(), "w": p.w, "t": p.t })),
            };
            emit(out, "ramsey", verdict, seed, detail)?;
        }
        OracleCommand::Disperser {
            n,
            d,
            m,
            k,
            eps,
            budget: b,
        } => {
            let found = disperser_search(*n, *d, *m, *k, *eps, &budget(b)?, seed)?;
            let mut detail = json!({ "n": n, "d": d, "m": m, "k": k, "eps": eps });
            let verdict = match &found {
                Some(f) => {
                    detail["table"] = json!(f.table());
                    detail["required_coverage"] = json!(f.required_coverage());
                    "found"
                }
                None => "none",
            };
            emit(out, "disperser", verdict, seed, detail)?;
        }
    }
    Ok(0)
}
