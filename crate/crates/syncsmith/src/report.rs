//! JSON renderings. Objects go through `serde_json::Value`, whose maps keep
//! keys sorted, so output is byte-stable.

use std::io::Write;

use serde_json::{json, Value};
use syncsmith_core::adversary::{Cell, CounterexampleReport, Witness};
use syncsmith_core::bounds::BoundReport;
use syncsmith_core::model::{FiniteAlgorithm, Initialization, State, SyncVerdict, Trace};
use syncsmith_core::sequence::PeriodicityCertificate;

use crate::graph_spec::GraphFile;

fn names(alg: &dyn FiniteAlgorithm, states: &[State]) -> Vec<String> {
    states.iter().map(|&q| alg.state_name(q)).collect()
}

fn cell(c: Cell) -> Value {
    json!({"node": c.node, "round": c.round})
}

pub fn certificate_json(cert: &PeriodicityCertificate) -> Value {
    json!({"ell": cert.ell, "L": cert.period})
}

pub fn verdict_json(verdict: &SyncVerdict) -> Value {
    match *verdict {
        SyncVerdict::Synchronized { t0, offset } => {
            json!({"status": "SYNCHRONIZED", "t0": t0, "offset": offset})
        }
        SyncVerdict::NotSynchronized {
            node,
            round,
            expected,
            actual,
        } => json!({
            "status": "NOT_SYNCHRONIZED",
            "node": node,
            "round": round,
            "expected_clock": expected,
            "actual_clock": actual,
        }),
    }
}

fn witness_json(alg: &dyn FiniteAlgorithm, w: &Witness) -> Value {
    match *w {
        Witness::StateEquality {
            label,
            left,
            right,
            state,
        } => json!({
            "kind": "state_equality",
            "label": label,
            "left": cell(left),
            "right": cell(right),
            "state": alg.state_name(state),
        }),
        Witness::NoEarlySync { up_to_round } => json!({
            "kind": "no_early_sync",
            "up_to_round": up_to_round,
        }),
    }
}

pub fn initialization_name(init: Initialization) -> &'static str {
    match init {
        Initialization::Standard => "standard",
        Initialization::SelfStabilizing => "self-stabilizing",
    }
}

/// Full report: every input needed to replay the execution plus the
/// certificate, witnesses and verdict. The trace itself is exported
/// separately.
pub fn report_json(alg: &dyn FiniteAlgorithm, report: &CounterexampleReport) -> Value {
    let seeds: serde_json::Map<String, Value> = report
        .seeds
        .iter()
        .map(|&(role, q)| (role.to_string(), Value::from(alg.state_name(q))))
        .collect();
    json!({
        "theorem": report.construction.tag(),
        "algorithm": report.algorithm,
        "P": report.period,
        "seeds": seeds,
        "graph": serde_json::to_value(GraphFile::from_graph(&report.graph)).expect("graph serializes"),
        "init": names(alg, &report.init),
        "initialization": initialization_name(report.initialization),
        "horizon": report.horizon,
        "certificate": certificate_json(&report.certificate),
        "prediction_match": report.prediction_match,
        "predictions_checked": report.predictions_checked,
        "witnesses": report.witnesses.iter().map(|w| witness_json(alg, w)).collect::<Vec<_>>(),
        "min_suffix": report.min_suffix,
        "verdict": verdict_json(&report.verdict),
    })
}

pub fn bounds_json(b: &BoundReport) -> Value {
    json!({
        "n": b.n,
        "self_stab_state_lb": b.self_stab_state_lb,
        "self_stab_time_lb": b.self_stab_time_lb,
        "dynamic_state_lb": b.dynamic_state_lb,
        "supporting": {"pi_n": b.pi_n, "log_lcm": b.log_lcm},
    })
}

/// One `{"t", "states", "clocks"}` line per column of the trace.
pub fn write_trace_jsonl(
    out: &mut impl Write,
    alg: &dyn FiniteAlgorithm,
    trace: &Trace,
) -> std::io::Result<()> {
    for t in 0..=trace.horizon() {
        let line = json!({
            "t": t,
            "states": names(alg, trace.column(t)),
            "clocks": trace.clock_column(t),
        });
        writeln!(out, "{line}")?;
    }
    Ok(())
}

/// Single-line rendering, newline-terminated.
pub fn to_compact(value: &Value) -> String {
    let mut s = value.to_string();
    s.push('\n');
    s
}

pub fn to_pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json values serialize");
    s.push('\n');
    s
}
