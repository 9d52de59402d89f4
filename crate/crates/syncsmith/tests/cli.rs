use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;
use syncsmith::cli::run;

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("syncsmith").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn fsm_path(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "fsm", name].iter().collect();
    p.to_string_lossy().into_owned()
}

#[test]
fn forge_directed_ring_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let (code, _, err) = invoke(&[
        "forge",
        "--theorem",
        "1",
        "--builtin",
        "modmax:2",
        "--q0",
        "0",
        "--q1",
        "0",
        "--periods",
        "20",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["certificate"]["L"], 3);
    assert_eq!(report["certificate"]["ell"], 1);
    assert_eq!(report["theorem"], "T1");
    assert_eq!(report["prediction_match"], true);
    assert_eq!(report["verdict"]["status"], "NOT_SYNCHRONIZED");
    assert_eq!(report["init"], serde_json::json!(["0", "1", "0"]));
    assert_eq!(report["witnesses"].as_array().unwrap().len(), 60);
}

#[test]
fn forge_two_group_on_four_nodes() {
    let (code, out, _) = invoke(&[
        "forge",
        "--theorem",
        "4",
        "--builtin",
        "modmax:2",
        "--q00",
        "0",
        "--kmax",
        "8",
    ]);
    assert_eq!(code, 0);
    let report: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["graph"]["n"], 4);
    assert_eq!(report["graph"]["starts"], serde_json::json!([2, 3, 2, 3]));
}

#[test]
fn missing_seed_is_a_usage_error() {
    let (code, _, err) = invoke(&[
        "forge",
        "--theorem",
        "1",
        "--builtin",
        "modmax:2",
        "--q0",
        "0",
    ]);
    assert_eq!(code, 64);
    assert!(err.contains("--q1"));
    assert_eq!(
        invoke(&[
            "forge",
            "--theorem",
            "3",
            "--builtin",
            "modmax:2",
            "--q0",
            "0",
            "--q1",
            "0"
        ])
        .0,
        64
    );
    assert_eq!(
        invoke(&["forge", "--theorem", "5", "--builtin", "modmax:2"]).0,
        64
    );
    assert_eq!(
        invoke(&[
            "forge",
            "--theorem",
            "1",
            "--builtin",
            "modmax:2",
            "--q0",
            "7",
            "--q1",
            "0"
        ])
        .0,
        64
    );
    assert_eq!(
        invoke(&[
            "forge",
            "--theorem",
            "1",
            "--builtin",
            "nosuch",
            "--q0",
            "0",
            "--q1",
            "0"
        ])
        .0,
        64
    );
    assert_eq!(
        invoke(&[
            "forge",
            "--theorem",
            "1",
            "--builtin",
            "floodmax",
            "--q0",
            "0",
            "--q1",
            "0"
        ])
        .0,
        64
    );
    assert_eq!(invoke(&["frobnicate"]).0, 64);
}

#[test]
fn help_exits_cleanly() {
    let (code, out, _) = invoke(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("forge"));
}

#[test]
fn trace_export_has_one_line_per_column() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.jsonl");
    let (code, _, _) = invoke(&[
        "forge",
        "--theorem",
        "3",
        "--builtin",
        "modmax:3",
        "--q0",
        "0",
        "--q1",
        "0",
        "--n",
        "10",
        "--emit-trace",
        trace.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&trace).unwrap();
    let lines: Vec<Value> = text
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 15);
    assert_eq!(lines[7]["t"], 7);
    assert_eq!(lines[7]["states"][9], lines[8]["states"][8]);
    assert_eq!(lines[0]["clocks"].as_array().unwrap().len(), 10);
}

#[test]
fn all_seeds_is_sorted_and_deterministic() {
    let args = [
        "forge",
        "--theorem",
        "1",
        "--builtin",
        "modmax:3",
        "--all-seeds",
    ];
    let (code, first, _) = invoke(&args);
    assert_eq!(code, 0);
    let (_, second, _) = invoke(&args);
    assert_eq!(first, second);
    let reports: Value = serde_json::from_str(&first).unwrap();
    let seeds: Vec<(String, String)> = reports
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            (
                r["seeds"]["q0"].as_str().unwrap().into(),
                r["seeds"]["q1"].as_str().unwrap().into(),
            )
        })
        .collect();
    assert_eq!(seeds.len(), 9);
    let mut sorted = seeds.clone();
    sorted.sort();
    assert_eq!(seeds, sorted);
}

#[test]
fn forge_from_table_file() {
    let path = fsm_path("modmax2.json");
    let (code, out, err) = invoke(&[
        "forge",
        "--theorem",
        "1",
        "--fsm",
        &path,
        "--q0",
        "zero",
        "--q1",
        "zero",
    ]);
    assert_eq!(code, 0, "{err}");
    let report: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["certificate"]["L"], 3);
    assert_eq!(report["init"], serde_json::json!(["zero", "one", "zero"]));
    let (code, _, _) = invoke(&[
        "forge",
        "--theorem",
        "2",
        "--fsm",
        &fsm_path("parity3-saturating.json"),
        "--all-seeds",
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        invoke(&[
            "forge",
            "--theorem",
            "1",
            "--fsm",
            "/no/such.json",
            "--q0",
            "a",
            "--q1",
            "a"
        ])
        .0,
        66
    );
}

#[test]
fn simulate_verdicts() {
    let (code, out, _) = invoke(&[
        "simulate",
        "--builtin",
        "floodmax",
        "--graph",
        "ring:directed:5",
        "--starts",
        "1,2,3,4,5",
        "--init",
        "uniform:0",
        "--horizon",
        "40",
    ]);
    assert_eq!(code, 0);
    let summary: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(summary["verdict"]["status"], "SYNCHRONIZED");
    assert!(summary["verdict"]["t0"].as_u64().unwrap() <= 9);

    // the directed-ring counterexample, replayed by hand
    let (code, _, _) = invoke(&[
        "simulate",
        "--builtin",
        "modmax:2",
        "--graph",
        "ring:directed:3",
        "--init",
        "0,1,0",
        "--self-stabilizing",
        "--horizon",
        "60",
    ]);
    assert_eq!(code, 1);
    // non-initial states need the self-stabilizing flag
    let table = fsm_path("modmax2.json");
    let replay = [
        "simulate",
        "--fsm",
        &table,
        "--graph",
        "ring:directed:3",
        "--init",
        "zero,one,zero",
        "--horizon",
        "60",
    ];
    assert_eq!(invoke(&replay).0, 64);
    let mut flagged = replay.to_vec();
    flagged.push("--self-stabilizing");
    assert_eq!(invoke(&flagged).0, 1);
    assert_eq!(
        invoke(&[
            "simulate",
            "--builtin",
            "modmax:2",
            "--graph",
            "ring:sideways:3",
            "--init",
            "uniform:0",
            "--horizon",
            "9"
        ])
        .0,
        64
    );
}

#[test]
fn simulate_writes_trace_with_state_names() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.jsonl");
    let (code, _, _) = invoke(&[
        "simulate",
        "--fsm",
        &fsm_path("modmax2.json"),
        "--graph",
        "ring:bidir:4",
        "--init",
        "uniform:zero",
        "--horizon",
        "20",
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let first = std::fs::read_to_string(&trace)
        .unwrap()
        .lines()
        .nth(1)
        .unwrap()
        .to_string();
    assert_eq!(
        first,
        r#"{"clocks":[1,1,1,1],"states":["one","one","one","one"],"t":1}"#
    );
}

#[test]
fn diameter_values() {
    assert_eq!(
        invoke(&["diameter", "--graph", "ring:directed:6"]),
        (0, "5\n".into(), String::new())
    );
    let (code, out, _) = invoke(&["diameter", "--graph", "thm4:4", "--from-round", "6"]);
    assert_eq!(code, 0);
    assert!(out.trim().parse::<usize>().unwrap() <= 24);
    let (code, out, _) = invoke(&["diameter", "--graph", "thm4:4"]);
    assert_eq!((code, out.as_str()), (1, "none\n"));

    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("k4.json");
    let arcs: Vec<[usize; 2]> = (0..4).flat_map(|i| (0..4).map(move |j| [i, j])).collect();
    let doc = serde_json::json!({"n": 4, "prefix": [], "period": [arcs], "starts": [1, 1, 1, 1]});
    std::fs::write(&file, doc.to_string()).unwrap();
    assert_eq!(
        invoke(&["diameter", "--graph", file.to_str().unwrap()]).1,
        "1\n"
    );
    assert_eq!(
        invoke(&[
            "diameter",
            "--graph",
            dir.path().join("gone.json").to_str().unwrap()
        ])
        .0,
        66
    );
    std::fs::write(&file, "{\"n\": 2}").unwrap();
    assert_eq!(
        invoke(&["diameter", "--graph", file.to_str().unwrap()]).0,
        64
    );
}

#[test]
fn bounds_output() {
    let (code, out, _) = invoke(&["bounds", "--n", "4"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(
        (
            v["self_stab_state_lb"].as_u64(),
            v["self_stab_time_lb"].as_u64(),
            v["dynamic_state_lb"].as_u64()
        ),
        (Some(5), Some(2), Some(1))
    );
    let v: Value = serde_json::from_str(&invoke(&["bounds", "--n", "19"]).1).unwrap();
    assert_eq!(v["dynamic_state_lb"], 3);
    assert_eq!(invoke(&["bounds", "--n", "3"]).0, 64);
}

#[test]
fn zoo_lists_builtins() {
    let (code, out, _) = invoke(&["zoo"]);
    assert_eq!(code, 0);
    assert!(out.contains("modmax:P") && out.contains("floodmax"));
}

#[test]
fn binary_honours_node_budget() {
    let bin = env!("CARGO_BIN_EXE_syncsmith");
    let status = Command::new(bin)
        .args([
            "forge",
            "--theorem",
            "4",
            "--builtin",
            "modmax:3",
            "--q00",
            "0",
        ])
        .env("SYNCSMITH_NODE_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&status.stderr).contains("12"));
    let ok = Command::new(bin)
        .args([
            "forge",
            "--theorem",
            "4",
            "--builtin",
            "modmax:3",
            "--q00",
            "0",
        ])
        .env("SYNCSMITH_NODE_BUDGET", "12")
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let bad = Command::new(bin)
        .args([
            "forge",
            "--theorem",
            "1",
            "--builtin",
            "modmax:2",
            "--q0",
            "0",
            "--q1",
            "0",
        ])
        .env("SYNCSMITH_NODE_BUDGET", "lots")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(64));
}
