use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};
use syncsmith_core::adversary::{
    Adversary, CounterexampleReport, DEFAULT_K_MAX, DEFAULT_NODE_BUDGET, DEFAULT_PERIODS,
};
use syncsmith_core::bounds::lower_bounds;
use syncsmith_core::graph::{dynamic_diameter, ActivationSchedule};
use syncsmith_core::model::{
    check_mod_p_sync, default_min_suffix, execute, FiniteAlgorithm, Initialization, State,
};
use syncsmith_core::zoo::{builtin, BUILTIN_FAMILIES};

use crate::error::{exit, CliError, CliResult};
use crate::fsm::load_fsm;
use crate::graph_spec::resolve_graph;
use crate::report::{
    bounds_json, initialization_name, report_json, to_compact, to_pretty, verdict_json,
    write_trace_jsonl,
};

pub const NODE_BUDGET_ENV: &str = "SYNCSMITH_NODE_BUDGET";

#[derive(Debug, Parser)]
#[command(
    name = "syncsmith",
    version,
    about = "Forge and check counterexamples to mod-P clock synchronization"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a counterexample execution against an algorithm.
    Forge(ForgeArgs),
    /// Run an algorithm on a graph and check synchronization.
    Simulate(SimulateArgs),
    /// Dynamic diameter of a graph.
    Diameter(DiameterArgs),
    /// State and time lower bounds for networks of n nodes.
    Bounds(BoundsArgs),
    /// List builtin algorithms.
    Zoo,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct AlgorithmSource {
    /// Builtin algorithm, e.g. modmax:3.
    #[arg(long)]
    builtin: Option<String>,
    /// Transition-table JSON file.
    #[arg(long)]
    fsm: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ForgeArgs {
    /// Construction: 1 directed ring, 2 bidirectional ring, 3 ring prefix,
    /// 4 two-group schedule.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    theorem: u8,
    #[command(flatten)]
    algorithm: AlgorithmSource,
    #[arg(long)]
    q0: Option<String>,
    #[arg(long)]
    q1: Option<String>,
    #[arg(long)]
    p0: Option<String>,
    #[arg(long)]
    q00: Option<String>,
    /// Simulated periods (constructions 1 and 2).
    #[arg(long, default_value_t = DEFAULT_PERIODS)]
    periods: usize,
    /// Ring size (construction 3).
    #[arg(long)]
    n: Option<usize>,
    /// Number of 2L-round blocks (construction 4).
    #[arg(long, default_value_t = DEFAULT_K_MAX)]
    kmax: usize,
    /// Forge every seed choice and emit a JSON array sorted by seed.
    #[arg(long)]
    all_seeds: bool,
    /// Report destination; stdout when omitted or "-".
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the execution trace as JSON lines.
    #[arg(long)]
    emit_trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    algorithm: AlgorithmSource,
    /// Graph spec: ring:directed:L, ring:bidir:m, thm4:L or a JSON file.
    #[arg(long)]
    graph: String,
    /// "uniform:<state>" or a comma-separated list of state names.
    #[arg(long)]
    init: String,
    /// Comma-separated activation rounds replacing the graph's own.
    #[arg(long)]
    starts: Option<String>,
    #[arg(long)]
    horizon: usize,
    /// Rounds the synchronized suffix must span (default 2·P·n).
    #[arg(long)]
    min_suffix: Option<usize>,
    /// Allow initial states outside the initial set.
    #[arg(long)]
    self_stabilizing: bool,
    /// Trace destination (JSON lines).
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DiameterArgs {
    #[arg(long)]
    graph: String,
    /// First window start.
    #[arg(long, default_value_t = 1)]
    from_round: usize,
    /// Largest window length tried.
    #[arg(long)]
    d_max: Option<usize>,
}

#[derive(Debug, Args)]
struct BoundsArgs {
    #[arg(long)]
    n: u64,
}

/// Parses `args` (including the program name), runs the subcommand and
/// returns its exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                exit::USAGE
            } else {
                exit::SUCCESS
            };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(rendered.as_bytes())
            } else {
                stdout.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Forge(a) => forge(a, stdout),
        Command::Simulate(a) => simulate(a, stdout),
        Command::Diameter(a) => diameter(a, stdout),
        Command::Bounds(a) => bounds(a, stdout),
        Command::Zoo => zoo(stdout),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn load_algorithm(src: &AlgorithmSource) -> CliResult<Box<dyn FiniteAlgorithm>> {
    match (&src.builtin, &src.fsm) {
        (Some(name), _) => {
            builtin(name).ok_or_else(|| CliError::usage(format!("unknown builtin {name:?}")))
        }
        (None, Some(path)) => Ok(Box::new(load_fsm(path)?)),
        (None, None) => Err(CliError::usage("one of --builtin or --fsm is required")),
    }
}

fn node_budget() -> CliResult<usize> {
    match std::env::var(NODE_BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("{NODE_BUDGET_ENV}={v:?} is not a node count"))),
        Err(_) => Ok(DEFAULT_NODE_BUDGET),
    }
}

fn parse_state(alg: &dyn FiniteAlgorithm, name: &str) -> CliResult<State> {
    alg.parse_state(name)
        .ok_or_else(|| CliError::usage(format!("{name:?} is not a state of {}", alg.name())))
}

fn seed(
    alg: &dyn FiniteAlgorithm,
    value: &Option<String>,
    flag: &str,
    theorem: u8,
) -> CliResult<State> {
    match value {
        Some(name) => parse_state(alg, name),
        None => Err(CliError::usage(format!(
            "construction {theorem} requires --{flag}"
        ))),
    }
}

fn write_output(path: Option<&Path>, stdout: &mut dyn Write, text: &str) -> CliResult<()> {
    match path {
        Some(p) if p != Path::new("-") => std::fs::write(p, text).map_err(|e| CliError::io(p, e)),
        _ => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}

fn write_trace(
    path: &Path,
    alg: &dyn FiniteAlgorithm,
    trace: &syncsmith_core::model::Trace,
) -> CliResult<()> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut out = BufWriter::new(file);
    write_trace_jsonl(&mut out, alg, trace)
        .and_then(|_| out.flush())
        .map_err(|e| CliError::io(path, e))
}

fn forge_one(
    adversary: &Adversary<'_>,
    args: &ForgeArgs,
    seeds: &[State],
) -> CliResult<CounterexampleReport> {
    let report = match args.theorem {
        1 => adversary.forge_directed_ring(seeds[0], seeds[1], args.periods)?,
        2 => adversary.forge_bidirectional_ring(seeds[0], seeds[1], seeds[2], args.periods)?,
        3 => {
            let n = args
                .n
                .ok_or_else(|| CliError::usage("construction 3 requires --n"))?;
            adversary.forge_ring_prefix(seeds[0], seeds[1], n)?
        }
        _ => adversary.forge_two_group(seeds[0], args.kmax)?,
    };
    Ok(report)
}

/// Every seed tuple of the construction, in lexicographic order of state
/// identifiers.
fn seed_grid(alg: &dyn FiniteAlgorithm, theorem: u8) -> CliResult<Vec<Vec<State>>> {
    if theorem == 4 {
        return Ok(alg.initial_states().iter().map(|&q| vec![q]).collect());
    }
    let states = alg
        .states()
        .ok_or_else(|| CliError::Core(syncsmith_core::Error::Unenumerable(alg.name())))?;
    let arity = if theorem == 2 { 3 } else { 2 };
    let mut grid: Vec<Vec<State>> = vec![Vec::new()];
    for _ in 0..arity {
        grid = grid
            .into_iter()
            .flat_map(|prefix| {
                states.iter().map(move |&q| {
                    let mut next = prefix.clone();
                    next.push(q);
                    next
                })
            })
            .collect();
    }
    Ok(grid)
}

fn forge(args: ForgeArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    let alg = load_algorithm(&args.algorithm)?;
    let adversary = Adversary::new(alg.as_ref()).with_node_budget(node_budget()?);
    if args.theorem == 3 && args.n.is_none() {
        return Err(CliError::usage("construction 3 requires --n"));
    }

    if args.all_seeds {
        if args.emit_trace.is_some() {
            return Err(CliError::usage(
                "--emit-trace cannot be combined with --all-seeds",
            ));
        }
        let grid = seed_grid(alg.as_ref(), args.theorem)?;
        let reports: Vec<CliResult<CounterexampleReport>> = grid
            .par_iter()
            .map(|s| forge_one(&adversary, &args, s))
            .collect();
        let mut values = Vec::with_capacity(reports.len());
        let mut all_hold = true;
        for r in reports {
            let r = r?;
            all_hold &= r.prediction_match && !r.verdict.is_synchronized();
            values.push(report_json(alg.as_ref(), &r));
        }
        write_output(
            args.out.as_deref(),
            stdout,
            &to_compact(&Value::Array(values)),
        )?;
        return Ok(if all_hold {
            exit::SUCCESS
        } else {
            exit::NEGATIVE
        });
    }

    let a = alg.as_ref();
    let t = args.theorem;
    let seeds = match t {
        1 | 3 => vec![seed(a, &args.q0, "q0", t)?, seed(a, &args.q1, "q1", t)?],
        2 => vec![
            seed(a, &args.p0, "p0", t)?,
            seed(a, &args.q0, "q0", t)?,
            seed(a, &args.q1, "q1", t)?,
        ],
        _ => vec![seed(a, &args.q00, "q00", t)?],
    };
    let report = forge_one(&adversary, &args, &seeds)?;
    write_output(
        args.out.as_deref(),
        stdout,
        &to_compact(&report_json(a, &report)),
    )?;
    if let Some(path) = &args.emit_trace {
        write_trace(path, a, &report.trace)?;
    }
    Ok(
        if report.prediction_match && !report.verdict.is_synchronized() {
            exit::SUCCESS
        } else {
            exit::NEGATIVE
        },
    )
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> CliResult<Vec<T>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| CliError::usage(format!("{what}: {s:?} is not valid")))
        })
        .collect()
}

fn simulate(args: SimulateArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    let alg = load_algorithm(&args.algorithm)?;
    let a = alg.as_ref();
    let mut graph = resolve_graph(&args.graph)?;
    if let Some(starts) = &args.starts {
        let starts: Vec<usize> = parse_list(starts, "--starts")?;
        graph = graph.with_schedule(ActivationSchedule::new(starts)?)?;
    }
    let n = graph.n();
    let init = match args.init.strip_prefix("uniform:") {
        Some(name) => vec![parse_state(a, name)?; n],
        None => args
            .init
            .split(',')
            .map(|s| parse_state(a, s.trim()))
            .collect::<CliResult<Vec<_>>>()?,
    };
    let initialization = if args.self_stabilizing {
        Initialization::SelfStabilizing
    } else {
        Initialization::Standard
    };
    let trace = execute(a, &graph, &init, initialization, args.horizon)?;
    let min_suffix = args
        .min_suffix
        .unwrap_or_else(|| default_min_suffix(a.period(), n).min(args.horizon));
    let verdict = check_mod_p_sync(&trace, a.period(), min_suffix)?;
    if let Some(path) = &args.trace {
        write_trace(path, a, &trace)?;
    }
    let summary = json!({
        "algorithm": a.name(),
        "P": a.period(),
        "n": n,
        "horizon": args.horizon,
        "initialization": initialization_name(initialization),
        "min_suffix": min_suffix,
        "verdict": verdict_json(&verdict),
    });
    write_output(None, stdout, &to_pretty(&summary))?;
    Ok(if verdict.is_synchronized() {
        exit::SUCCESS
    } else {
        exit::NEGATIVE
    })
}

fn diameter(args: DiameterArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    let graph = resolve_graph(&args.graph)?;
    if args.from_round == 0 {
        return Err(CliError::usage("--from-round starts at 1"));
    }
    // A finite diameter never exceeds n windows of one full schedule.
    let d_max = args
        .d_max
        .unwrap_or_else(|| graph.n().max(1) * (graph.explicit_rounds() + args.from_round));
    let value = dynamic_diameter(&graph, args.from_round, d_max);
    let text = match value {
        Some(d) => format!("{d}\n"),
        None => "none\n".to_string(),
    };
    write_output(None, stdout, &text)?;
    Ok(if value.is_some() {
        exit::SUCCESS
    } else {
        exit::NEGATIVE
    })
}

fn bounds(args: BoundsArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    let report = lower_bounds(args.n)?;
    write_output(None, stdout, &to_pretty(&bounds_json(&report)))?;
    Ok(exit::SUCCESS)
}

fn zoo(stdout: &mut dyn Write) -> CliResult<i32> {
    let mut text = String::new();
    for (name, about) in BUILTIN_FAMILIES {
        text.push_str(&format!("{name:<14} {about}\n"));
    }
    write_output(None, stdout, &text)?;
    Ok(exit::SUCCESS)
}
