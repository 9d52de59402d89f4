//! Acceptance suite. Each criterion prints one PASS/FAIL line; the process
//! exits non-zero if any criterion fails.
//!
//! Expected values come from oracles written here, independent of the
//! library: direct recurrences for the max-plus-one rule, a BFS diameter,
//! a brute-force window diameter and plain integer lcm.

use std::collections::VecDeque;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use syncsmith::report::report_json;
use syncsmith_core::adversary::{Adversary, Witness};
use syncsmith_core::bounds::{
    dynamic_state_lower_bound, lcm_upto_factored, Sieve, CHEBYSHEV_CONSTANT,
};
use syncsmith_core::graph::{
    build_two_group_schedule, dynamic_diameter, interval_product, two_group_arc_present,
    ActivationSchedule, DirectedGraph, DynamicGraph,
};
use syncsmith_core::model::{check_mod_p_sync, execute, Initialization, State, SyncVerdict};
use syncsmith_core::sequence::{lcm_upto, LcmPrefixes};
use syncsmith_core::zoo::{enumerable_catalog, FloodMax, ModMax};

type Outcome = Result<String, String>;

/// Name, check, runtime budget.
type Criterion = (&'static str, fn() -> Outcome, Duration);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

/// `(max(a, b, …) + 1) mod p`, the max-plus-one rule written out.
fn max_rule(p: u64, heard: &[u64]) -> u64 {
    (heard.iter().copied().max().unwrap() + 1) % p
}

/// `q^0 .. q^{len-1}` of `q^{r+2} = (max(q^{r+1}, q^r) + 1) mod p`.
fn max_rule_tape(p: u64, q0: u64, q1: u64, len: usize) -> Vec<u64> {
    let mut v = vec![q0, q1];
    while v.len() < len {
        let n = v.len();
        v.push(max_rule(p, &[v[n - 1], v[n - 2]]));
    }
    v.truncate(len);
    v
}

/// Smallest `(ell, period)` with `v[r + period] = v[r]` for all `r ≥ ell − 1`
/// inside the tape, by exhaustive search.
fn brute_certificate<T: PartialEq>(tapes: &[&[T]], max_period: usize) -> (usize, usize) {
    let len = tapes[0].len();
    for total in 2..len {
        for ell in 1..total {
            let period = total - ell;
            if period > max_period {
                continue;
            }
            if tapes
                .iter()
                .all(|v| (ell - 1..len - period).all(|r| v[r + period] == v[r]))
            {
                return (ell, period);
            }
        }
    }
    panic!("tape too short for a certificate");
}

fn small_lcm(a: u64) -> u64 {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    (1..=a).fold(1, |acc, k| acc / gcd(acc, k) * k)
}

fn directed_ring_report(
    p: u64,
    a: u64,
    b: u64,
) -> Result<(ModMax, syncsmith_core::adversary::CounterexampleReport), String> {
    let alg = ModMax::new(p);
    let r = Adversary::new(&alg)
        .forge_directed_ring(State(a), State(b), 20)
        .map_err(|e| format!("modmax:{p} ({a},{b}): {e}"))?;
    Ok((alg, r))
}

fn criterion_1() -> Outcome {
    let mut forged = 0;
    let mut cells = 0usize;
    for p in [2u64, 3, 5] {
        for a in 0..p {
            for b in 0..p {
                let (_, r) = directed_ring_report(p, a, b)?;
                let tape = max_rule_tape(p, a, b, 4 * (p * p) as usize + 8);
                let (ell, period) = brute_certificate(&[&tape], (p * p) as usize);
                ensure!(
                    (r.certificate.ell, r.certificate.period) == (ell, period),
                    "modmax:{p} ({a},{b}): certificate {:?}, oracle ({ell},{period})",
                    r.certificate
                );
                ensure!(r.horizon == 20 * period, "horizon {}", r.horizon);
                ensure!(r.prediction_match, "prediction flag false");
                let size = r.graph.n();
                let long = max_rule_tape(p, a, b, ell + size + r.horizon + 1);
                for t in 0..=r.horizon {
                    for i in 0..size {
                        ensure!(
                            r.trace.state(i, t).0 == long[i + ell + t],
                            "modmax:{p} ({a},{b}): s_{i}({t}) = {} but q^{} = {}",
                            r.trace.state(i, t).0,
                            i + ell + t,
                            long[i + ell + t]
                        );
                        cells += 1;
                    }
                }
                for t in 0..r.horizon {
                    ensure!(
                        r.trace.state(1, t) == r.trace.state(0, t + 1),
                        "s_1({t}) ≠ s_0({})",
                        t + 1
                    );
                }
                ensure!(
                    !r.verdict.is_synchronized(),
                    "modmax:{p} ({a},{b}) synchronized"
                );
                forged += 1;
            }
        }
    }
    Ok(format!(
        "{forged} rings, {cells} cells match the closed form"
    ))
}

fn criterion_2() -> Outcome {
    let mut forged = 0;
    for p in [2u64, 3] {
        for p0 in 0..p {
            for q0 in 0..p {
                for q1 in 0..p {
                    let alg = ModMax::new(p);
                    let r = Adversary::new(&alg)
                        .forge_bidirectional_ring(State(p0), State(q0), State(q1), 20)
                        .map_err(|e| format!("modmax:{p} ({p0},{q0},{q1}): {e}"))?;
                    // p^{r+1} = τ(p^r, {q^r, p^r, q^{r+1}}), q^{r+1} = τ(q^r, {p^{r−1}, q^r, p^r}) for r ≥ 1
                    let len = 200 + r.horizon + r.graph.n();
                    let (mut pv, mut qv) = (vec![p0], vec![q0, q1]);
                    while pv.len() < len {
                        let k = pv.len() - 1;
                        pv.push(max_rule(p, &[qv[k], pv[k], qv[k + 1]]));
                        let k = qv.len() - 1;
                        qv.push(max_rule(p, &[pv[k - 1], qv[k], pv[k]]));
                    }
                    qv.truncate(len);
                    let (ell, period) =
                        brute_certificate(&[&pv[..], &qv[..]], 2 * (p * p * p) as usize);
                    ensure!(
                        (r.certificate.ell, r.certificate.period) == (ell, period),
                        "modmax:{p} ({p0},{q0},{q1}): certificate {:?}, oracle ({ell},{period})",
                        r.certificate
                    );
                    let size = r.graph.n();
                    for t in 0..=r.horizon {
                        for i in 0..size {
                            let idx = ell + i / 2 + t;
                            let want = if i % 2 == 0 { qv[idx] } else { pv[idx] };
                            ensure!(
                                r.trace.state(i, t).0 == want,
                                "modmax:{p} ({p0},{q0},{q1}): s_{i}({t}) mismatch"
                            );
                        }
                    }
                    for t in 0..r.horizon {
                        ensure!(
                            r.trace.state(2, t) == r.trace.state(0, t + 1),
                            "s_2({t}) ≠ s_0({})",
                            t + 1
                        );
                    }
                    ensure!(
                        r.prediction_match && !r.verdict.is_synchronized(),
                        "verdict"
                    );
                    forged += 1;
                }
            }
        }
    }
    Ok(format!(
        "{forged} bidirectional rings match the closed form"
    ))
}

fn criterion_3() -> Outcome {
    let alg = ModMax::new(3);
    let mut region = 0;
    for n in [4usize, 10, 25] {
        for a in 0..3 {
            for b in 0..3 {
                let r = Adversary::new(&alg)
                    .forge_ring_prefix(State(a), State(b), n)
                    .map_err(|e| format!("n={n} ({a},{b}): {e}"))?;
                let tape = max_rule_tape(3, a, b, 3 * n + 40);
                let (ell, _) = brute_certificate(&[&tape[..40]], 9);
                for t in 0..n {
                    for j in t..n {
                        ensure!(
                            r.trace.state(j, t).0 == tape[ell + t + j],
                            "n={n} ({a},{b}): s_{j}({t}) ≠ q^{}",
                            ell + t + j
                        );
                        region += 1;
                    }
                }
                ensure!(
                    r.trace.state(n - 1, n - 3) == r.trace.state(n - 2, n - 2),
                    "n={n}: s_{}({}) ≠ s_{}({})",
                    n - 1,
                    n - 3,
                    n - 2,
                    n - 2
                );
                let early = check_mod_p_sync(&r.trace, 3, r.horizon - (n - 3))
                    .map_err(|e| e.to_string())?;
                ensure!(
                    !early.is_synchronized(),
                    "n={n}: synchronized by round {}",
                    n - 3
                );
            }
        }
    }
    Ok(format!(
        "{region} region cells, collisions at (n−1, n−3) for n ∈ {{4, 10, 25}}"
    ))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    for case in 0..1000 {
        let size = rng.gen_range(2..=7usize);
        let f: Vec<usize> = (0..size).map(|_| rng.gen_range(0..size)).collect();
        let period = small_lcm(size as u64) as usize;
        let mut x = vec![rng.gen_range(0..size)];
        while x.len() < 3 * period {
            x.push(f[*x.last().unwrap()]);
        }
        for t in period - 1..x.len() - period {
            ensure!(
                x[t + period] == x[t],
                "case {case}: |X| = {size}, f = {f:?}, t = {t}"
            );
        }
    }
    Ok("1000 random recurrences normalize at |X|^!".into())
}

/// Cherry family for the max-plus-one rule, straight from the three rules.
fn max_rule_cherries(p: u64, q00: u64, l: usize, k_max: usize) -> Vec<Vec<u64>> {
    let isolated = |q: u64| (q + 1) % p;
    let row_from = |start: u64| {
        let mut row = vec![start];
        while row.len() < 4 * l {
            row.push(isolated(*row.last().unwrap()));
        }
        row
    };
    let mut rows = vec![row_from(q00), row_from(q00)];
    for k in 2..=k_max {
        let own = rows[k - 2][2 * l - 1];
        let mut heard = vec![own];
        heard.extend_from_slice(&rows[k - 1][l..2 * l]);
        rows.push(row_from(max_rule(p, &heard)));
    }
    rows
}

fn two_group_reports() -> Result<Vec<String>, String> {
    let mut out = Vec::new();
    for (p, l) in [(2u64, 2usize), (3, 6)] {
        let alg = ModMax::new(p);
        ensure!(small_lcm(p) as usize == l, "lcm");
        let r = Adversary::new(&alg)
            .forge_two_group(State(0), 8)
            .map_err(|e| format!("modmax:{p}: {e}"))?;
        out.push(report_json(&alg, &r).to_string());
    }
    Ok(out)
}

fn criterion_5() -> Outcome {
    let k_max = 8;
    let mut checked = 0;
    for (p, l) in [(2u64, 2usize), (3, 6)] {
        let alg = ModMax::new(p);
        for q00 in 0..p {
            let r = Adversary::new(&alg)
                .forge_two_group(State(q00), k_max)
                .map_err(|e| format!("modmax:{p}: {e}"))?;
            ensure!(r.graph.n() == 2 * l, "modmax:{p}: {} nodes", r.graph.n());
            ensure!(r.horizon == 2 * k_max * l + 1, "horizon {}", r.horizon);
            let rows = max_rule_cherries(p, q00, l, k_max);
            for k in 1..=k_max {
                for i in 0..2 * l {
                    let lag = (i >= l) != (k % 2 == 1);
                    let row = if lag { k - 1 } else { k };
                    let want = rows[row][2 * l - 1 - i % l];
                    let got = r.trace.state(i, 2 * k * l).0;
                    ensure!(
                        got == want,
                        "modmax:{p} q00={q00}: s_{i}({}) = {got}, expected {want}",
                        2 * k * l
                    );
                    checked += 1;
                }
            }
            let mut k = 1;
            while 4 * k * l < r.horizon {
                let t = 4 * k * l;
                ensure!(
                    r.trace.state(0, t) == r.trace.state(1, t + 1),
                    "s_0({t}) ≠ s_1({})",
                    t + 1
                );
                ensure!(
                    r.trace.state(0, t).0 == rows[2 * k][2 * l - 1],
                    "s_0({t}) ≠ q_{}^{}",
                    2 * k,
                    2 * l - 1
                );
                k += 1;
            }
            ensure!(
                r.witnesses
                    .iter()
                    .filter(|w| matches!(w, Witness::StateEquality { .. }))
                    .count()
                    == k - 1,
                "witness count"
            );
            ensure!(
                r.prediction_match && !r.verdict.is_synchronized(),
                "modmax:{p}: verdict"
            );
        }
    }
    Ok(format!(
        "{checked} cells at rounds 2kL match the cherry oracle"
    ))
}

/// Smallest `d` with every window of `d` rounds starting in `starts`
/// complete, by composing the rounds one by one.
fn window_diameter(
    g: &DynamicGraph,
    starts: std::ops::RangeInclusive<usize>,
    d_max: usize,
) -> Option<usize> {
    (1..=d_max).find(|&d| {
        starts.clone().all(|s| {
            let w = interval_product(g, s, s + d - 1).unwrap();
            w.len() == g.n() * g.n()
        })
    })
}

fn criterion_6() -> Outcome {
    let mut measured = Vec::new();
    for l in [2usize, 3, 4, 6] {
        let g = build_two_group_schedule(l).map_err(|e| e.to_string())?;
        let n = 2 * l;
        let base = g.prefix().len();
        for t in base + 1..=base + 3 * 4 * l {
            ensure!(
                g.arcs_at(t) == g.arcs_at(t + 4 * l),
                "L={l}: round {t} differs from {}",
                t + 4 * l
            );
            for i in 0..n {
                for j in 0..n {
                    ensure!(
                        g.arcs_at(t).contains(i, j) == two_group_arc_present(l, i, j, t),
                        "L={l}: arc ({i},{j}) at round {t}"
                    );
                }
            }
        }
        let starts = g.schedule().starts();
        for t in 1..=base + 3 * 4 * l {
            for (i, j) in g.arcs_at(t).arcs() {
                ensure!(
                    i == j || (starts[i] <= t && starts[j] <= t),
                    "L={l}: arc ({i},{j}) at round {t} reaches a passive node"
                );
            }
        }
        let d = dynamic_diameter(&g, l + 2, 8 * l).ok_or(format!("L={l}: no finite diameter"))?;
        let oracle = window_diameter(&g, l + 2..=base + 4 * l + 1, 8 * l);
        ensure!(
            oracle == Some(d),
            "L={l}: diameter {d}, window oracle {oracle:?}"
        );
        ensure!(d <= 6 * l, "L={l}: diameter {d} > 6L = {}", 6 * l);
        measured.push(format!("L={l}: {d}"));
    }
    Ok(format!("diameters from round L+2: {}", measured.join(", ")))
}

fn criterion_7() -> Outcome {
    let mut running = LcmPrefixes::new();
    for k in 1..=5000u64 {
        let iterative = running.next().unwrap();
        ensure!(
            lcm_upto_factored(k) == iterative,
            "k = {k}: factored lcm differs"
        );
    }
    for (k, want) in [(1u64, 1u64), (4, 12), (10, 2520)] {
        ensure!(lcm_upto(k) == want.into(), "lcm(1..={k}) ≠ {want}");
        ensure!(small_lcm(k) == want, "oracle lcm(1..={k}) ≠ {want}");
    }
    let limit = 100_000u64;
    let sieve = Sieve::new(limit as usize);
    let mut pi_failures = Vec::new();
    let mut log_failures = 0;
    for k in 2..=limit {
        let pi_ok = sieve.prime_count(k) as f64 <= CHEBYSHEV_CONSTANT * k as f64 / (k as f64).ln();
        let log_ok = sieve.log_lcm_upto(k) <= CHEBYSHEV_CONSTANT * k as f64;
        if !pi_ok {
            pi_failures.push(k);
        }
        if !log_ok {
            log_failures += 1;
        }
        ensure!(
            sieve.chebyshev_check(k) == (pi_ok && log_ok),
            "k = {k}: chebyshev_check disagrees with the direct evaluation"
        );
    }
    ensure!(
        log_failures == 0,
        "log lcm(1..=k) ≤ 1.11k fails for {log_failures} values of k"
    );
    ensure!(
        pi_failures.is_empty(),
        "lcm cross-check and spot values hold, log lcm(1..=k) ≤ 1.11k holds for all k, but \
         π(k) ≤ 1.11k/ln k fails for {} values of k ≤ {limit} (first {}, last {}; π(7) = 4 > 3.99)",
        pi_failures.len(),
        pi_failures[0],
        pi_failures[pi_failures.len() - 1]
    );
    Ok("lcm cross-check to 5000, spot values, Chebyshev bound to 10^5".into())
}

fn criterion_8() -> Outcome {
    let mut rows = Vec::new();
    for alg in enumerable_catalog() {
        let q = alg.state_count().unwrap() as u64;
        let size = 2 * small_lcm(q);
        let lb = dynamic_state_lower_bound(size);
        ensure!(q >= lb, "{}: |Q| = {q} < {lb} for n = {size}", alg.name());
        rows.push(format!("{}:{size}→{lb}", alg.name()));
    }
    Ok(rows.join(" "))
}

fn bfs_diameter(g: &DirectedGraph) -> usize {
    let n = g.n();
    let mut worst = 1;
    for s in 0..n {
        let mut dist = vec![usize::MAX; n];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for v in g.out_neighbors(u) {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        worst = worst.max(*dist.iter().max().unwrap());
    }
    worst
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
    let mut worst_slack = usize::MAX;
    for case in 0..200 {
        let n = rng.gen_range(1..=20usize);
        let p = rng.gen_range(2..=5u64);
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let mut arcs: Vec<(usize, usize)> = (0..n).map(|i| (i, i)).collect();
        arcs.extend((0..n).map(|k| (order[k], order[(k + 1) % n])));
        for _ in 0..rng.gen_range(0..=2 * n) {
            arcs.push((rng.gen_range(0..n), rng.gen_range(0..n)));
        }
        let base = DirectedGraph::from_arcs(n, arcs).unwrap();
        let diameter = bfs_diameter(&base);
        let starts: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=3 * n)).collect();
        let schedule = ActivationSchedule::diffusive_closure(&base, starts).unwrap();
        let last = schedule.last_start();
        let starts = schedule.starts().to_vec();
        for (i, j) in base.arcs() {
            ensure!(
                starts[j] <= starts[i] + 1,
                "case {case}: schedule not diffusive"
            );
        }
        let g = DynamicGraph::static_with_schedule(&base, schedule).unwrap();
        let init: Vec<State> = (0..n).map(|_| State(rng.gen_range(0..4))).collect();
        let min_suffix = 2 * p as usize * n;
        let horizon = last + diameter + min_suffix;
        let alg = FloodMax::new(p);
        let trace = execute(&alg, &g, &init, Initialization::SelfStabilizing, horizon)
            .map_err(|e| e.to_string())?;
        match check_mod_p_sync(&trace, p, min_suffix).map_err(|e| e.to_string())? {
            SyncVerdict::Synchronized { t0, .. } => {
                ensure!(
                    t0 <= last + diameter,
                    "case {case}: t0 = {t0} > {last} + {diameter}"
                );
                worst_slack = worst_slack.min(last + diameter - t0);
            }
            v => return Err(format!("case {case}: n = {n}, {v:?}")),
        }
    }
    Ok(format!(
        "200 flood-max runs synchronized, min slack {worst_slack}"
    ))
}

fn criterion_10() -> Outcome {
    let ring_json = || -> Result<Vec<String>, String> {
        let mut out = Vec::new();
        for p in [2u64, 3, 5] {
            for a in 0..p {
                for b in 0..p {
                    let (alg, r) = directed_ring_report(p, a, b)?;
                    out.push(report_json(&alg, &r).to_string());
                }
            }
        }
        Ok(out)
    };
    let first = (ring_json()?, two_group_reports()?);
    let second = (ring_json()?, two_group_reports()?);
    ensure!(
        first.0 == second.0,
        "directed-ring reports differ between runs"
    );
    ensure!(first.1 == second.1, "two-group reports differ between runs");
    let bytes: usize = first.0.iter().chain(&first.1).map(String::len).sum();
    Ok(format!(
        "{} reports, {bytes} bytes, identical",
        first.0.len() + first.1.len()
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        (
            "directed-ring counterexamples",
            criterion_1,
            Duration::from_secs(5),
        ),
        (
            "bidirectional-ring counterexamples",
            criterion_2,
            Duration::from_secs(10),
        ),
        (
            "ring-prefix time bound",
            criterion_3,
            Duration::from_secs(5),
        ),
        (
            "first-order normalization",
            criterion_4,
            Duration::from_secs(5),
        ),
        (
            "two-group counterexamples",
            criterion_5,
            Duration::from_secs(10),
        ),
        (
            "two-group schedule validity",
            criterion_6,
            Duration::from_secs(20),
        ),
        ("number theory", criterion_7, Duration::from_secs(30)),
        (
            "state bound consistency",
            criterion_8,
            Duration::from_secs(1),
        ),
        (
            "flood-max positive control",
            criterion_9,
            Duration::from_secs(20),
        ),
        ("report determinism", criterion_10, Duration::from_secs(30)),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome =
            catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > budget => {
                Err(format!("{detail}; took {elapsed:.2?}, budget {budget:.0?}"))
            }
            other => other,
        };
        match outcome {
            Ok(detail) => println!(
                "criterion {:>2} PASS  {name} ({elapsed:.2?}): {detail}",
                i + 1
            ),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({elapsed:.2?}): {why}", i + 1);
            }
        }
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
