//! One test per acceptance criterion; each prints a PASS or FAIL line.
//!
//! Run with `cargo test -p fibmachine-cli --test acceptance -- --nocapture`
//! to see the lines of passing criteria too.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use fibmachine::chain::{
    beta_eigen_residual, classify, construct_positive_recurrent, sample_step, seeded_rng,
    stationarity_residual, stationary_measure, transition_dist, transition_matrix, ChainClass,
    ProbSeq, TailRule,
};
use fibmachine::numeration::Numeration;
use fibmachine::odometer::{succ_carry, succ_transducer};
use fibmachine::render::{scan_grid, GridSpec};
use fibmachine::spectrum::{
    eigen_residual, fibered_pair, in_point_spectrum, non_connectedness_test, phi_orbit,
    q_fib_orbit, Connectivity, EscapeConfig, Polynomial,
};
use num_complex::Complex64;
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn report(id: &str, what: &str, failures: &[String], elapsed: Option<(Duration, Duration)>) {
    let mut failures = failures.to_vec();
    let timing = match elapsed {
        Some((took, limit)) => {
            if took >= limit {
                failures.push(format!("took {took:.2?}, limit {limit:.0?}"));
            }
            format!(" [{took:.2?}]")
        }
        None => String::new(),
    };
    if failures.is_empty() {
        println!("PASS criterion {id}: {what}{timing}");
    } else {
        println!("FAIL criterion {id}: {what}{timing}");
        for f in failures.iter().take(10) {
            println!("    {f}");
        }
        panic!("criterion {id} failed with {} problem(s)", failures.len());
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Deterministic pseudo-random points in `[-half, half]^2`.
fn sample_points(count: usize, half: f64, seed: u64) -> Vec<Complex64> {
    use rand_like::next;
    let mut state = seed;
    (0..count)
        .map(|_| {
            c(
                (2.0 * next(&mut state) - 1.0) * half,
                (2.0 * next(&mut state) - 1.0) * half,
            )
        })
        .collect()
}

mod rand_like {
    /// SplitMix64 step mapped to `[0, 1)`; keeps the sample independent of the library RNG.
    pub fn next(state: &mut u64) -> f64 {
        *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = *state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^= z >> 31;
        (z >> 11) as f64 / (1u64 << 53) as f64
    }
}

fn three_descriptors() -> Vec<(&'static str, ProbSeq)> {
    vec![
        ("all ones", ProbSeq::all_ones()),
        ("constant 0.5", ProbSeq::constant(0.5).unwrap()),
        (
            "decreasing prefix",
            ProbSeq::explicit(
                vec![1.0, 0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3],
                TailRule::RepeatLast,
            )
            .unwrap(),
        ),
    ]
}

#[test]
fn criterion_01_numeration() {
    let start = Instant::now();
    let sys = Numeration::fibonacci();
    let mut failures = Vec::new();
    for n in 0..=100_000u64 {
        let back = sys.decode(&sys.encode(n));
        if back.as_ref().ok() != Some(&n) {
            failures.push(format!("decode(encode({n})) = {back:?}"));
        }
    }
    for (n, word) in [(12u64, "10101"), (17, "100101")] {
        if sys.encode(n).to_string() != word {
            failures.push(format!("encode({n}) = {}", sys.encode(n)));
        }
    }
    report(
        "1",
        "decode(encode(n)) = n for n <= 1e5; encode(12) = 10101, encode(17) = 100101",
        &failures,
        Some((start.elapsed(), Duration::from_secs(1))),
    );
}

#[test]
fn criterion_02_odometer() {
    let start = Instant::now();
    let sys = Numeration::fibonacci();
    let mut failures = Vec::new();
    for n in 0..=100_000u64 {
        let w = sys.encode(n);
        let want = sys.encode(n + 1);
        let (carried, _) = succ_carry(&w).unwrap();
        let run = succ_transducer(&w).unwrap();
        if carried != want || run.output != want {
            failures.push(format!(
                "{n}: carry {carried}, transducer {}, want {want}",
                run.output
            ));
        }
    }
    for (from, to) in [("100", "101"), ("101", "1000"), ("100101", "101000")] {
        let got = succ_transducer(&from.parse().unwrap())
            .unwrap()
            .output
            .to_string();
        if got != to {
            failures.push(format!("succ({from}) = {got}, want {to}"));
        }
    }
    report(
        "2",
        "succ_carry = succ_transducer = n + 1 for n <= 1e5, worked cases 3->4, 4->5, 17->18",
        &failures,
        Some((start.elapsed(), Duration::from_secs(5))),
    );
}

/// Upper-left 14x10 corner of the transition operator, transcribed term by term.
const TABLE: [[&str; 10]; 14] = [
    ["1-p1", "p1", "0", "0", "0", "0", "0", "0", "0", "0"],
    [
        "p1(1-p2)", "1-p1", "p1p2", "0", "0", "0", "0", "0", "0", "0",
    ],
    [
        "p1(1-p2)", "0", "1-p1", "p1p2", "0", "0", "0", "0", "0", "0",
    ],
    ["0", "0", "0", "1-p1", "p1", "0", "0", "0", "0", "0"],
    [
        "p1p2(1-p3)",
        "0",
        "0",
        "p1(1-p2)",
        "1-p1",
        "p1p2p3",
        "0",
        "0",
        "0",
        "0",
    ],
    ["0", "0", "0", "0", "0", "1-p1", "p1", "0", "0", "0"],
    [
        "0", "0", "0", "0", "0", "p1(1-p2)", "1-p1", "p1p2", "0", "0",
    ],
    [
        "p1p2(1-p3)",
        "0",
        "0",
        "0",
        "0",
        "p1(1-p2)",
        "0",
        "1-p1",
        "p1p2p3",
        "0",
    ],
    ["0", "0", "0", "0", "0", "0", "0", "0", "1-p1", "p1"],
    ["0", "0", "0", "0", "0", "0", "0", "0", "p1(1-p2)", "1-p1"],
    ["0", "0", "0", "0", "0", "0", "0", "0", "p1(1-p2)", "0"],
    ["0", "0", "0", "0", "0", "0", "0", "0", "0", "0"],
    [
        "p1p2p3(1-p4)",
        "0",
        "0",
        "0",
        "0",
        "0",
        "0",
        "0",
        "p1p2(1-p3)",
        "0",
    ],
    ["0", "0", "0", "0", "0", "0", "0", "0", "0", "0"],
];

/// Value of a table term when every `p_i` equals `x`.
fn constant_value(term: &str, x: f64) -> f64 {
    if term == "0" {
        return 0.0;
    }
    let successes = term.matches('p').count() - usize::from(term.contains("1-p"));
    let fails = term.contains("1-p");
    x.powi(successes as i32) * if fails { 1.0 - x } else { 1.0 }
}

#[test]
fn criterion_03_table() {
    let half = ProbSeq::constant(0.5).unwrap();
    let m = transition_matrix(7, &half).unwrap();
    let mut failures = Vec::new();
    if m.size != 34 {
        failures.push(format!("truncation size {}", m.size));
    }
    for (i, row) in TABLE.iter().enumerate() {
        for (j, &want) in row.iter().enumerate() {
            let symbolic = m.rows[i]
                .entry(j as u64)
                .map(|t| t.term.to_string())
                .unwrap_or_else(|| "0".into());
            if symbolic != want {
                failures.push(format!("S[{i}][{j}] = {symbolic}, want {want}"));
            }
            let numeric = m.get(i as u64, j as u64);
            if (numeric - constant_value(want, 0.5)).abs() > 1e-12 {
                failures.push(format!("S[{i}][{j}] = {numeric} at p = 0.5"));
            }
        }
    }
    report(
        "3",
        "14 displayed rows of the transition table, symbolic and at p = 0.5",
        &failures,
        None,
    );
}

#[test]
fn criterion_04_structure() {
    let start = Instant::now();
    let fib = Numeration::fibonacci().terms();
    let p = ProbSeq::explicit(vec![0.7, 0.3, 0.9, 0.55, 0.8], TailRule::RepeatLast).unwrap();
    let mut failures = Vec::new();
    let mut states = 0;
    for n in 1..=15 {
        let (lo, hi) = (fib[n], fib[n + 1]);
        for i in lo..hi {
            let dist = transition_dist(i, &p).unwrap();
            let shifted = transition_dist(i - lo, &p).unwrap();
            states += 1;
            for j in lo..hi {
                if dist.prob(j) != shifted.prob(j - lo) {
                    failures.push(format!("self-similarity n={n} i={i} j={j}"));
                }
            }
        }
        for j in lo..hi + lo {
            for t in transition_dist(j, &p).unwrap().entries() {
                if t.target != 0 && t.target < lo {
                    failures.push(format!("zero pattern n={n}: {j} -> {}", t.target));
                }
            }
        }
    }
    report(
        "4",
        &format!("block self-similarity and zero pattern for n <= 15 ({states} states)"),
        &failures,
        Some((start.elapsed(), Duration::from_secs(10))),
    );
}

#[test]
fn criterion_05_stochastic_and_sampling() {
    let fib = Numeration::fibonacci().terms();
    let p = ProbSeq::constant(0.5).unwrap();
    let mut failures = Vec::new();
    for state in 0..fib[15] {
        let total = transition_dist(state, &p).unwrap().total();
        if (total - 1.0).abs() > 1e-12 {
            failures.push(format!("row {state} sums to {total}"));
        }
    }
    let mut stats = Vec::new();
    for (k, state) in [0u64, 2, 4, 17].into_iter().enumerate() {
        let dist = transition_dist(state, &p).unwrap();
        let mut rng = seeded_rng(500 + k as u64);
        let mut counts = vec![0f64; dist.len()];
        let draws = 100_000;
        for _ in 0..draws {
            let next = sample_step(state, &p, &mut rng).unwrap();
            match dist.entries().iter().position(|t| t.target == next) {
                Some(i) => counts[i] += 1.0,
                None => failures.push(format!("state {state} sampled {next} outside its row")),
            }
        }
        let stat: f64 = dist
            .entries()
            .iter()
            .zip(&counts)
            .map(|(t, &n)| (n - t.prob * draws as f64).powi(2) / (t.prob * draws as f64))
            .sum();
        let critical = ChiSquared::new((dist.len() - 1) as f64)
            .unwrap()
            .inverse_cdf(0.99);
        stats.push(format!("{state}: {stat:.2}/{critical:.2}"));
        if stat >= critical {
            failures.push(format!("state {state}: chi-square {stat} >= {critical}"));
        }
    }
    report(
        "5",
        &format!(
            "rows sum to 1 below F_15; chi-square at 99% ({})",
            stats.join(", ")
        ),
        &failures,
        None,
    );
}

#[test]
fn criterion_06_beta_residual() {
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for (name, p) in three_descriptors() {
        let r = beta_eigen_residual(13, &p).unwrap();
        worst = worst.max(r);
        if !(r <= 1e-12) {
            failures.push(format!("{name}: residual {r}"));
        }
    }
    report(
        "6",
        &format!("beta eigen-residual <= 1e-12 at F_13 (worst {worst:.1e})"),
        &failures,
        None,
    );
}

#[test]
fn criterion_07_stationarity() {
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for (name, p) in three_descriptors() {
        let r = stationarity_residual(12, &p).unwrap();
        worst = worst.max(r);
        if !(r <= 1e-12) {
            failures.push(format!("{name}: residual {r}"));
        }
    }
    report(
        "7",
        &format!("xi is invariant on 1 <= j < F_12 (worst {worst:.1e})"),
        &failures,
        None,
    );
}

#[test]
fn criterion_08_classification() {
    let mut failures = Vec::new();
    let cases = [
        ("all ones", ProbSeq::all_ones(), ChainClass::Transient),
        (
            "constant 0.5",
            ProbSeq::constant(0.5).unwrap(),
            ChainClass::NullRecurrent,
        ),
        (
            "geometric 0.25",
            ProbSeq::geometric_decay(1.0, 0.25).unwrap(),
            ChainClass::PositiveRecurrent,
        ),
    ];
    for (name, p, want) in cases {
        let got = classify(&p).class;
        if got != want {
            failures.push(format!("{name}: {got}, want {want}"));
        }
    }
    let p2 = 0.6;
    let built = construct_positive_recurrent(1.0, p2, |k| 3.0 * p2 * 0.1f64.powi(k as i32 - 2), 14)
        .unwrap();
    let sums: Vec<f64> = [10, 15, 20]
        .iter()
        .map(|&n| stationary_measure(n, &built.seq).unwrap().partial_sum)
        .collect();
    let spread = (sums[2] - sums[0]).abs().max((sums[1] - sums[0]).abs()) / sums[0];
    if spread > 0.01 {
        failures.push(format!("partial sums {sums:?} spread {spread}"));
    }
    report(
        "8",
        &format!("classification and bounded constructed xi-sums (spread {spread:.1e})"),
        &failures,
        None,
    );
}

#[test]
fn criterion_09_fixed_point_and_disk() {
    let mut failures = Vec::new();
    for (name, p) in three_descriptors().into_iter().chain([(
        "small values",
        ProbSeq::explicit(vec![0.05, 0.3, 0.07], TailRule::RepeatLast).unwrap(),
    )]) {
        let orbit = q_fib_orbit(c(1.0, 0.0), &p, 40);
        if let Some(q) = orbit.values.iter().find(|q| (*q - 1.0).norm() > 1e-14) {
            failures.push(format!("{name}: q = {q} at lambda = 1"));
        }
    }
    let fib = Numeration::fibonacci().terms();
    // 0.97 <= |lambda| <= 1.02 keeps lambda^F_20 inside the normal f64 range.
    let mut state = 9;
    let annulus: Vec<Complex64> = (0..30)
        .map(|_| {
            let r = 0.97 + 0.05 * rand_like::next(&mut state);
            Complex64::from_polar(r, std::f64::consts::TAU * rand_like::next(&mut state))
        })
        .collect();
    for lambda in annulus {
        let orbit = q_fib_orbit(lambda, &ProbSeq::all_ones(), 20);
        if orbit.values.len() != 21 {
            failures.push(format!(
                "lambda {lambda}: orbit stopped at level {}",
                orbit.values.len()
            ));
            continue;
        }
        for n in 0..=20 {
            let want = lambda.powu(fib[n] as u32);
            let got = orbit.values[n];
            if (got - want).norm() > 1e-10 * want.norm() {
                failures.push(format!("lambda {lambda} n={n}: {got} vs {want}"));
            }
        }
    }
    let grid = GridSpec::square(4.0, 101);
    let ones = ProbSeq::all_ones();
    let buf = scan_grid(&grid, &ones, &EscapeConfig::for_seq(&ones, 30).unwrap()).unwrap();
    for j in 0..101 {
        for i in 0..101 {
            let r = grid.point(i, j).norm();
            if (r - 1.0).abs() > 2.0 / 101.0 && buf.is_inside(i, j) != (r < 1.0) {
                failures.push(format!("pixel ({i}, {j}) at radius {r}"));
            }
        }
    }
    report(
        "9",
        "fixed point at 1, closed form lambda^F_n, unit disk at 101x101",
        &failures,
        None,
    );
}

#[test]
fn criterion_10_fibered_pairs() {
    let mut failures = Vec::new();
    let p = ProbSeq::explicit(vec![0.8, 0.6, 0.9, 0.7], TailRule::RepeatLast).unwrap();
    for lambda in sample_points(100, 1.5, 10) {
        let pairs = fibered_pair(lambda, &p, 30);
        let orbit = q_fib_orbit(lambda, &p, 30);
        for n in 1..orbit.values.len() {
            let (x, y) = pairs[n];
            let (qn, qm) = (orbit.values[n], orbit.values[n - 1]);
            if (x - qn).norm() > 1e-10 * qn.norm().max(1.0)
                || (y - qm).norm() > 1e-10 * qm.norm().max(1.0)
            {
                failures.push(format!("lambda {lambda} n={n}"));
            }
        }
    }
    report(
        "10",
        "fibered pairs equal (q_F_n, q_F_n-1) on 100 points",
        &failures,
        None,
    );
}

#[test]
fn criterion_11_non_connectedness() {
    let mut failures = Vec::new();
    let a = ProbSeq::explicit(vec![1.0, 1.0, 0.4], TailRule::Ones).unwrap();
    match non_connectedness_test(&a, 60).unwrap() {
        Connectivity::NonConnected { level: 3 } => {}
        other => failures.push(format!("(1, 1, 0.4): {other:?}")),
    }
    let orbit = phi_orbit(&Polynomial::square(), &a, 4).unwrap();
    if orbit.values[3].norm() != 1.5 || orbit.values[4].norm() != 1.5 {
        failures.push(format!(
            "|phi_3(0)|, |phi_4(0)| = {}, {}",
            orbit.values[3].norm(),
            orbit.values[4].norm()
        ));
    }
    let b = ProbSeq::explicit(vec![1.0, 1.0, 1.0, 1.0, 0.4], TailRule::Ones).unwrap();
    if !matches!(
        non_connectedness_test(&b, 60).unwrap(),
        Connectivity::NonConnected { .. }
    ) {
        failures.push("(1, 1, 1, 1, 0.4) not detected".into());
    }
    if !matches!(
        non_connectedness_test(&ProbSeq::all_ones(), 60).unwrap(),
        Connectivity::Inconclusive { .. }
    ) {
        failures.push("all ones not inconclusive".into());
    }
    report(
        "11",
        "critical-orbit escape detects non-connected E",
        &failures,
        None,
    );
}

#[test]
fn criterion_12_residual_bound() {
    let mut failures = Vec::new();
    let mut checked = 0;
    for (name, p) in three_descriptors() {
        for lambda in sample_points(20, 1.0, 12) {
            for n in [6, 8, 10] {
                let r = eigen_residual(lambda, &p, n).unwrap();
                checked += 1;
                if r.residual > r.bound * (1.0 + 1e-12) {
                    failures.push(format!(
                        "{name} lambda {lambda} n={n}: {} > {}",
                        r.residual, r.bound
                    ));
                }
            }
        }
    }
    report(
        "12",
        &format!("residual within the analytic bound ({checked} cases)"),
        &failures,
        None,
    );
}

/// The exact residual of the truncated vector at `lambda = 1` is `p_1`:
/// row `F_n` of `(S - I) w` loses the mass `p_1` sent to `F_n + 1`, where
/// `w` is already 0. A zero residual is therefore not reachable.
#[test]
fn criterion_12_residual_vanishes_at_one() {
    let mut failures = Vec::new();
    for (name, p) in three_descriptors() {
        for n in [6, 8, 10] {
            let r = eigen_residual(c(1.0, 0.0), &p, n).unwrap();
            if r.residual != 0.0 {
                failures.push(format!(
                    "{name} n={n}: residual {} (head rows {})",
                    r.residual, r.head_residual
                ));
            }
        }
    }
    report(
        "12 (lambda = 1)",
        "residual is 0 at lambda = 1",
        &failures,
        None,
    );
}

fn brute_force_b(moduli: &[f64], n: usize) -> f64 {
    (0u32..1 << (n + 1))
        .filter(|mask| mask & (mask >> 1) == 0)
        .map(|mask| {
            (0..=n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| moduli[i])
                .product::<f64>()
        })
        .fold(1.0, f64::max)
}

#[test]
fn criterion_13_subset_maxima() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let p = ProbSeq::explicit(vec![0.8, 0.6, 0.9, 0.7], TailRule::RepeatLast).unwrap();
    let cfg = EscapeConfig::new(1e9, 12, false).unwrap();
    for lambda in sample_points(50, 1.4, 13) {
        let b = in_point_spectrum(lambda, &p, &cfg, f64::INFINITY).b;
        let moduli: Vec<f64> = q_fib_orbit(lambda, &p, 12)
            .values
            .iter()
            .map(|q| q.norm())
            .collect();
        for n in 0..moduli.len() {
            let want = brute_force_b(&moduli, n);
            if (b[n] - want).abs() > 1e-12 * want {
                failures.push(format!("lambda {lambda} n={n}: {} vs {want}", b[n]));
            }
        }
    }
    report(
        "13",
        "B_n equals exhaustive subset maximization for n <= 12 on 50 points",
        &failures,
        Some((start.elapsed(), Duration::from_secs(30))),
    );
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fibmachine"))
}

fn repro_all(dir: &PathBuf, threads: &str) -> Result<Vec<(String, Vec<u8>, usize)>, String> {
    let out = bin()
        .args([
            "repro",
            "all",
            "--pixels",
            "400",
            "--threads",
            threads,
            "--out",
        ])
        .arg(dir)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(String::from_utf8_lossy(&out.stderr).into_owned());
    }
    let text = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
    let mut panels = Vec::new();
    for line in text.lines() {
        let name = line
            .split_whitespace()
            .next()
            .unwrap_or_default()
            .to_string();
        let inside: usize = line
            .split_whitespace()
            .find_map(|f| f.strip_prefix("inside="))
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| format!("unparsed line {line:?}"))?;
        let bytes = std::fs::read(dir.join(format!("{name}.ppm"))).map_err(|e| e.to_string())?;
        panels.push((name, bytes, inside));
    }
    Ok(panels)
}

#[test]
fn criterion_14_figure_regeneration() {
    let start = Instant::now();
    let root = std::env::temp_dir().join(format!("fibmachine-acceptance-{}", std::process::id()));
    let mut failures = Vec::new();
    let runs: Vec<_> = [("a", "4"), ("b", "4"), ("c", "1")]
        .iter()
        .map(|(tag, threads)| repro_all(&root.join(tag), threads))
        .collect();
    let runs: Vec<_> = runs
        .into_iter()
        .filter_map(|r| {
            r.map_err(|e| failures.push(format!("repro failed: {e}")))
                .ok()
        })
        .collect();
    if runs.len() == 3 {
        if runs[0].len() != 15 {
            failures.push(format!("{} panels rendered", runs[0].len()));
        }
        for (other, label) in [(&runs[1], "second run"), (&runs[2], "one worker")] {
            for (x, y) in runs[0].iter().zip(other.iter()) {
                if x.0 != y.0 || x.1 != y.1 {
                    failures.push(format!("{} differs in the {label}", x.0));
                }
            }
        }
        let baseline_cfg = root.join("ones.json");
        std::fs::write(&baseline_cfg, r#"{"escape": {"max_level": 17}, "grid": {"width": 5, "height": 5, "pixels_x": 400, "pixels_y": 400}}"#).unwrap();
        let baseline = bin()
            .args(["render", "--config"])
            .arg(&baseline_cfg)
            .arg("--out")
            .arg(root.join("ones.ppm"))
            .output()
            .unwrap();
        let text = String::from_utf8_lossy(&baseline.stdout).into_owned();
        let ones: Option<usize> = text
            .strip_prefix("inside: ")
            .and_then(|t| t.split_whitespace().next())
            .and_then(|v| v.parse().ok());
        let seven = runs[0].iter().find(|p| p.0.ends_with("-07")).map(|p| p.2);
        match (seven, ones) {
            (Some(s), Some(o)) if s > 0 && s < o => {}
            other => failures.push(format!("panel 07 vs all-ones inside counts: {other:?}")),
        }
    }
    let _ = std::fs::remove_dir_all(&root);
    report("14", "15 panels at 400x400 render byte-identically across runs and worker counts; panel 07 below the disk", &failures,
        Some((start.elapsed(), Duration::from_secs(120))));
}
