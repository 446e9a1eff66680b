//! End-to-end acceptance run: one PASS/FAIL line per criterion, nonzero exit
//! if any fails. Built with `harness = false`.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use num_rational::BigRational;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sturmfib::growth::{analyze, analyze_tower, ratio_step_sides, AnalyzeOptions, CaseLabel, GrowthReport};
use sturmfib::matrix::mat_pow;
use sturmfib::oracle::{run_suite, sample_spec, SuiteConfig};
use sturmfib::periodic::periodic_growth;
use sturmfib::seed::{fibonacci_power_form, PowerKind};
use sturmfib::sequence::{
    checkpoint_ratios, generate_sequence, generate_sequence_with, root_at, GenerateOptions, InitialPair,
};
use sturmfib::word::{build_tower, symbol_stream, PrefixWalker, QuotientSource, WordSpec};
use sturmfib::{IMatrix2, SeedMatrix};

// tolerances
const FIB_TOL: f64 = 1e-6;
const ROOT_SLACK: f64 = 0.01;
const SIG_DIGITS: f64 = 5e-5;
const FILTER_CAP: f64 = 0.9;
const PHI_DIGITS: f64 = 1e-10;
const M_CONVERGED: f64 = 1e-3;

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome { ok: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome { ok: false, detail: detail.into() }
}

fn check(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn worked_example() -> WordSpec {
    WordSpec::ab_squares(QuotientSource::Explicit(vec![3, 7, 15, 1]))
}

fn literal(seeds: &[SeedMatrix], word: &[(usize, u64)]) -> IMatrix2 {
    let mut p = IMatrix2::identity();
    for &(i, e) in word {
        for _ in 0..e {
            p = p.mul(&seeds[i].to_matrix());
        }
    }
    p
}

fn c1_terms() -> Outcome {
    let opts = GenerateOptions { keep_terms: true, record: Vec::new() };
    let run = match generate_sequence_with(&worked_example(), &InitialPair::integers(1, 1), 10, &opts) {
        Ok(r) => r,
        Err(e) => return fail(e.to_string()),
    };
    let got: Vec<BigRational> = (3..=12).filter_map(|n| run.term(n)).collect();
    let want: Vec<BigRational> = [0, 1, -1, 2, -3, 5, 2, 7, -5, 12].iter().map(|&x| q(x, 1)).collect();
    let shown: Vec<String> = got.iter().map(|g| g.to_string()).collect();
    check(got == want, format!("G_3..G_12 = {}", shown.join(", ")))
}

fn c2_tower() -> Outcome {
    let spec = worked_example();
    let tower = match build_tower(&spec, 4, 1000) {
        Ok(t) => t,
        Err(e) => return fail(e.to_string()),
    };
    let s = spec.seeds().to_vec();
    let p3 = literal(&s, &[(1, 6), (0, 2)]);
    let mut p4 = IMatrix2::identity();
    for _ in 0..7 {
        p4 = p4.mul(&p3);
    }
    let p4 = p4.mul(&literal(&s, &[(1, 2)]));
    let symbols = match symbol_stream(&spec).take_symbols(10) {
        Ok(v) => v,
        Err(e) => return fail(e.to_string()),
    };
    let signs: String = symbols.iter().map(|&i| if s[i].shift < 0 { '-' } else { '+' }).collect();
    let ok = tower.exact(3) == Some(&p3) && tower.exact(4) == Some(&p4) && signs == "------++--";
    check(ok, format!("P_3 = {p3}, stream signs {signs}"))
}

fn c3_linear() -> Outcome {
    let spec = a3b3_spec();
    let mut walker = PrefixWalker::new(&spec, None);
    for k in 1..=100i64 {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let want = IMatrix2::new(sign * 4 * k, sign, sign * (4 * k + 1), sign);
        match walker.advance_to(6 * k as u64 + 1) {
            Ok(p) if *p == want => {}
            Ok(p) => return fail(format!("Q_{} = {p}", 6 * k + 1)),
            Err(e) => return fail(e.to_string()),
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let g1 = q(rng.gen_range(-50..=50), rng.gen_range(1..=30));
        let g2 = q(rng.gen_range(-50..=50), rng.gen_range(1..=30));
        let opts = GenerateOptions { keep_terms: true, record: Vec::new() };
        let run = match generate_sequence_with(&spec, &InitialPair::Rational(g1.clone(), g2.clone()), 610, &opts) {
            Ok(r) => r,
            Err(e) => return fail(e.to_string()),
        };
        let sum = (&g1 + &g2).abs();
        for k in 1..=100u64 {
            if run.term(6 * k + 3).map(|g| g.abs()) != Some(sum.clone()) {
                return fail(format!("|G_{}| != |{g1} + {g2}|", 6 * k + 3));
            }
        }
    }
    pass("Q_(6k+1) for k <= 100, |G_(6k+3)| for 20 rational pairs")
}

fn c4_closed_forms() -> Outcome {
    for (seed, kind) in [(SeedMatrix::A, PowerKind::ALike), (SeedMatrix::B, PowerKind::BLike)] {
        for n in 1..=200 {
            match fibonacci_power_form(kind, n) {
                Ok(p) if p == mat_pow(&seed.to_matrix(), n) => {}
                Ok(p) => return fail(format!("{kind:?} n = {n}: {p}")),
                Err(e) => return fail(e.to_string()),
            }
        }
    }
    pass("A^n, B^n for n <= 200")
}

fn c5_suite() -> Outcome {
    let reports = run_suite(&SuiteConfig::default());
    let mut ok = true;
    let mut parts = Vec::new();
    for r in &reports {
        let good = r.passed() && r.filter_rate() < FILTER_CAP && r.instances >= 10_000;
        ok &= good;
        parts.push(format!(
            "{}[{}]: {} checked, {} failures, filter {:.3}",
            r.lemma,
            r.population,
            r.instances,
            r.failures.len(),
            r.filter_rate()
        ));
    }
    check(ok, parts.join("; "))
}

fn fib_reports() -> Vec<(String, GrowthReport)> {
    let sources = [
        QuotientSource::Constant(1),
        QuotientSource::Constant(2),
        QuotientSource::Constant(7),
        QuotientSource::Explicit(PI_QUOTIENTS.to_vec()),
        QuotientSource::Explicit(vec![5, 1, 1, 7, 2, 1, 1, 1, 4, 1, 1, 2, 1, 1, 1, 1, 1, 3, 1, 1, 1, 1, 1, 1, 1]),
    ];
    let opts = AnalyzeOptions { levels: 40, ..AnalyzeOptions::default() };
    sources
        .into_iter()
        .map(|q| (format!("{q:?}"), analyze(&fib_spec(q), &opts).expect("fibonacci analysis")))
        .collect()
}

fn c6_fibonacci() -> Outcome {
    let mut worst = (0.0f64, 0.0f64);
    for (name, r) in fib_reports() {
        let (Some(l), Some(m)) = (r.l, r.m) else { return fail(format!("{name}: no estimate")) };
        worst.0 = worst.0.max((l.value - PHI).abs());
        worst.1 = worst.1.max((m.value - 1.0 / PHI).abs());
    }
    check(worst.0 < FIB_TOL && worst.1 < FIB_TOL, format!("max |L - phi| = {:.2e}, max |M - 1/phi| = {:.2e}", worst.0, worst.1))
}

/// Every exponential spec exercised here: the named ones plus random
/// `A/B` block-word specs.
fn exponential_matrix() -> Vec<(String, GrowthReport)> {
    let mut out = fib_reports();
    let opts = AnalyzeOptions { levels: 24, digit_cap: 20_000, ..AnalyzeOptions::default() };
    out.push(("1/pi".into(), analyze(&pi_spec(), &AnalyzeOptions::default()).expect("pi analysis")));
    out.push(("ab squares, ones".into(), analyze(&WordSpec::ab_squares(QuotientSource::all_ones()), &opts).unwrap()));
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut drawn = 0;
    while drawn < 200 {
        let Some(spec) = sample_spec(&mut rng, 40, 5) else { continue };
        drawn += 1;
        let r = analyze(&spec, &opts).expect("random spec analysis");
        out.push((format!("random #{drawn}"), r));
    }
    out.retain(|(_, r)| matches!(r.case, CaseLabel::Exponential(_)) || r.witness.is_some());
    out
}

fn c7_envelope(runs: &[(String, GrowthReport)]) -> Outcome {
    let bad: Vec<String> = runs
        .iter()
        .filter(|(_, r)| !r.step_violations.is_empty())
        .map(|(n, r)| format!("{n}: {:?}", r.step_violations))
        .collect();
    let levels: usize = runs.iter().map(|(_, r)| r.envelope.len()).sum();
    check(bad.is_empty(), format!("{} runs, {levels} level steps checked; violations: {bad:?}", runs.len()))
}

fn c8_consistency() -> Outcome {
    let spec = pi_spec();
    let report = match analyze(&spec, &AnalyzeOptions::default()) {
        Ok(r) => r,
        Err(e) => return fail(e.to_string()),
    };
    let (Some(l), Some(m)) = (report.l, report.m) else { return fail("no L/M estimate") };
    let mut ok = true;
    let mut parts = vec![format!("L = {:.9} +/- {:.1e}, M = {:.12}", l.value, l.err, m.value)];

    let run = generate_sequence(&spec, &InitialPair::integers(1, 1), 8_000).expect("terms");
    for n in [2_000, 4_000, 8_000] {
        let root = root_at(&run, n).unwrap_or(f64::NAN);
        let good = (root - l.value).abs() <= l.err + ROOT_SLACK;
        ok &= good;
        parts.push(format!("root({n}) = {root:.5}"));
    }

    let n = 1_000_000;
    let oracle = log_product(&spec, &naive_word(&spec, n));
    let l_oracle = (oracle.ln_abs(2) / n as f64).exp();
    let agree = (l.value - l_oracle).abs() / l_oracle < SIG_DIGITS;
    ok &= agree;
    parts.push(format!("log-domain oracle L = {l_oracle:.6}"));

    let tower = build_tower(&spec, 12, 10_000).expect("tower");
    let list = checkpoint_ratios(&spec, &InitialPair::integers(1, 1), &tower, 300_000).expect("checkpoints");
    let tail = &list[list.len().saturating_sub(3)..];
    let dist: Vec<f64> = tail.iter().map(|c| (c.ratio - m.value).abs()).collect();
    let monotone = dist.len() == 3 && dist[0] > dist[1] && dist[1] > dist[2];
    let converged = dist.last().is_some_and(|&d| d < M_CONVERGED);
    ok &= monotone && converged;
    let col: Vec<f64> = tail.iter().map(|c| (c.column_ratio - m.value).abs()).collect();
    parts.push(format!("|G_(n+1)/G_(n+2) - M| over last checkpoints {dist:.4?}"));
    parts.push(format!("info: |e_n/g_n - M| = {:?}", col.iter().map(|d| format!("{d:.1e}")).collect::<Vec<_>>()));
    check(ok, parts.join("; "))
}

fn c9_ratio_identity() -> Outcome {
    let specs: Vec<WordSpec> = {
        let mut v = vec![pi_spec(), WordSpec::ab_squares(QuotientSource::all_ones())];
        for q in [1, 2, 7] {
            v.push(fib_spec(QuotientSource::Constant(q)));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut drawn = 0;
        while drawn < 200 {
            let Some(spec) = sample_spec(&mut rng, 40, 5) else { continue };
            drawn += 1;
            v.push(spec);
        }
        v
    };
    let mut levels = 0;
    let mut towers = 0;
    for spec in specs {
        let tower = build_tower(&spec, 24, 20_000).expect("tower");
        let report = analyze_tower(&tower, 12);
        if report.witness.is_none() {
            continue;
        }
        towers += 1;
        for m in 4..=tower.exact_horizon() {
            let Some((lhs, rhs)) = ratio_step_sides(&tower, m) else {
                return fail(format!("level {m} has no identity sides"));
            };
            if lhs != rhs {
                return fail(format!("level {m}: {lhs} != {rhs}"));
            }
            levels += 1;
        }
    }
    pass(format!("{levels} exact levels across {towers} exponential towers"))
}

fn c10_periodic() -> Outcome {
    let seeds = [SeedMatrix::A, SeedMatrix::B];
    let phi = periodic_growth(&seeds, &[0]).map(|g| g.rate);
    let ab = periodic_growth(&seeds, &[0, 1]).map(|g| g.rate);
    let a3b3 = periodic_growth(&seeds, &[0, 0, 0, 1, 1, 1]).map(|g| g.rate);
    match (phi, ab, a3b3) {
        (Ok(p), Ok(x), Ok(y)) => {
            check((p - PHI).abs() < PHI_DIGITS && x == 1.0 && y == 1.0, format!("A: {p}, AB: {x}, A^3B^3: {y}"))
        }
        (p, x, y) => fail(format!("{p:?} {x:?} {y:?}")),
    }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> (Outcome, Duration) {
    let start = Instant::now();
    let mut out = f();
    let took = start.elapsed();
    if let Some(limit) = limit {
        if took > limit {
            out.ok = false;
            out.detail.push_str(&format!("; over the {limit:?} budget"));
        }
    }
    (out, took)
}

fn main() -> ExitCode {
    // keep `cargo test -- --list` and similar harness probes cheap
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let secs = Duration::from_secs;
    let mut results = vec![
        (1, timed(Some(secs(1)), c1_terms)),
        (2, timed(Some(secs(1)), c2_tower)),
        (3, timed(Some(secs(5)), c3_linear)),
        (4, timed(Some(secs(1)), c4_closed_forms)),
        (5, timed(Some(secs(300)), c5_suite)),
        (6, timed(Some(secs(10)), c6_fibonacci)),
    ];
    let runs = exponential_matrix();
    results.push((7, timed(None, || c7_envelope(&runs))));
    results.push((8, timed(Some(secs(120)), c8_consistency)));
    results.push((9, timed(Some(secs(30)), c9_ratio_identity)));
    results.push((10, timed(None, c10_periodic)));

    let mut failed = 0;
    for (i, (o, took)) in &results {
        let tag = if o.ok { "PASS" } else { "FAIL" };
        println!("criterion {i:>2}: {tag} ({:.2}s) {}", took.as_secs_f64(), o.detail);
        failed += usize::from(!o.ok);
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
