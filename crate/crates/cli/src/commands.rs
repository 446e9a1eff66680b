//! Subcommand implementations. Each returns the text for stdout and an exit
//! code; files go to the configured output directory.

use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};
use sturmfib::growth::{analyze, AnalyzeOptions, CaseLabel, GrowthReport, Mode, SandwichConstants};
use sturmfib::oracle::{run_suite, LemmaReport, SuiteConfig};
use sturmfib::periodic::periodic_growth;
use sturmfib::sequence::{
    checkpoint_ratios, degenerate_check, generate_sequence_with, linear_slope_bound, m_prime, root_growth,
    DegenerateStatus, GenerateOptions, InitialPair, RunFlag, SequenceRun,
};
use sturmfib::word::{
    build_tower, cf_convergents, letter_frequency, letter_ratio, ProductTower, QuotientSource, SymbolStream, WordSpec,
};
use sturmfib::SeedMatrix;
use thiserror::Error;

use crate::config::{ConfigError, RunConfig};
use crate::parse::{format_rational, format_word, letter, parse_word, ParseError};
use crate::render::{csv_bytes, fmt_f64, render_bigint, render_rational, write_atomic};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FALSIFIED: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_UNDETERMINED: u8 = 3;

/// Rows of the dense part of the term table.
pub const DENSE_ROWS: u64 = 1_000;
/// Approximate number of strided rows after the dense part.
pub const SPARSE_ROWS: u64 = 1_000;
/// Witnesses written per failing lemma.
pub const MAX_WITNESSES: usize = 20;
/// Longest run used for the linear-case slope evidence.
pub const SLOPE_TERMS: u64 = 200_000;
/// Relative tolerance for the degenerate-initial-value warning.
pub const DEGENERATE_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Core(#[from] sturmfib::Error),
    #[error("word: {0}")]
    Word(#[from] ParseError),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        EXIT_INVALID
    }
}

#[derive(Debug)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub files: Vec<PathBuf>,
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn emit(out: Option<&Path>, name: &str, bytes: &[u8], files: &mut Vec<PathBuf>) -> Result<(), CliError> {
    if let Some(dir) = out {
        let path = dir.join(name);
        write_atomic(&path, bytes).map_err(|source| CliError::Io { path: path.clone(), source })?;
        files.push(path);
    }
    Ok(())
}

fn num_u128(x: u128) -> Value {
    u64::try_from(x).map(Value::from).unwrap_or_else(|_| Value::String(x.to_string()))
}

fn num_f64(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or_else(|| Value::String(fmt_f64(x)))
}

fn big(x: &BigInt, full: bool) -> Value {
    Value::String(render_bigint(x, full))
}

fn spec_json(spec: &WordSpec) -> Value {
    let quotients = match spec.quotients() {
        QuotientSource::Explicit(v) => json!({ "explicit": v.len() }),
        QuotientSource::Named { name, terms } => json!({ "named": name, "terms": terms.len() }),
        QuotientSource::Constant(q) => json!({ "constant": q }),
    };
    let seeds: Vec<Value> = spec.seeds().iter().map(|s| json!({ "epsilon": s.epsilon, "shift": s.shift })).collect();
    json!({
        "seeds": seeds,
        "p1_word": format_word(spec.p1_word()),
        "p2_word": format_word(spec.p2_word()),
        "quotients": quotients,
        "base_level": spec.base_level(),
    })
}

fn sandwich_json(k: &SandwichConstants) -> Value {
    json!({
        "r": [k.r1.to_string(), k.r2.to_string(), k.r3.to_string(), k.r4.to_string()],
        "level": k.base_level,
        "t1": num_f64(k.t1),
        "t2": num_f64(k.t2),
        "t": num_f64(k.t),
    })
}

fn init_json(init: &InitialPair) -> Value {
    match init {
        InitialPair::Rational(a, b) => json!({ "g1": format_rational(a), "g2": format_rational(b), "exact": true }),
        InitialPair::Float(a, b) => json!({ "g1": num_f64(*a), "g2": num_f64(*b), "exact": false }),
    }
}

fn flags_json(flags: &[RunFlag]) -> Value {
    flags
        .iter()
        .map(|f| {
            Value::from(match f {
                RunFlag::AllZero => "all-zero",
                RunFlag::Approximate => "approximate",
                RunFlag::DegenerateInit => "degenerate-init",
                RunFlag::LinearCase => "linear-case",
            })
        })
        .collect()
}

fn report_json(r: &GrowthReport, full: bool) -> Value {
    let estimate = |e: &Option<sturmfib::growth::Estimate>| match e {
        Some(e) => json!({ "value": num_f64(e.value), "err": num_f64(e.err) }),
        None => Value::Null,
    };
    let trace: Vec<Value> = r
        .trace
        .points
        .iter()
        .map(|p| {
            json!({
                "level": p.level,
                "k": num_u128(p.k),
                "ln_abs_c": num_f64(p.log_abs_c),
                "s": num_f64(p.s),
                "a_over_c": num_f64(p.ratio_ac),
                "exact": p.exact,
            })
        })
        .collect();
    let mut out = Map::new();
    out.insert("case".into(), r.case.name().into());
    if let CaseLabel::Undetermined(h) = r.case {
        out.insert("horizon".into(), h.into());
    }
    out.insert("uncertified".into(), r.uncertified.clone().map_or(Value::Null, Value::from));
    out.insert("sandwich".into(), r.witness.as_ref().map_or(Value::Null, sandwich_json));
    out.insert("L".into(), estimate(&r.l));
    out.insert("M".into(), estimate(&r.m));
    out.insert("levels_used".into(), r.levels_used.into());
    out.insert("exact_levels".into(), r.exact_levels.into());
    out.insert(
        "mode".into(),
        match r.mode {
            Mode::Exact => "exact",
            Mode::LogDomain => "log-domain",
        }
        .into(),
    );
    out.insert(
        "linear".into(),
        r.linear.as_ref().map_or(Value::Null, |b| {
            json!({ "D": big(&b.d, full), "C": big(&b.c, full), "M_hat": big(&b.m_hat, full), "k2": num_u128(b.k2) })
        }),
    );
    let envelope: Vec<Value> = r.envelope.iter().map(|(m, e)| json!([m, num_f64(*e)])).collect();
    out.insert(
        "checks".into(),
        json!({
            "envelope": envelope,
            "step_violations": r.step_violations,
            "ratio_identity_failures": r.ratio_identity_failures,
            "c_bounds": r.c_bounds.as_ref().map_or(Value::Null, |c| json!({
                "levels_checked": c.levels_checked,
                "exact_fallbacks": c.exact_fallbacks,
                "passed": c.passed(),
                "first_violation": c.first_violation.map(|(m, side)| json!([m, format!("{side:?}").to_lowercase()])),
            })),
            "dual_check": r.dual_check.map(|(m, d)| json!({ "level": m, "relative_gap": num_f64(d) })),
        }),
    );
    out.insert("trace".into(), Value::Array(trace));
    Value::Object(out)
}

/// Classification, `L`, `M` and the supporting checks. Exit 3 when the
/// case stays undetermined.
pub fn cmd_analyze(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let opts = AnalyzeOptions { levels: cfg.levels, digit_cap: cfg.digit_cap, classify_horizon: cfg.classify_horizon };
    let report = analyze(&cfg.spec, &opts)?;
    let mut doc = report_json(&report, cfg.full_digits);
    let obj = doc.as_object_mut().expect("object");
    obj.insert("spec".into(), spec_json(&cfg.spec));

    let init = cfg.init.clone();
    if let Some(init) = &init {
        let mut info = init_json(init);
        if let Some(m) = &report.m {
            let status = degenerate_check(init, m.value, m.err, DEGENERATE_TOL);
            info["degenerate"] = degenerate_json(&status);
            let tower = build_tower(&cfg.spec, cfg.spec.base_level() + 2, cfg.digit_cap)?;
            info["m_prime"] = num_f64(m_prime(&tower, m.value)?);
        }
        obj.insert("init".into(), info);
    }
    if let Some(bound) = &report.linear {
        let init = init.unwrap_or(InitialPair::integers(1, 1));
        let n = cfg.terms.min(SLOPE_TERMS);
        let run = generate_sequence_with(&cfg.spec, &init, n, &GenerateOptions::default())?;
        let slope = max_slope(&run);
        let limit = linear_slope_bound(&init, &bound.d)?;
        obj.insert(
            "slope".into(),
            json!({
                "terms": n,
                "max_abs_g_over_n": num_f64(slope),
                "bound": render_rational(&limit, cfg.full_digits),
                "within_bound": slope <= limit.to_f64().unwrap_or(f64::INFINITY),
            }),
        );
    }

    let mut files = Vec::new();
    let text = pretty(&doc);
    emit(cfg.out.as_deref(), "report.json", text.as_bytes(), &mut files)?;
    let code = if matches!(report.case, CaseLabel::Undetermined(_)) { EXIT_UNDETERMINED } else { EXIT_OK };
    Ok(Outcome { code, stdout: text, files })
}

fn degenerate_json(s: &DegenerateStatus) -> Value {
    match s {
        DegenerateStatus::Ok { note } => json!({ "status": "ok", "note": note }),
        DegenerateStatus::Warning { residual } => json!({ "status": "warning", "residual": num_f64(*residual) }),
    }
}

/// `max |G_n| / n` over `n >= 2`, from the logs.
fn max_slope(run: &SequenceRun) -> f64 {
    (2..=run.last_index)
        .filter_map(|n| run.ln_abs_term(n).map(|l| (l - (n as f64).ln()).exp()))
        .fold(0.0, f64::max)
}

/// Rows shown in the term table: `1..=DENSE_ROWS`, then about
/// `SPARSE_ROWS` evenly strided indices up to the last term.
pub fn table_indices(last: u64) -> Vec<u64> {
    let dense = last.min(DENSE_ROWS);
    let mut rows: Vec<u64> = (1..=dense).collect();
    if last > dense {
        let stride = (last - dense).div_ceil(SPARSE_ROWS);
        let mut n = dense + stride;
        while n < last {
            rows.push(n);
            n += stride;
        }
        rows.push(last);
    }
    rows
}

/// Smallest tower with `k_top > n`, or the tallest the quotients allow.
fn tower_covering(spec: &WordSpec, n: u64, digit_cap: usize) -> Result<ProductTower, CliError> {
    let max = spec.quotients().available().map_or(usize::MAX, |a| a + 2);
    let mut h = 3.min(max).max(2);
    loop {
        let t = build_tower(spec, h, digit_cap)?;
        if t.k(h) > n as u128 || h >= max {
            return Ok(t);
        }
        h += 1;
    }
}

/// Terms `G_1..G_(N+2)`, root samples and checkpoint ratios.
pub fn cmd_generate(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let init = cfg.init.clone().ok_or_else(|| CliError::Usage("generate needs \"init\" in the config".into()))?;
    let last = cfg.terms + 2;
    let rows = table_indices(last);
    let opts = GenerateOptions { keep_terms: false, record: rows.clone() };
    let run = generate_sequence_with(&cfg.spec, &init, cfg.terms, &opts)?;
    let approx = run.is_approximate();

    let term_rows = rows.iter().map(|&n| {
        let g = &run.recorded[&n];
        let root = run.ln_abs_term(n).filter(|l| l.is_finite()).map(|l| (l / n as f64).exp());
        let mut flags = Vec::new();
        if root.is_none() {
            flags.push("zero");
        }
        if approx {
            flags.push("approx");
        }
        vec![n.to_string(), render_rational(g, cfg.full_digits), root.map_or(String::new(), fmt_f64), flags.join(";")]
    });
    let terms_csv = csv_bytes(&["n", "g_n", "root", "flags"], term_rows);

    let stride = (last / SPARSE_ROWS).max(1);
    let roots = root_growth(&run, stride);
    let roots_csv = csv_bytes(&["n", "root"], roots.samples.iter().map(|(n, r)| [n.to_string(), fmt_f64(*r)]));

    let mut notes = Vec::new();
    let tower = tower_covering(&cfg.spec, cfg.terms, cfg.digit_cap)?;
    let limit = (tower.k(tower.horizon()).saturating_sub(1)).min(cfg.terms as u128) as u64;
    let checkpoints_csv = match checkpoint_ratios(&cfg.spec, &init, &tower, limit) {
        Ok(list) => Some(csv_bytes(
            &["n", "ratio", "column_ratio"],
            list.iter().map(|c| [c.n.to_string(), fmt_f64(c.ratio), fmt_f64(c.column_ratio)]),
        )),
        Err(e) => {
            notes.push(format!("checkpoint ratios skipped: {e}"));
            None
        }
    };

    let mut files = Vec::new();
    let out = cfg.out.as_deref();
    emit(out, "terms.csv", &terms_csv, &mut files)?;
    emit(out, "roots.csv", &roots_csv, &mut files)?;
    if let Some(c) = &checkpoints_csv {
        emit(out, "checkpoints.csv", c, &mut files)?;
    }
    if out.is_none() {
        return Ok(Outcome { code: EXIT_OK, stdout: String::from_utf8(terms_csv).expect("utf-8"), files });
    }
    let summary = json!({
        "terms": cfg.terms,
        "last_index": run.last_index,
        "init": init_json(&init),
        "flags": flags_json(&run.flags),
        "last_root": roots.samples.last().map(|(_, r)| num_f64(*r)),
        "zero_samples": roots.skipped.len(),
        "checkpoints_up_to": limit,
        "notes": notes,
        "files": files.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
    });
    Ok(Outcome { code: EXIT_OK, stdout: pretty(&summary), files })
}

fn lemma_json(r: &LemmaReport, full: bool) -> Value {
    let witnesses: Vec<Value> = r
        .failures
        .iter()
        .take(MAX_WITNESSES)
        .map(|w| {
            let matrices: Vec<[String; 4]> =
                w.matrices.iter().map(|m| [&m.a, &m.b, &m.c, &m.d].map(|x| render_bigint(x, full))).collect();
            json!({ "note": w.note, "indices": w.indices, "matrices": matrices })
        })
        .collect();
    json!({
        "lemma": r.lemma,
        "population": r.population,
        "generated": r.generated,
        "filtered": r.filtered,
        "instances": r.instances,
        "filter_rate": num_f64(r.filter_rate()),
        "failures": r.failures.len(),
        "passed": r.passed(),
        "notes": r.notes,
        "witnesses": witnesses,
    })
}

/// Runs the lemma suite; exit 1 if any lemma has a failure or no instances.
pub fn cmd_verify(cfg: &RunConfig, use_spec: bool) -> Result<Outcome, CliError> {
    let suite = SuiteConfig {
        trials: cfg.trials,
        seed: cfg.seed,
        specs: if use_spec { vec![cfg.spec.clone()] } else { Vec::new() },
        max_n: cfg.terms.min(100_000),
    };
    let reports = run_suite(&suite);
    let passed = reports.iter().all(LemmaReport::passed);
    let doc = json!({
        "trials": cfg.trials,
        "seed": cfg.seed,
        "passed": passed,
        "lemmas": reports.iter().map(|r| lemma_json(r, cfg.full_digits)).collect::<Vec<_>>(),
    });
    let mut files = Vec::new();
    let text = pretty(&doc);
    emit(cfg.out.as_deref(), "verify.json", text.as_bytes(), &mut files)?;
    if !passed {
        let failing: Vec<Value> =
            reports.iter().filter(|r| !r.passed()).map(|r| lemma_json(r, true)).collect();
        emit(cfg.out.as_deref(), "witnesses.json", pretty(&Value::Array(failing)).as_bytes(), &mut files)?;
    }
    Ok(Outcome { code: if passed { EXIT_OK } else { EXIT_FALSIFIED }, stdout: text, files })
}

/// The first `terms` symbols and per-level block counts against the
/// continued-fraction convergents.
pub fn cmd_word(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut stream = SymbolStream::new(&cfg.spec);
    let prefix: String = stream.take_symbols(cfg.terms as usize)?.into_iter().map(letter).collect();
    let max = cfg.spec.quotients().available().map_or(cfg.levels, |a| cfg.levels.min(a + 2));
    let tower = build_tower(&cfg.spec, max.max(2), cfg.digit_cap)?;
    let qs = cfg.spec.quotients().prefix(tower.horizon().saturating_sub(2))?;
    let convergents = if qs.is_empty() { Vec::new() } else { cf_convergents(&qs, qs.len())? };

    let mut rows = Vec::new();
    let mut levels = Vec::new();
    for (m, level) in tower.levels() {
        let ratio = letter_ratio(&tower, m);
        let convergent: Option<BigRational> = match m {
            1 => None,
            2 => Some(BigRational::from_integer(0.into())),
            _ => convergents.get(m - 3).cloned(),
        };
        let matches = match (&ratio, &convergent) {
            (Some(r), Some(c)) => Some(r == c),
            _ => None,
        };
        let freq = letter_frequency(&tower, m);
        let show = |x: &Option<BigRational>| x.as_ref().map_or(String::new(), |x| render_rational(x, cfg.full_digits));
        rows.push(vec![
            m.to_string(),
            level.k.to_string(),
            level.n1.to_string(),
            level.n2.to_string(),
            render_rational(&freq, cfg.full_digits),
            fmt_f64(freq.to_f64().unwrap_or(f64::NAN)),
            show(&ratio),
            show(&convergent),
            matches.map_or(String::new(), |b| b.to_string()),
        ]);
        levels.push(json!({
            "level": m,
            "k": num_u128(level.k),
            "n1": num_u128(level.n1),
            "n2": num_u128(level.n2),
            "frequency": render_rational(&freq, cfg.full_digits),
            "ratio": ratio.as_ref().map(|x| render_rational(x, cfg.full_digits)),
            "convergent": convergent.as_ref().map(|x| render_rational(x, cfg.full_digits)),
            "matches": matches,
        }));
    }
    let header = ["level", "k", "n1", "n2", "frequency", "frequency_f64", "ratio", "convergent", "matches"];
    let table = csv_bytes(&header, rows);
    let mut files = Vec::new();
    emit(cfg.out.as_deref(), "frequency.csv", &table, &mut files)?;
    let doc = json!({ "symbols": cfg.terms, "prefix": prefix, "levels": levels });
    let text = pretty(&doc);
    emit(cfg.out.as_deref(), "word.json", text.as_bytes(), &mut files)?;
    Ok(Outcome { code: EXIT_OK, stdout: text, files })
}

/// Growth rate `rho(P)^(1/k)` of a periodically repeated word.
pub fn cmd_periodic(word: &str, seeds: &[SeedMatrix], full: bool) -> Result<Outcome, CliError> {
    let w = parse_word(word, seeds.len())?;
    let g = periodic_growth(seeds, &w)?;
    let product = [&g.product.a, &g.product.b, &g.product.c, &g.product.d].map(|x| render_bigint(x, full));
    let doc = json!({
        "word": format_word(&w),
        "period": g.period,
        "product": product,
        "trace": big(&g.trace, full),
        "det": big(&g.det, full),
        "real_eigenvalues": g.real_eigenvalues,
        "ln_radius": num_f64(g.ln_radius),
        "rate": num_f64(g.rate),
    });
    Ok(Outcome { code: EXIT_OK, stdout: pretty(&doc), files: Vec::new() })
}
