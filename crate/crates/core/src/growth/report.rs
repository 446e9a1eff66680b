use crate::error::Result;
use crate::growth::bounds::{c_bounds_check, CBoundsReport};
use crate::growth::classify::{classify_case, CaseLabel, DEFAULT_CLASSIFY_HORIZON};
use crate::growth::exponent::{envelope_step_violations, growth_error_envelope, growth_exponent, GrowthTrace};
use crate::growth::linear::{linear_bound_constant, LinearBound};
use crate::growth::ratio::{ratio_limit, ratio_step_failures};
use crate::growth::sandwich::SandwichConstants;
use crate::word::{build_tower, ProductTower, WordSpec};

pub const DEFAULT_LEVELS: usize = 32;
pub const DEFAULT_DIGIT_CAP: usize = 100_000;

/// Relative slack (on `|s_m|`) for the per-level halving inequality.
pub const STEP_SLACK: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct AnalyzeOptions {
    pub levels: usize,
    pub digit_cap: usize,
    pub classify_horizon: usize,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions { levels: DEFAULT_LEVELS, digit_cap: DEFAULT_DIGIT_CAP, classify_horizon: DEFAULT_CLASSIFY_HORIZON }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    LogDomain,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub err: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthReport {
    pub case: CaseLabel,
    /// Sandwich constants found by classification, kept even when `case`
    /// ends up `Undetermined`.
    pub witness: Option<SandwichConstants>,
    /// Set when classification found constants but `L - err_L > 1` could not
    /// be certified at this horizon; `case` is then `Undetermined`.
    pub uncertified: Option<String>,
    pub l: Option<Estimate>,
    pub m: Option<Estimate>,
    pub levels_used: usize,
    pub exact_levels: usize,
    pub mode: Mode,
    pub linear: Option<LinearBound>,
    pub trace: GrowthTrace,
    /// `(m, closed-form envelope at m)` for `m >= m* + 2`.
    pub envelope: Vec<(usize, f64)>,
    pub step_violations: Vec<usize>,
    pub ratio_identity_failures: Vec<usize>,
    pub c_bounds: Option<CBoundsReport>,
    /// `(level, relative disagreement)` between exact and log-domain products.
    pub dual_check: Option<(usize, f64)>,
}

/// Builds the tower (clamped to the quotients available) and runs the
/// classification and every estimate that applies.
pub fn analyze(spec: &WordSpec, opts: &AnalyzeOptions) -> Result<GrowthReport> {
    let levels = match spec.quotients().available() {
        Some(n) => opts.levels.min(n + 2),
        None => opts.levels,
    };
    let tower = build_tower(spec, levels.max(2), opts.digit_cap)?;
    Ok(analyze_tower(&tower, opts.classify_horizon))
}

pub fn analyze_tower(tower: &ProductTower, classify_horizon: usize) -> GrowthReport {
    let case = classify_case(tower, classify_horizon);
    let trace = GrowthTrace::from_tower(tower);
    let mut report = GrowthReport {
        case: case.clone(),
        witness: case.constants().cloned(),
        uncertified: None,
        l: None,
        m: None,
        levels_used: tower.horizon(),
        exact_levels: tower.exact_horizon(),
        mode: if tower.exact_horizon() == tower.horizon() { Mode::Exact } else { Mode::LogDomain },
        linear: None,
        trace,
        envelope: Vec::new(),
        step_violations: Vec::new(),
        ratio_identity_failures: Vec::new(),
        c_bounds: None,
        dual_check: tower.last_dual_check(),
    };
    match &case {
        CaseLabel::Linear => report.linear = linear_bound_constant(tower, &case).ok(),
        CaseLabel::Undetermined(_) => {}
        CaseLabel::Exponential(k) => {
            let from = k.base_level + 2;
            report.envelope =
                (from..=tower.horizon()).map(|m| (m, growth_error_envelope(&report.trace, k.ln_t, m))).collect();
            report.step_violations = envelope_step_violations(&report.trace, k.ln_t, from, STEP_SLACK);
            report.ratio_identity_failures = ratio_step_failures(tower, 3);
            report.c_bounds = Some(c_bounds_check(tower, k));
            let mut problems = Vec::new();
            match growth_exponent(tower, k) {
                Ok(est) => {
                    report.l = Some(Estimate { value: est.l, err: est.err_l });
                    if est.l - est.err_l <= 1.0 {
                        problems.push(format!("L = {} +/- {} does not clear 1", est.l, est.err_l));
                    }
                }
                Err(e) => problems.push(e.to_string()),
            }
            match ratio_limit(tower, k) {
                Ok(r) => report.m = Some(Estimate { value: r.m, err: r.err_m }),
                Err(e) => problems.push(e.to_string()),
            }
            if !problems.is_empty() {
                report.uncertified = Some(problems.join("; "));
                report.case = CaseLabel::Undetermined(tower.horizon());
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::SeedMatrix;
    use crate::word::QuotientSource;

    #[test]
    fn pi_spec_is_exponential() {
        let spec = WordSpec::ab_squares(QuotientSource::Explicit(vec![3, 7, 15, 1, 292, 1, 1, 1, 2, 1, 3, 1, 14, 2]));
        let r = analyze(&spec, &AnalyzeOptions { levels: 16, digit_cap: 5_000, classify_horizon: 12 }).unwrap();
        assert_eq!(r.case.name(), "exponential", "{:?}", r.uncertified);
        assert_eq!(r.mode, Mode::LogDomain);
        let l = r.l.unwrap();
        assert!(l.value - l.err > 1.0);
        assert!(r.m.unwrap().value.abs() < 1.0);
        assert!(r.step_violations.is_empty());
        assert!(r.ratio_identity_failures.is_empty());
        assert!(r.c_bounds.unwrap().passed());
        assert!(r.dual_check.unwrap().1 < 1e-9);
    }

    #[test]
    fn shallow_horizon_is_undetermined() {
        let spec = WordSpec::ab_squares(QuotientSource::Explicit(vec![3, 7, 15, 1]));
        let r = analyze(&spec, &AnalyzeOptions { levels: 3, digit_cap: 1000, classify_horizon: 12 }).unwrap();
        assert!(matches!(r.case, CaseLabel::Undetermined(_)));
        assert!(r.witness.is_some());
    }

    #[test]
    fn linear_spec() {
        let spec = WordSpec::new(
            vec![SeedMatrix::A, SeedMatrix::B],
            vec![0, 0, 0, 1, 1, 1],
            vec![0, 0, 0, 1, 1, 1],
            QuotientSource::all_ones(),
        )
        .unwrap();
        let r = analyze(&spec, &AnalyzeOptions::default()).unwrap();
        assert_eq!(r.case, CaseLabel::Linear);
        assert_eq!(r.linear.unwrap().d, 290.into());
    }
}
