use crate::error::{Error, Result};
use crate::growth::sandwich::SandwichConstants;
use crate::matrix::{ln_abs, ratio_f64};
use crate::word::ProductTower;

const PHI: f64 = 1.618_033_988_749_895;
/// Sum of `1/F_i` over the Fibonacci numbers.
const RECIPROCAL_FIBONACCI: f64 = 3.359_885_666_243_178;

#[derive(Clone, Debug, PartialEq)]
pub struct TracePoint {
    pub level: usize,
    pub k: u128,
    /// `ln |c_m|`
    pub log_abs_c: f64,
    /// `ln |c_m| / k_m`
    pub s: f64,
    /// `a_m / c_m`
    pub ratio_ac: f64,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthTrace {
    pub points: Vec<TracePoint>,
}

impl GrowthTrace {
    pub fn from_tower(tower: &ProductTower) -> Self {
        let points = tower
            .levels()
            .map(|(m, l)| {
                let (log_abs_c, ratio_ac) = match &l.exact {
                    Some(x) => (ln_abs(&x.c), ratio_f64(&x.a, &x.c)),
                    None => (l.approx.ln_abs_c(), l.approx.ratio_ac()),
                };
                TracePoint { level: m, k: l.k, log_abs_c, s: log_abs_c / l.k as f64, ratio_ac, exact: l.is_exact() }
            })
            .collect();
        GrowthTrace { points }
    }

    pub fn point(&self, m: usize) -> &TracePoint {
        &self.points[m - 1]
    }

    pub fn top(&self) -> usize {
        self.points.len()
    }

    pub fn s(&self, m: usize) -> f64 {
        self.point(m).s
    }
}


/// Tail bound on `|lim s - s_m|` from the halving recursion, in closed form:
/// `|s_m - s_(m-1)| + (2/(2-phi)) ln t / (phi^(m-1) (phi-1))`.
pub fn growth_error_envelope(trace: &GrowthTrace, ln_t: f64, m: usize) -> f64 {
    let ds = (trace.s(m) - trace.s(m - 1)).abs();
    ds + (2.0 / (2.0 - PHI)) * ln_t / (PHI.powi(m as i32 - 1) * (PHI - 1.0))
}

/// The same tail bound with the actual lengths in place of `phi^m`:
/// `|s_m - s_(m-1)| + 2 ln t * sum_(j>=m) 1/k_j`, where `k_(m+i) >= F(i+1) k_m`.
pub fn length_tail_bound(trace: &GrowthTrace, ln_t: f64, m: usize) -> f64 {
    let ds = (trace.s(m) - trace.s(m - 1)).abs();
    ds + 2.0 * ln_t * RECIPROCAL_FIBONACCI / trace.point(m).k as f64
}

/// Levels `m >= from` (with `m + 1` in the trace) where
/// `|s_(m+1) - s_m| <= |s_m - s_(m-1)|/2 + ln t / k_m` fails by more than
/// `rel_slack * |s_m|`.
pub fn envelope_step_violations(trace: &GrowthTrace, ln_t: f64, from: usize, rel_slack: f64) -> Vec<usize> {
    (from.max(2)..trace.top())
        .filter(|&m| {
            let lhs = (trace.s(m + 1) - trace.s(m)).abs();
            let rhs = (trace.s(m) - trace.s(m - 1)).abs() / 2.0 + ln_t / trace.point(m).k as f64;
            lhs > rhs + rel_slack * trace.s(m).abs()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExponentEstimate {
    pub l: f64,
    pub err_l: f64,
    /// Error on `ln L`.
    pub err_s: f64,
    pub level: usize,
    pub trace: GrowthTrace,
}

/// `L = exp(s_H)` at the top level `H`, with the larger of the two tail
/// bounds pushed through `exp`.
pub fn growth_exponent(tower: &ProductTower, constants: &SandwichConstants) -> Result<ExponentEstimate> {
    let h = tower.horizon();
    let need = constants.base_level + 3;
    if h < need {
        return Err(Error::Horizon { have: h, need });
    }
    let trace = GrowthTrace::from_tower(tower);
    let err_s = growth_error_envelope(&trace, constants.ln_t, h).max(length_tail_bound(&trace, constants.ln_t, h));
    let l = trace.s(h).exp();
    Ok(ExponentEstimate { l, err_l: l * err_s.exp_m1(), err_s, level: h, trace })
}
