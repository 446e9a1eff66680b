use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::growth::exponent::GrowthTrace;
use crate::growth::sandwich::SandwichConstants;
use crate::matrix::{ratio_f64, IMatrix2};
use crate::word::ProductTower;

#[derive(Clone, Debug, PartialEq)]
pub struct RatioEstimate {
    /// `a_H / c_H` at the top exact level.
    pub m: f64,
    pub err_m: f64,
    pub level: usize,
    /// `ln L'`, the smallest `s_m` over levels `>= m* + 2`.
    pub ln_l_prime: f64,
}

/// `P(m-1)^(q-1) P(m-2)` with `q = q_(m-2)`, so that `P_m = P(m-1) * this`.
pub fn ratio_cofactor(tower: &ProductTower, m: usize) -> Option<IMatrix2> {
    if m < 3 {
        return None;
    }
    let q = tower.q(m - 2)?;
    Some(tower.exact(m - 1)?.pow(q - 1).mul(tower.exact(m - 2)?))
}

/// `(|a_m c_(m-1) - a_(m-1) c_m|, |c'_m|)` at an exact level `m >= 3`.
pub fn ratio_step_sides(tower: &ProductTower, m: usize) -> Option<(BigInt, BigInt)> {
    let cur = tower.exact(m)?;
    let prev = tower.exact(m - 1)?;
    let cof = ratio_cofactor(tower, m)?;
    let lhs = (&cur.a * &prev.c - &prev.a * &cur.c).abs();
    Some((lhs, cof.c.abs()))
}

/// Exact levels `m >= from` where the step identity fails.
pub fn ratio_step_failures(tower: &ProductTower, from: usize) -> Vec<usize> {
    (from.max(3)..=tower.exact_horizon())
        .filter(|&m| ratio_step_sides(tower, m).is_some_and(|(l, r)| l != r))
        .collect()
}

/// `M ~ a_H / c_H` with the Cauchy tail `2 / (t1 L'^(2 k_H))` plus rounding.
pub fn ratio_limit(tower: &ProductTower, constants: &SandwichConstants) -> Result<RatioEstimate> {
    let h = tower.exact_horizon();
    let need = constants.base_level + 2;
    if h < need || tower.horizon() < need {
        return Err(Error::Horizon { have: h, need });
    }
    let trace = GrowthTrace::from_tower(tower);
    let ln_l_prime = (need..=trace.top()).map(|m| trace.s(m)).fold(f64::INFINITY, f64::min);
    if ln_l_prime.is_nan() || ln_l_prime <= 0.0 {
        return Err(Error::Undetermined(format!("observed growth floor L' = {} is not above 1", ln_l_prime.exp())));
    }
    let top = tower.exact(h).expect("exact level");
    let m = ratio_f64(&top.a, &top.c);
    let k = tower.k(h) as f64;
    let ln_tail = std::f64::consts::LN_2 - constants.ln_t1 - 2.0 * k * ln_l_prime;
    let err_m = ln_tail.exp() + 4.0 * f64::EPSILON * m.abs().max(f64::MIN_POSITIVE);
    Ok(RatioEstimate { m, err_m, level: h, ln_l_prime })
}
