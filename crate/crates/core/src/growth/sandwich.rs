use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::matrix::{ln_abs, IMatrix2};
use crate::word::ProductTower;

/// Integers with `r1/r2 <= |a|/|c|, |b|/|d|, |a|/|b|, |c|/|d| <= r3/r4`
/// at `base_level`, plus the derived growth factors `t1`, `t2`.
#[derive(Clone, Debug, PartialEq)]
pub struct SandwichConstants {
    pub r1: BigInt,
    pub r2: BigInt,
    pub r3: BigInt,
    pub r4: BigInt,
    pub base_level: usize,
    /// `(r4 - r3) / (r3 r4)`
    pub t1: f64,
    /// `(r2 r4 + r1 r3) / (r1 r4)`
    pub t2: f64,
    /// `max(t2, 1/t1)`
    pub t: f64,
    pub ln_t1: f64,
    pub ln_t2: f64,
    pub ln_t: f64,
}

impl SandwichConstants {
    /// Builds the constants from the four integers; `None` unless
    /// `0 < r1 < r2` and `0 < r3 < r4`.
    pub fn from_r(r1: BigInt, r2: BigInt, r3: BigInt, r4: BigInt, base_level: usize) -> Option<Self> {
        if !(r1.is_positive() && r1 < r2 && r3.is_positive() && r3 < r4) {
            return None;
        }
        let ln_t1 = ln_abs(&(&r4 - &r3)) - ln_abs(&r3) - ln_abs(&r4);
        let ln_t2 = ln_abs(&(&r2 * &r4 + &r1 * &r3)) - ln_abs(&r1) - ln_abs(&r4);
        let ln_t = ln_t2.max(-ln_t1);
        Some(SandwichConstants {
            r1,
            r2,
            r3,
            r4,
            base_level,
            t1: ln_t1.exp(),
            t2: ln_t2.exp(),
            t: ln_t.exp(),
            ln_t1,
            ln_t2,
            ln_t,
        })
    }

    /// All eight inequalities, by cross-multiplication.
    pub fn holds_for(&self, p: &IMatrix2) -> bool {
        let [a, b, c, d] = p.abs_entries();
        [(&a, &c), (&b, &d), (&a, &b), (&c, &d)].iter().all(|(x, y)| {
            let lower = &self.r1 * *y <= &self.r2 * *x;
            let upper = *x * &self.r4 <= &self.r3 * *y;
            lower && upper
        })
    }

    /// `|d| > r2` and `|d| > r4`.
    pub fn dominated_by(&self, p: &IMatrix2) -> bool {
        let d = p.d.abs();
        d > self.r2 && d > self.r4
    }
}

/// `|b| = |c| = |d| - 1 = |a| + 1`.
pub fn is_degenerate_pattern(p: &IMatrix2) -> bool {
    let [a, b, c, d] = p.abs_entries();
    b == c && d == &b + 1u32 && a + 1u32 == b
}

/// Sandwich constants for a single matrix, or `None` when the entry
/// ordering fails or no constants with `r3 < r4` exist.
pub fn sandwich_for_matrix(p: &IMatrix2, level: usize) -> Option<SandwichConstants> {
    if p.has_zero_entry() {
        return None;
    }
    let [a, b, c, d] = p.abs_entries();
    if !(a < c && c < d && a < b && b < d) {
        return None;
    }
    let one = BigInt::one();
    let r2 = &d - &one;
    // max((|c|-1)/|c|, (|d|-2)/(|d|-1))
    let (r3, r4) = if (&c - &one) * (&d - &one) >= (&d - 2u32) * &c {
        (&c - &one, c.clone())
    } else {
        (&d - 2u32, &d - &one)
    };
    if r3.is_zero() {
        return None;
    }
    let constants = SandwichConstants::from_r(one, r2, r3, r4, level)?;
    (constants.holds_for(p) && constants.dominated_by(p)).then_some(constants)
}

/// Constructs the constants at tower level `m` (must be exact).
pub fn find_sandwich(tower: &ProductTower, m: usize) -> Option<SandwichConstants> {
    sandwich_for_matrix(tower.exact(m)?, m)
}

/// Exact levels `m >= m*` where the constants stop bounding `P_m`. The
/// `|d| > r2, r4` condition is only required at `m*` itself.
pub fn preservation_failures(tower: &ProductTower, constants: &SandwichConstants) -> Vec<usize> {
    let base = constants.base_level;
    (base..=tower.exact_horizon())
        .filter(|&m| {
            tower.exact(m).is_some_and(|p| !(constants.holds_for(p) && (m > base || constants.dominated_by(p))))
        })
        .collect()
}

/// `(m, i)` pairs, `m* <= m` exact and `1 <= i <= max_power`, where `P_m^i`
/// escapes the sandwich.
pub fn power_sandwich_failures(tower: &ProductTower, constants: &SandwichConstants, max_power: u64) -> Vec<(usize, u64)> {
    let mut out = Vec::new();
    for m in constants.base_level..=tower.exact_horizon() {
        let p = tower.exact(m).expect("exact level");
        let mut acc = p.clone();
        for i in 1..=max_power {
            if i > 1 {
                acc = acc.mul(p);
            }
            if !constants.holds_for(&acc) {
                out.push((m, i));
            }
        }
    }
    out
}
