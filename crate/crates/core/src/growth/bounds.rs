use num_bigint::BigInt;
use num_traits::Signed;

use crate::growth::sandwich::SandwichConstants;
use crate::word::ProductTower;

/// Log-domain margin below which the exact comparison decides.
pub const TIE_MARGIN: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct CBoundsReport {
    pub levels_checked: usize,
    /// Levels decided by exact arithmetic because the log margin was tiny.
    pub exact_fallbacks: usize,
    /// First level where either side fails, with which side.
    pub first_violation: Option<(usize, BoundSide)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundSide {
    Lower,
    Upper,
}

impl CBoundsReport {
    pub fn passed(&self) -> bool {
        self.first_violation.is_none()
    }
}

/// `(t1 |c_(m-1)|)^q |c_(m-2)| <= |c_m| <= (t2 |c_(m-1)|)^q |c_(m-2)|` with
/// `q = q_(m-2)`, for every level `m >= m* + 2`.
pub fn c_bounds_check(tower: &ProductTower, constants: &SandwichConstants) -> CBoundsReport {
    let mut report = CBoundsReport { levels_checked: 0, exact_fallbacks: 0, first_violation: None };
    for m in constants.base_level + 2..=tower.horizon() {
        let q = tower.q(m - 2).expect("consumed while building") as f64;
        let u = |j: usize| tower.level(j).ln_abs_c();
        let (u0, u1, u2) = (u(m), u(m - 1), u(m - 2));
        let lower_gap = u0 - (q * (constants.ln_t1 + u1) + u2);
        let upper_gap = q * (constants.ln_t2 + u1) + u2 - u0;
        report.levels_checked += 1;
        for (gap, side) in [(lower_gap, BoundSide::Lower), (upper_gap, BoundSide::Upper)] {
            let ok = if gap.abs() < TIE_MARGIN * u0.abs().max(1.0) {
                match exact_side(tower, constants, m, side) {
                    Some(ok) => {
                        report.exact_fallbacks += 1;
                        ok
                    }
                    None => gap >= 0.0,
                }
            } else {
                gap >= 0.0
            };
            if !ok && report.first_violation.is_none() {
                report.first_violation = Some((m, side));
            }
        }
    }
    report
}

fn exact_side(tower: &ProductTower, k: &SandwichConstants, m: usize, side: BoundSide) -> Option<bool> {
    let q = tower.q(m - 2)? as u32;
    let c0 = tower.exact(m)?.c.abs();
    let c1 = tower.exact(m - 1)?.c.abs();
    let c2 = tower.exact(m - 2)?.c.abs();
    let base = c1.pow(q) * c2;
    Some(match side {
        // t1 = (r4 - r3) / (r3 r4)
        BoundSide::Lower => (&k.r4 - &k.r3).pow(q) * base <= c0 * (&k.r3 * &k.r4).pow(q),
        // t2 = (r2 r4 + r1 r3) / (r1 r4)
        BoundSide::Upper => {
            let num: BigInt = &k.r2 * &k.r4 + &k.r1 * &k.r3;
            c0 * (&k.r1 * &k.r4).pow(q) <= num.pow(q) * base
        }
    })
}
