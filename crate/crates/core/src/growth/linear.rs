use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::growth::classify::CaseLabel;
use crate::matrix::IMatrix2;
use crate::word::ProductTower;

/// Slope bound `|e_n|, |f_n|, |g_n|, |h_n| < D n` in the linear case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearBound {
    /// `2 M C + 2 M C k_2 + 2 M`
    pub d: BigInt,
    /// `max(|c_1|, |c_2|)`
    pub c: BigInt,
    /// Largest absolute entry over the prefix products of `P_2`'s word.
    pub m_hat: BigInt,
    pub k2: u128,
}

pub fn linear_bound_constant(tower: &ProductTower, case: &CaseLabel) -> Result<LinearBound> {
    if *case != CaseLabel::Linear {
        return Err(Error::WrongCase { expected: "linear" });
    }
    let spec = tower.spec();
    let c = spec.p1_matrix().c.abs().max(spec.p2_matrix().c.abs());
    let mut prefix = IMatrix2::identity();
    let mut m_hat = BigInt::from(0);
    for &s in spec.p2_word() {
        let seed = spec.seeds()[s];
        prefix = prefix.mul_seed(seed.epsilon, seed.shift);
        m_hat = m_hat.max(prefix.max_abs_entry());
    }
    let k2 = spec.p2_word().len() as u128;
    let two_m = &m_hat * 2u32;
    let d = &two_m * &c + &two_m * &c * k2 + &two_m;
    Ok(LinearBound { d, c, m_hat, k2 })
}
