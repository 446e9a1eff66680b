use crate::error::{Error, Result};
use crate::matrix::IMatrix2;
use crate::word::stream::prefix_product;
use crate::word::tower::ProductTower;

/// `Q_n = P(m_l)^(n_l) ... P(m_1)^(n_1) * Q_r` with `r = remainder_len`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    /// `(m_i, n_i)` with strictly increasing levels.
    pub factors: Vec<(usize, u64)>,
    pub remainder_len: u64,
}

impl Decomposition {
    pub fn total_len(&self, tower: &ProductTower) -> u128 {
        self.factors.iter().map(|&(m, i)| tower.k(m) * i as u128).sum::<u128>() + self.remainder_len as u128
    }

    /// Multiplies the factors back together (highest level first), followed
    /// by the remainder prefix. Needs every factor level to be exact.
    pub fn recompose(&self, tower: &ProductTower) -> Result<IMatrix2> {
        let mut acc = IMatrix2::identity();
        for &(m, i) in self.factors.iter().rev() {
            let p = tower.exact(m).ok_or(Error::DigitBudget { cap: tower.exact_cap() })?;
            acc = acc.mul(&p.pow(i));
        }
        if self.remainder_len > 0 {
            acc = acc.mul(&prefix_product(tower.spec(), self.remainder_len, None)?);
        }
        Ok(acc)
    }

    /// Checks `n_i <= q(m_i - 1)` and that a full power is followed by a
    /// level gap of at least two.
    pub fn satisfies_constraints(&self, tower: &ProductTower) -> bool {
        self.factors.iter().enumerate().all(|(idx, &(m, i))| {
            let q = tower.q(m - 1).unwrap_or(u64::MAX);
            let bounded = i >= 1 && i <= q;
            let gap_ok = idx == 0 || i < q || self.factors[idx - 1].0 + 2 <= m;
            let ascending = idx == 0 || self.factors[idx - 1].0 < m;
            bounded && gap_ok && ascending
        })
    }
}

/// Greedy decomposition with factor levels `>= base + 1`: peel the largest
/// level power that fits, recurse on what is left.
pub fn decompose_prefix_from(tower: &ProductTower, n: u64, base: usize) -> Result<Decomposition> {
    let top = tower.horizon();
    if tower.k(top) <= n as u128 {
        return Err(Error::Horizon { have: top, need: top + 1 });
    }
    let mut rem = n as u128;
    let mut factors = Vec::new();
    let mut m = top;
    while m > base && rem > 0 {
        let k = tower.k(m);
        if k <= rem {
            let i = rem / k;
            factors.push((m, i as u64));
            rem -= i * k;
        }
        m -= 1;
    }
    factors.reverse();
    Ok(Decomposition { factors, remainder_len: rem as u64 })
}

pub fn decompose_prefix(tower: &ProductTower, n: u64) -> Result<Decomposition> {
    decompose_prefix_from(tower, n, tower.spec().base_level())
}

fn has_zero_remainder(tower: &ProductTower, n: u64, base: usize) -> bool {
    let mut rem = n as u128;
    let mut m = tower.horizon();
    while m > base && rem > 0 {
        rem %= tower.k(m);
        m -= 1;
    }
    rem == 0
}

/// All `1 <= n <= limit` whose decomposition leaves no remainder.
pub fn checkpoint_indices_from(tower: &ProductTower, limit: u64, base: usize) -> Result<Vec<u64>> {
    let top = tower.horizon();
    if tower.k(top) <= limit as u128 {
        return Err(Error::Horizon { have: top, need: top + 1 });
    }
    Ok((1..=limit).filter(|&n| has_zero_remainder(tower, n, base)).collect())
}

pub fn checkpoint_indices(tower: &ProductTower, limit: u64) -> Result<Vec<u64>> {
    checkpoint_indices_from(tower, limit, tower.spec().base_level())
}
