use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::word::tower::ProductTower;

/// Share of `P_1` blocks in `P_m`: `n1 / (n1 + n2)`.
pub fn letter_frequency(tower: &ProductTower, m: usize) -> BigRational {
    let l = tower.level(m);
    BigRational::new(BigInt::from(l.n1), BigInt::from(l.n1 + l.n2))
}

/// `n1 / n2` in `P_m`; tends to `[0; q_1, q_2, ...]`. `None` at level 1.
pub fn letter_ratio(tower: &ProductTower, m: usize) -> Option<BigRational> {
    let l = tower.level(m);
    (l.n2 != 0).then(|| BigRational::new(BigInt::from(l.n1), BigInt::from(l.n2)))
}

/// The first `count` convergents of `[0; q_1, q_2, ...]`.
pub fn cf_convergents(quotients: &[u64], count: usize) -> Result<Vec<BigRational>> {
    if count == 0 {
        return Err(Error::Invalid("need at least one convergent".into()));
    }
    if quotients.len() < count {
        return Err(Error::QuotientExhausted { index: quotients.len() + 1 });
    }
    // p_{-1}/q_{-1} = 1/0, p_0/q_0 = 0/1
    let (mut p_prev, mut p) = (BigInt::one(), BigInt::zero());
    let (mut q_prev, mut q) = (BigInt::zero(), BigInt::one());
    let mut out = Vec::with_capacity(count);
    for (index, &a) in quotients.iter().take(count).enumerate() {
        if a == 0 {
            return Err(Error::NonPositiveQuotient { index: index + 1 });
        }
        let a = BigInt::from(a);
        let p_next = &a * &p + &p_prev;
        let q_next = &a * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
        out.push(BigRational::new(p.clone(), q.clone()));
    }
    Ok(out)
}

/// `P_m` spelled over the block alphabet: `1` for a `P_1` block, `2` for `P_2`.
pub fn block_word(tower: &ProductTower, m: usize, max_len: usize) -> Result<Vec<u8>> {
    let l = tower.level(m);
    if l.n1 + l.n2 > max_len as u128 {
        return Err(Error::Invalid(format!("P_{m} has {} blocks, limit {max_len}", l.n1 + l.n2)));
    }
    fn fill(tower: &ProductTower, m: usize, out: &mut Vec<u8>) {
        if m <= 2 {
            out.push(m as u8);
            return;
        }
        let q = tower.q(m - 2).expect("level was built");
        let start = out.len();
        fill(tower, m - 1, out);
        let len = out.len() - start;
        for _ in 1..q {
            out.extend_from_within(start..start + len);
        }
        fill(tower, m - 2, out);
    }
    let mut out = Vec::with_capacity((l.n1 + l.n2) as usize);
    fill(tower, m, &mut out);
    Ok(out)
}
