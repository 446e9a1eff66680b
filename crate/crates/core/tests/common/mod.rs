//! Independent reference implementations shared by the integration tests.
//! Nothing here goes through the tower, stream or walker code.

#![allow(dead_code)]

use num_bigint::BigInt;
use sturmfib::word::{QuotientSource, WordSpec};
use sturmfib::{IMatrix2, SeedMatrix};

/// Partial quotients of `1/pi = [0; 3, 7, 15, 1, 292, ...]`, 120 terms.
pub const PI_QUOTIENTS: [u64; 120] = [
    3, 7, 15, 1, 292, 1, 1, 1, 2, 1, 3, 1, 14, 2, 1, 1, 2, 2, 2, 2, 1, 84, 2, 1, 1, 15, 3, 13, 1, 4, 2, 6, 6, 99, 1, 2,
    2, 6, 3, 5, 1, 1, 6, 8, 1, 7, 1, 2, 3, 7, 1, 2, 1, 1, 12, 1, 1, 1, 3, 1, 1, 8, 1, 1, 2, 1, 6, 1, 1, 5, 2, 2, 3, 1,
    2, 4, 4, 16, 1, 161, 45, 1, 22, 1, 2, 2, 1, 4, 1, 2, 24, 1, 2, 1, 3, 1, 2, 1, 1, 10, 2, 5, 4, 1, 2, 2, 8, 1, 5, 2,
    2, 26, 1, 4, 1, 1, 8, 2, 42, 2,
];

pub const PHI: f64 = 1.618_033_988_749_895;

pub fn pi_spec() -> WordSpec {
    WordSpec::ab_squares(QuotientSource::Named { name: "one_over_pi".into(), terms: PI_QUOTIENTS.to_vec() })
}

/// `P_1 = P_2 = A^2`.
pub fn fib_spec(q: QuotientSource) -> WordSpec {
    WordSpec::new(vec![SeedMatrix::A], vec![0, 0], vec![0, 0], q).unwrap()
}

pub fn a3b3_spec() -> WordSpec {
    let w = vec![0, 0, 0, 1, 1, 1];
    WordSpec::new(vec![SeedMatrix::A, SeedMatrix::B], w.clone(), w, QuotientSource::Constant(1)).unwrap()
}

/// Quotient `q_i` of the spec, 1-based.
fn q(spec: &WordSpec, i: usize) -> u64 {
    spec.quotients().get(i).unwrap()
}

/// Prefix of the infinite word, read off the first literal `P_m`
/// (`m >= 2`) that is long enough; `P_m` begins `P_(m+1)` from level 2 on.
pub fn naive_word(spec: &WordSpec, len: usize) -> Vec<usize> {
    let mut top = 2;
    loop {
        let words = naive_level_words(spec, top);
        if words[top].len() >= len {
            return words[top][..len].to_vec();
        }
        top += 1;
    }
}

/// The literal words `P_1..=P_top`.
pub fn naive_level_words(spec: &WordSpec, top: usize) -> Vec<Vec<usize>> {
    let mut words = vec![Vec::new(), spec.p1_word().to_vec(), spec.p2_word().to_vec()];
    for m in 3..=top {
        let mut next = Vec::new();
        for _ in 0..q(spec, m - 2) {
            next.extend_from_slice(&words[m - 1]);
        }
        next.extend_from_slice(&words[m - 2]);
        words.push(next);
    }
    words
}

/// Plain `[a, b, c, d]` arithmetic, no library code involved.
pub type M2 = [BigInt; 4];

pub fn m2_mul(x: &M2, y: &M2) -> M2 {
    [
        &x[0] * &y[0] + &x[1] * &y[2],
        &x[0] * &y[1] + &x[1] * &y[3],
        &x[2] * &y[0] + &x[3] * &y[2],
        &x[2] * &y[1] + &x[3] * &y[3],
    ]
}

pub fn m2_identity() -> M2 {
    [1.into(), 0.into(), 0.into(), 1.into()]
}

pub fn m2_seed(s: &SeedMatrix) -> M2 {
    [0.into(), s.epsilon.into(), 1.into(), s.shift.into()]
}

pub fn naive_product(spec: &WordSpec, word: &[usize]) -> M2 {
    word.iter().fold(m2_identity(), |acc, &i| m2_mul(&acc, &m2_seed(&spec.seeds()[i])))
}

pub fn to_m2(p: &IMatrix2) -> M2 {
    [p.a.clone(), p.b.clone(), p.c.clone(), p.d.clone()]
}

/// Running product of seed matrices in `f64`, rescaled to unit max-norm
/// after every step with the scale kept as a log.
#[derive(Clone, Debug)]
pub struct LogProduct {
    pub m: [f64; 4],
    pub log_scale: f64,
}

impl LogProduct {
    pub fn new() -> Self {
        LogProduct { m: [1.0, 0.0, 0.0, 1.0], log_scale: 0.0 }
    }

    pub fn step(&mut self, s: &SeedMatrix) {
        let [a, b, c, d] = self.m;
        let (e, h) = (s.epsilon as f64, s.shift as f64);
        // [a b; c d] * [0 e; 1 h]
        let m = [b, a * e + b * h, d, c * e + d * h];
        let norm = m.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
        self.m = m.map(|x| x / norm);
        self.log_scale += norm.ln();
    }

    pub fn ln_abs(&self, entry: usize) -> f64 {
        self.m[entry].abs().ln() + self.log_scale
    }
}

/// `ln |entry|` of the product over `word`, one renormalized step per symbol.
pub fn log_product(spec: &WordSpec, word: &[usize]) -> LogProduct {
    let mut p = LogProduct::new();
    for &i in word {
        p.step(&spec.seeds()[i]);
    }
    p
}

/// `G_1, G_2, ...` straight from the recurrence over the naive word.
pub fn naive_terms(spec: &WordSpec, g1: BigInt, g2: BigInt, count: usize) -> Vec<BigInt> {
    let word = naive_word(spec, count.saturating_sub(2));
    let mut out = vec![g1, g2];
    for &i in &word {
        let s = spec.seeds()[i];
        let n = out.len();
        let next = &out[n - 2] * s.epsilon + &out[n - 1] * s.shift;
        out.push(next);
    }
    out.truncate(count);
    out
}

/// Convergents `p/q` of `[0; qs...]` by the textbook recurrence, as `f64`.
pub fn convergent_f64(qs: &[u64]) -> f64 {
    qs.iter().rev().fold(0.0, |acc, &a| 1.0 / (a as f64 + acc))
}
