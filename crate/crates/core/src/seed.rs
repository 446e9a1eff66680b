//! Seed matrices `[[0, eps], [1, shift]]` and the base-product constraints.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::IMatrix2;

/// One recurrence step `(x, y) -> (y, epsilon * x + shift * y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SeedMatrix {
    pub epsilon: i64,
    pub shift: i64,
}

impl SeedMatrix {
    pub fn new(epsilon: i64, shift: i64) -> Result<Self> {
        if epsilon != 1 && epsilon != -1 {
            return Err(Error::BadEpsilon(epsilon));
        }
        Ok(SeedMatrix { epsilon, shift })
    }

    /// The Fibonacci step `A = [[0,1],[1,1]]`.
    pub const A: SeedMatrix = SeedMatrix { epsilon: 1, shift: 1 };
    /// The subtractive step `B = [[0,1],[1,-1]]`.
    pub const B: SeedMatrix = SeedMatrix { epsilon: 1, shift: -1 };

    pub fn to_matrix(&self) -> IMatrix2 {
        IMatrix2::new(0, self.epsilon, 1, self.shift)
    }
}

pub fn seed_to_matrix(seed: SeedMatrix) -> IMatrix2 {
    seed.to_matrix()
}

/// Which closed form to use for a power of a Fibonacci-type seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PowerKind {
    ALike,
    BLike,
}

impl PowerKind {
    pub fn of_seed(seed: &SeedMatrix) -> Result<Self> {
        match *seed {
            SeedMatrix::A => Ok(PowerKind::ALike),
            SeedMatrix::B => Ok(PowerKind::BLike),
            _ => Err(Error::NotFibonacciSeed),
        }
    }
}

/// `A^n = [[F(n-1), F(n)], [F(n), F(n+1)]]` and
/// `B^n = (-1)^n [[F(n-1), -F(n)], [-F(n), F(n+1)]]`.
pub fn fibonacci_power_form(kind: PowerKind, n: u64) -> Result<IMatrix2> {
    if n == 0 {
        return Err(Error::ZeroExponent);
    }
    let (prev, cur, next) = fibonacci_triple(n);
    Ok(match kind {
        PowerKind::ALike => IMatrix2 { a: prev, b: cur.clone(), c: cur, d: next },
        PowerKind::BLike => {
            let m = IMatrix2 { a: prev, b: -cur.clone(), c: -cur, d: next };
            if n % 2 == 1 {
                m.neg()
            } else {
                m
            }
        }
    })
}

/// `(F(n-1), F(n), F(n+1))` by fast doubling.
fn fibonacci_triple(n: u64) -> (BigInt, BigInt, BigInt) {
    // (F(k), F(k+1)) for k = n via doubling from the top bit.
    let mut f0 = BigInt::zero();
    let mut f1 = BigInt::one();
    for bit in (0..64 - n.leading_zeros()).rev() {
        let two_f1 = &f1 << 1u32;
        let d0 = &f0 * (&two_f1 - &f0);
        let d1 = &f0 * &f0 + &f1 * &f1;
        if (n >> bit) & 1 == 1 {
            f0 = d1.clone();
            f1 = d0 + d1;
        } else {
            f0 = d0;
            f1 = d1;
        }
    }
    let prev = &f1 - &f0;
    (prev, f0, f1)
}

/// A single labeled failure of the base-product constraints.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Violation {
    Determinant,
    SmallCorner,
    ZeroB,
    ZeroC,
    RatioAB,
    RatioCD,
    RatioAC,
    RatioBD,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Violation::Determinant => "|det| != 1",
            Violation::SmallCorner => "|d| < 2",
            Violation::ZeroB => "b = 0",
            Violation::ZeroC => "c = 0",
            Violation::RatioAB => "|a| > |b|",
            Violation::RatioCD => "|c| > |d|",
            Violation::RatioAC => "|a| > |c|",
            Violation::RatioBD => "|b| > |d|",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub passed: bool,
    pub violations: Vec<Violation>,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed {
            return f.write_str("ok");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join(", "))
    }
}

/// Checks `|det| = 1`, `|d| >= 2`, `b, c != 0` and the four ratio bounds,
/// all by comparing absolute values (no division).
pub fn validate_base_product(p: &IMatrix2) -> ValidationReport {
    let [a, b, c, d] = p.abs_entries();
    let mut violations = Vec::new();
    if !p.is_unimodular() {
        violations.push(Violation::Determinant);
    }
    if d < BigInt::from(2) {
        violations.push(Violation::SmallCorner);
    }
    if b.is_zero() {
        violations.push(Violation::ZeroB);
    }
    if c.is_zero() {
        violations.push(Violation::ZeroC);
    }
    if a > b {
        violations.push(Violation::RatioAB);
    }
    if c > d {
        violations.push(Violation::RatioCD);
    }
    if a > c {
        violations.push(Violation::RatioAC);
    }
    if b > d {
        violations.push(Violation::RatioBD);
    }
    ValidationReport { passed: violations.is_empty(), violations }
}

/// Builds `A^j1 B^k1 A^j2 ...` style products; every block exponent must be at
/// least 2 for the result to satisfy the base-product constraints.
pub fn ab_block_product(blocks: &[(SeedMatrix, u64)]) -> Result<(IMatrix2, Vec<SeedMatrix>)> {
    let mut m = IMatrix2::identity();
    let mut word = Vec::new();
    for &(seed, exp) in blocks {
        let kind = PowerKind::of_seed(&seed)?;
        m = m.mul(&fibonacci_power_form(kind, exp)?);
        word.extend(std::iter::repeat_n(seed, exp as usize));
    }
    let report = validate_base_product(&m);
    if !report.passed {
        return Err(Error::BaseProduct { level: 0, report });
    }
    Ok((m, word))
}
