//! Exact 2x2 integer matrices.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Row-major `[[a, b], [c, d]]` with arbitrary-precision entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IMatrix2 {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl IMatrix2 {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>, d: impl Into<BigInt>) -> Self {
        IMatrix2 { a: a.into(), b: b.into(), c: c.into(), d: d.into() }
    }

    pub fn identity() -> Self {
        IMatrix2::new(1, 0, 0, 1)
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs().is_one()
    }

    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    pub fn transpose(&self) -> Self {
        IMatrix2 { a: self.a.clone(), b: self.c.clone(), c: self.b.clone(), d: self.d.clone() }
    }

    pub fn neg(&self) -> Self {
        IMatrix2 { a: -&self.a, b: -&self.b, c: -&self.c, d: -&self.d }
    }

    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    /// Absolute values of the entries in row-major order.
    pub fn abs_entries(&self) -> [BigInt; 4] {
        [self.a.abs(), self.b.abs(), self.c.abs(), self.d.abs()]
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.entries().iter().map(|x| x.abs()).max().unwrap_or_default()
    }

    pub fn has_zero_entry(&self) -> bool {
        self.entries().iter().any(|x| x.is_zero())
    }

    /// Decimal digit count of the largest entry (1 for a zero matrix).
    pub fn digits(&self) -> usize {
        decimal_digits(&self.max_abs_entry())
    }

    pub fn mul(&self, rhs: &IMatrix2) -> IMatrix2 {
        IMatrix2 {
            a: &self.a * &rhs.a + &self.b * &rhs.c,
            b: &self.a * &rhs.b + &self.b * &rhs.d,
            c: &self.c * &rhs.a + &self.d * &rhs.c,
            d: &self.c * &rhs.b + &self.d * &rhs.d,
        }
    }

    /// Right multiplication by `[[0, epsilon], [1, shift]]` without a general product.
    pub fn mul_seed(&self, epsilon: i64, shift: i64) -> IMatrix2 {
        IMatrix2 {
            a: self.b.clone(),
            b: &self.a * epsilon + &self.b * shift,
            c: self.d.clone(),
            d: &self.c * epsilon + &self.d * shift,
        }
    }

    /// Square-and-multiply power; `pow(0)` is the identity.
    pub fn pow(&self, mut n: u64) -> IMatrix2 {
        let mut result = IMatrix2::identity();
        if n == 0 {
            return result;
        }
        let mut base = self.clone();
        loop {
            if n & 1 == 1 {
                result = result.mul(&base);
            }
            n >>= 1;
            if n == 0 {
                break;
            }
            base = base.mul(&base);
        }
        result
    }
}

pub fn mat_mul(x: &IMatrix2, y: &IMatrix2) -> IMatrix2 {
    x.mul(y)
}

pub fn mat_pow(x: &IMatrix2, n: u64) -> IMatrix2 {
    x.pow(n)
}

impl fmt::Display for IMatrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

pub fn decimal_digits(x: &BigInt) -> usize {
    if x.is_zero() {
        return 1;
    }
    // bits * log10(2) is within one of the true count; fix up exactly
    let bits = x.bits();
    let estimate = ((bits as f64 - 1.0) * std::f64::consts::LOG10_2).floor() as usize + 1;
    let abs = x.abs();
    let ten = BigInt::from(10u32);
    if abs >= ten.pow(estimate as u32) {
        estimate + 1
    } else {
        estimate
    }
}

/// Natural log of `|x|`, accurate to double precision for any size; `-inf` at zero.
pub fn ln_abs(x: &BigInt) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        let (_, digits) = x.to_u64_digits();
        let mut v = 0.0f64;
        for limb in digits.iter().rev() {
            v = v * 18446744073709551616.0 + *limb as f64;
        }
        return v.ln();
    }
    let shift = bits - 64;
    let top: BigInt = x.abs() >> shift;
    let (_, digits) = top.to_u64_digits();
    let lead = digits.first().copied().unwrap_or(0) as f64;
    lead.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `x / y` as `f64` without forming the reduced fraction; both operands are
/// truncated to their top 128 bits first.
pub fn ratio_f64(x: &BigInt, y: &BigInt) -> f64 {
    let shift = x.bits().max(y.bits()).saturating_sub(128);
    let (x, y) = (x >> shift, y >> shift);
    x.to_f64().unwrap_or(f64::NAN) / y.to_f64().unwrap_or(f64::NAN)
}

pub fn sign_of(x: &BigInt) -> i8 {
    match x.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_of_huge_operands() {
        let a = BigInt::from(3u32).pow(5000);
        let c = BigInt::from(3u32).pow(4999) * 2;
        assert!((ratio_f64(&a, &c) - 1.5).abs() < 1e-15);
        assert!((ratio_f64(&-a, &c) + 1.5).abs() < 1e-15);
        assert_eq!(ratio_f64(&BigInt::from(1), &BigInt::from(4)), 0.25);
    }

    fn a() -> IMatrix2 {
        IMatrix2::new(0, 1, 1, 1)
    }
    fn b() -> IMatrix2 {
        IMatrix2::new(0, 1, 1, -1)
    }

    #[test]
    fn small_products() {
        assert_eq!(a().mul(&a()), IMatrix2::new(1, 1, 1, 2));
        assert_eq!(a().pow(3).mul(&b().pow(3)), IMatrix2::new(3, -4, 4, -5));
        let x = IMatrix2::new(7, -3, 12, 5);
        assert_eq!(IMatrix2::identity().mul(&x), x);
    }

    #[test]
    fn powers() {
        assert_eq!(a().pow(0), IMatrix2::identity());
        assert_eq!(a().pow(5), IMatrix2::new(3, 5, 5, 8));
        assert_eq!(b().pow(4), IMatrix2::new(2, -3, -3, 5));
    }

    #[test]
    fn seed_fast_path() {
        let x = IMatrix2::new(4, -9, 2, 11);
        assert_eq!(x.mul_seed(-1, 3), x.mul(&IMatrix2::new(0, -1, 1, 3)));
    }

    #[test]
    fn digit_counts() {
        assert_eq!(decimal_digits(&BigInt::from(0)), 1);
        assert_eq!(decimal_digits(&BigInt::from(9)), 1);
        assert_eq!(decimal_digits(&BigInt::from(10)), 2);
        assert_eq!(decimal_digits(&BigInt::from(-999_999)), 6);
        let big = BigInt::from(10u32).pow(500);
        assert_eq!(decimal_digits(&big), 501);
        assert_eq!(decimal_digits(&(big - 1)), 500);
    }

    #[test]
    fn ln_of_huge() {
        let big = BigInt::from(3u32).pow(5000);
        let expected = 5000.0 * 3f64.ln();
        assert!((ln_abs(&big) - expected).abs() / expected < 1e-14);
        assert!((ln_abs(&BigInt::from(-20)) - 20f64.ln()).abs() < 1e-15);
    }
}
