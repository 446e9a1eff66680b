//! Log-domain 2x2 matrices: a unit-normalized real matrix times `exp(log_scale)`.

use crate::matrix::{ln_abs, IMatrix2};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogMatrix {
    /// Row-major entries with the largest absolute value equal to 1.
    pub m: [f64; 4],
    pub log_scale: f64,
}

impl LogMatrix {
    pub fn identity() -> Self {
        LogMatrix { m: [1.0, 0.0, 0.0, 1.0], log_scale: 0.0 }
    }

    pub fn from_exact(x: &IMatrix2) -> Self {
        let scale = x.entries().iter().map(|e| ln_abs(e)).fold(f64::NEG_INFINITY, f64::max);
        if scale == f64::NEG_INFINITY {
            return LogMatrix { m: [0.0; 4], log_scale: 0.0 };
        }
        let entry = |e: &num_bigint::BigInt| {
            let l = ln_abs(e);
            if l == f64::NEG_INFINITY {
                0.0
            } else {
                let s = if e.sign() == num_bigint::Sign::Minus { -1.0 } else { 1.0 };
                s * (l - scale).exp()
            }
        };
        LogMatrix { m: [entry(&x.a), entry(&x.b), entry(&x.c), entry(&x.d)], log_scale: scale }
    }

    fn normalized(m: [f64; 4], log_scale: f64) -> Self {
        let peak = m.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        if peak == 0.0 {
            return LogMatrix { m, log_scale };
        }
        LogMatrix { m: m.map(|v| v / peak), log_scale: log_scale + peak.ln() }
    }

    pub fn mul(&self, rhs: &LogMatrix) -> LogMatrix {
        let [a, b, c, d] = self.m;
        let [e, f, g, h] = rhs.m;
        LogMatrix::normalized(
            [a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h],
            self.log_scale + rhs.log_scale,
        )
    }

    pub fn mul_seed(&self, epsilon: f64, shift: f64) -> LogMatrix {
        let [a, b, c, d] = self.m;
        LogMatrix::normalized([b, epsilon * a + shift * b, d, epsilon * c + shift * d], self.log_scale)
    }

    pub fn pow(&self, mut n: u64) -> LogMatrix {
        let mut result = LogMatrix::identity();
        let mut base = *self;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// `ln |entry|` for entries indexed 0..4 in row-major order.
    pub fn ln_abs_entry(&self, i: usize) -> f64 {
        self.m[i].abs().ln() + self.log_scale
    }

    pub fn ln_abs_c(&self) -> f64 {
        self.ln_abs_entry(2)
    }

    /// `a / c`, independent of the scale.
    pub fn ratio_ac(&self) -> f64 {
        self.m[0] / self.m[2]
    }

    pub fn abs_entry_ratio(&self, num: usize, den: usize) -> f64 {
        self.m[num].abs() / self.m[den].abs()
    }
}
