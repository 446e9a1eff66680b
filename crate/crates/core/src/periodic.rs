//! Growth rate of a periodically repeated seed word: `rho(P)^(1/k)`.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::matrix::{ln_abs, IMatrix2};
use crate::seed::SeedMatrix;

#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicGrowth {
    pub product: IMatrix2,
    pub period: usize,
    pub trace: BigInt,
    pub det: BigInt,
    /// Eigenvalues are real.
    pub real_eigenvalues: bool,
    /// `ln rho(P)`.
    pub ln_radius: f64,
    /// `rho(P)^(1/k)`.
    pub rate: f64,
}

/// Spectral radius of a 2x2 integer matrix from its trace and determinant.
pub fn ln_spectral_radius(trace: &BigInt, det: &BigInt) -> (f64, bool) {
    let disc: BigInt = trace * trace - det * 4u32;
    if disc.is_negative() {
        // complex pair, |lambda|^2 = det
        return (ln_abs(det) / 2.0, false);
    }
    if trace.bits() < 500 && det.bits() < 1000 {
        let t = trace.to_f64().unwrap().abs();
        let d = disc.to_f64().unwrap();
        return (((t + d.sqrt()) / 2.0).ln(), true);
    }
    // rho = |t| (1 + sqrt(1 - 4 det / t^2)) / 2
    let x = -4.0 * (ln_abs(det) - 2.0 * ln_abs(trace)).exp() * det.signum().to_f64().unwrap();
    (ln_abs(trace) + ((1.0 + (1.0 + x).sqrt()) / 2.0).ln(), true)
}

pub fn periodic_growth(seeds: &[SeedMatrix], word: &[usize]) -> Result<PeriodicGrowth> {
    if word.is_empty() {
        return Err(Error::EmptyWord { level: 1 });
    }
    let mut product = IMatrix2::identity();
    for &i in word {
        let seed = seeds.get(i).ok_or(Error::SeedIndex { index: i, count: seeds.len() })?;
        SeedMatrix::new(seed.epsilon, seed.shift)?;
        product = product.mul_seed(seed.epsilon, seed.shift);
    }
    let trace = product.trace();
    let det = product.det();
    let (ln_radius, real_eigenvalues) = ln_spectral_radius(&trace, &det);
    let rate = (ln_radius / word.len() as f64).exp();
    Ok(PeriodicGrowth { product, period: word.len(), trace, det, real_eigenvalues, ln_radius, rate })
}
