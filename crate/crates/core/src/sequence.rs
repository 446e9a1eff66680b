//! Recurrence terms `G_n` driven by the symbol stream, root growth samples,
//! checkpoint ratios and the degenerate-initial-value guard.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix::{ln_abs, ratio_f64};
use crate::word::{checkpoint_indices, symbol_stream, PrefixWalker, ProductTower, WordSpec};

/// `(G_1, G_2)`.
#[derive(Clone, Debug, PartialEq)]
pub enum InitialPair {
    Rational(BigRational, BigRational),
    /// Converted exactly from the binary values; downstream results are
    /// tagged approximate.
    Float(f64, f64),
}

impl InitialPair {
    pub fn integers(g1: i64, g2: i64) -> Self {
        InitialPair::Rational(BigRational::from_integer(g1.into()), BigRational::from_integer(g2.into()))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, InitialPair::Rational(..))
    }

    /// Exact rational values; errors on non-finite floats.
    pub fn as_rationals(&self) -> Result<(BigRational, BigRational)> {
        match self {
            InitialPair::Rational(a, b) => Ok((a.clone(), b.clone())),
            InitialPair::Float(a, b) => {
                let conv = |x: f64| {
                    BigRational::from_float(x).ok_or_else(|| Error::Invalid(format!("initial value {x} is not finite")))
                };
                Ok((conv(*a)?, conv(*b)?))
            }
        }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        match self {
            InitialPair::Rational(a, b) => (a.to_f64().unwrap_or(f64::NAN), b.to_f64().unwrap_or(f64::NAN)),
            InitialPair::Float(a, b) => (*a, *b),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            InitialPair::Rational(a, b) => a.is_zero() && b.is_zero(),
            InitialPair::Float(a, b) => *a == 0.0 && *b == 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RunFlag {
    AllZero,
    Approximate,
    DegenerateInit,
    LinearCase,
}

#[derive(Clone, Debug, Default)]
pub struct GenerateOptions {
    /// Keep every term (memory grows quadratically with the length).
    pub keep_terms: bool,
    /// Indices whose exact values should be kept.
    pub record: Vec<u64>,
}

#[derive(Clone, Debug)]
pub struct SequenceRun {
    pub init: InitialPair,
    /// Index of the last term, `N + 2`.
    pub last_index: u64,
    /// `ln |G_n|` for `n = 1..=last_index` (`-inf` at zeros).
    pub log_abs: Vec<f64>,
    /// All terms from `G_1`, when requested.
    pub terms: Option<Vec<BigRational>>,
    pub recorded: BTreeMap<u64, BigRational>,
    /// `(G_(N+1), G_(N+2))`.
    pub tail: (BigRational, BigRational),
    pub flags: Vec<RunFlag>,
}

impl SequenceRun {
    pub fn is_approximate(&self) -> bool {
        self.flags.contains(&RunFlag::Approximate)
    }

    pub fn flag(&mut self, f: RunFlag) {
        if !self.flags.contains(&f) {
            self.flags.push(f);
        }
    }

    pub fn ln_abs_term(&self, n: u64) -> Option<f64> {
        self.log_abs.get((n as usize).checked_sub(1)?).copied()
    }

    pub fn term(&self, n: u64) -> Option<BigRational> {
        if let Some(t) = &self.terms {
            return t.get((n as usize).checked_sub(1)?).cloned();
        }
        if let Some(v) = self.recorded.get(&n) {
            return Some(v.clone());
        }
        match n {
            _ if n + 1 == self.last_index => Some(self.tail.0.clone()),
            _ if n == self.last_index => Some(self.tail.1.clone()),
            _ => None,
        }
    }
}

pub fn generate_sequence(spec: &WordSpec, init: &InitialPair, n: u64) -> Result<SequenceRun> {
    generate_sequence_with(spec, init, n, &GenerateOptions::default())
}

/// Terms `G_3..G_(n+2)` by streaming the seed word and stepping
/// `(x, y) -> (y, eps x + shift y)` on integers scaled by the common
/// denominator of the initial values.
pub fn generate_sequence_with(spec: &WordSpec, init: &InitialPair, n: u64, opts: &GenerateOptions) -> Result<SequenceRun> {
    if n == 0 {
        return Err(Error::Invalid("sequence length must be at least 1".into()));
    }
    let (g1, g2) = init.as_rationals()?;
    let den = g1.denom().lcm(g2.denom());
    let ln_den = ln_abs(&den);
    let scale = |x: &BigRational| x.numer() * (&den / x.denom());
    let (mut x, mut y) = (scale(&g1), scale(&g2));
    let unscale = |v: &BigInt| BigRational::new(v.clone(), den.clone());
    let last_index = n + 2;
    let record: std::collections::BTreeSet<u64> = opts.record.iter().copied().collect();

    let mut log_abs = Vec::with_capacity(last_index as usize);
    let mut terms = opts.keep_terms.then(Vec::new);
    let mut recorded = BTreeMap::new();
    let mut push = |idx: u64, v: &BigInt, log_abs: &mut Vec<f64>| {
        log_abs.push(ln_abs(v) - ln_den);
        if let Some(t) = terms.as_mut() {
            t.push(unscale(v));
        }
        if record.contains(&idx) {
            recorded.insert(idx, unscale(v));
        }
    };
    push(1, &x, &mut log_abs);
    push(2, &y, &mut log_abs);
    let mut stream = symbol_stream(spec);
    for idx in 3..=last_index {
        let s = stream.next().expect("unbounded stream")?;
        let seed = spec.seeds()[s];
        let next = &x * seed.epsilon + &y * seed.shift;
        x = std::mem::replace(&mut y, next);
        push(idx, &y, &mut log_abs);
    }
    let mut run = SequenceRun {
        init: init.clone(),
        last_index,
        log_abs,
        terms,
        recorded,
        tail: (unscale(&x), unscale(&y)),
        flags: Vec::new(),
    };
    if init.is_zero() {
        run.flag(RunFlag::AllZero);
    }
    if !init.is_exact() {
        run.flag(RunFlag::Approximate);
    }
    Ok(run)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RootSamples {
    /// `(n, |G_n|^(1/n))`
    pub samples: Vec<(u64, f64)>,
    /// Sample indices skipped because `G_n = 0`.
    pub skipped: Vec<u64>,
}

/// `|G_n|^(1/n)` at `n = stride, 2 stride, ...`, computed from logs.
pub fn root_growth(run: &SequenceRun, stride: u64) -> RootSamples {
    let stride = stride.max(1);
    let mut out = RootSamples { samples: Vec::new(), skipped: Vec::new() };
    let mut n = stride;
    while n <= run.last_index {
        match run.ln_abs_term(n) {
            Some(l) if l.is_finite() => out.samples.push((n, (l / n as f64).exp())),
            _ => out.skipped.push(n),
        }
        n += stride;
    }
    out
}

/// `|G_n|^(1/n)`, `None` at a zero term or out of range.
pub fn root_at(run: &SequenceRun, n: u64) -> Option<f64> {
    let l = run.ln_abs_term(n)?;
    l.is_finite().then(|| (l / n as f64).exp())
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckpointRatio {
    pub n: u64,
    /// `G_(n+1) / G_(n+2)`
    pub ratio: f64,
    /// `e_n / g_n`, the left column of `Q_n`.
    pub column_ratio: f64,
}

/// Ratios at every checkpoint `n <= limit`.
pub fn checkpoint_ratios(
    spec: &WordSpec,
    init: &InitialPair,
    tower: &ProductTower,
    limit: u64,
) -> Result<Vec<CheckpointRatio>> {
    let (g1, g2) = init.as_rationals()?;
    // the common denominator cancels in the ratio
    let den = g1.denom().lcm(g2.denom());
    let (x, y) = (g1.numer() * (&den / g1.denom()), g2.numer() * (&den / g2.denom()));
    let mut walker = PrefixWalker::new(spec, None);
    let mut out = Vec::new();
    for n in checkpoint_indices(tower, limit)? {
        let q = walker.advance_to(n)?;
        let next = &x * &q.a + &y * &q.c;
        let after = &x * &q.b + &y * &q.d;
        if after.is_zero() || q.c.is_zero() {
            return Err(Error::ZeroDivisor { index: n });
        }
        let ratio = ratio_f64(&next, &after);
        let column_ratio = ratio_f64(&q.a, &q.c);
        out.push(CheckpointRatio { n, ratio, column_ratio });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub enum DegenerateStatus {
    Ok { note: Option<&'static str> },
    /// `|g1 M + g2|` is within the tolerance.
    Warning { residual: f64 },
}

impl DegenerateStatus {
    pub fn is_ok(&self) -> bool {
        matches!(self, DegenerateStatus::Ok { .. })
    }
}

pub const RATIONAL_CERTIFICATE: &str = "rational initial values cannot satisfy G1 = -G2/M for irrational M";

/// Flags initial values on (or numerically near) the line `G_1 = -G_2 / M`.
pub fn degenerate_check(init: &InitialPair, m: f64, err_m: f64, tol: f64) -> DegenerateStatus {
    if init.is_zero() {
        return DegenerateStatus::Warning { residual: 0.0 };
    }
    if init.is_exact() {
        return DegenerateStatus::Ok { note: Some(RATIONAL_CERTIFICATE) };
    }
    let (g1, g2) = init.to_f64();
    let residual = (g1 * m + g2).abs();
    if residual <= tol + g1.abs() * err_m {
        DegenerateStatus::Warning { residual }
    } else {
        DegenerateStatus::Ok { note: None }
    }
}

/// `min |e_t M + g_t|` over stream prefixes `Q_t`, `0 <= t < k_(b+1)`.
pub fn m_prime(tower: &ProductTower, m: f64) -> Result<f64> {
    let k = tower.k(tower.spec().base_level() + 1) as u64;
    let mut walker = PrefixWalker::new(tower.spec(), None);
    let mut best = m.abs();
    for t in 1..k {
        let q = walker.advance_to(t)?;
        let e = q.a.to_f64().unwrap_or(f64::NAN);
        let g = q.c.to_f64().unwrap_or(f64::NAN);
        best = best.min((e * m + g).abs());
    }
    Ok(best)
}

/// `(|G_1| + |G_2|) D`, a bound on `|G_(n+1)| / n` in the linear case.
pub fn linear_slope_bound(init: &InitialPair, d: &BigInt) -> Result<BigRational> {
    let (g1, g2) = init.as_rationals()?;
    Ok((g1.abs() + g2.abs()) * BigRational::from_integer(d.clone()))
}
