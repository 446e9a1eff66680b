use crate::error::{Error, Result};
use crate::logmat::LogMatrix;
use crate::matrix::IMatrix2;
use crate::word::spec::WordSpec;

/// One level `P_m` of the tower.
#[derive(Clone, Debug)]
pub struct Level {
    /// Word length `k_m`.
    pub k: u128,
    /// Occurrences of `P_1` and `P_2` in `P_m`.
    pub n1: u128,
    pub n2: u128,
    /// Exact matrix, present while the entries fit the digit budget.
    pub exact: Option<IMatrix2>,
    /// Log-domain surrogate, present at every level.
    pub approx: LogMatrix,
}

impl Level {
    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn ln_abs_c(&self) -> f64 {
        self.approx.ln_abs_c()
    }
}

#[derive(Clone, Debug)]
pub struct ProductTower {
    spec: WordSpec,
    levels: Vec<Level>,
    exact_cap: usize,
    /// Relative disagreement between the chained log-domain product and the
    /// exact matrix, at the last level computed both ways.
    last_dual_check: Option<(usize, f64)>,
}

impl ProductTower {
    pub fn spec(&self) -> &WordSpec {
        &self.spec
    }

    /// Number of levels built.
    pub fn horizon(&self) -> usize {
        self.levels.len()
    }

    /// Highest `m` such that levels `1..=m` are all exact.
    pub fn exact_horizon(&self) -> usize {
        self.levels.iter().take_while(|l| l.is_exact()).count()
    }

    pub fn exact_cap(&self) -> usize {
        self.exact_cap
    }

    /// Level `m`, 1-based.
    pub fn level(&self, m: usize) -> &Level {
        &self.levels[m - 1]
    }

    pub fn levels(&self) -> impl Iterator<Item = (usize, &Level)> {
        self.levels.iter().enumerate().map(|(i, l)| (i + 1, l))
    }

    pub fn k(&self, m: usize) -> u128 {
        self.level(m).k
    }

    pub fn exact(&self, m: usize) -> Option<&IMatrix2> {
        self.levels.get(m.wrapping_sub(1)).and_then(|l| l.exact.as_ref())
    }

    /// `q_m`, if the source has it. Every `q_m` with `m <= horizon - 2` does.
    pub fn q(&self, m: usize) -> Option<u64> {
        self.spec.quotients().get(m).ok()
    }

    /// Largest quotient consumed while building.
    pub fn max_q_used(&self) -> u64 {
        (1..=self.horizon().saturating_sub(2)).filter_map(|m| self.q(m)).max().unwrap_or(1)
    }

    pub fn last_dual_check(&self) -> Option<(usize, f64)> {
        self.last_dual_check
    }
}

/// Builds levels `1..=horizon`. Levels whose entries would exceed
/// `exact_cap` decimal digits (and every level above them) are kept in
/// log-domain form only.
pub fn build_tower(spec: &WordSpec, horizon: usize, exact_cap: usize) -> Result<ProductTower> {
    if horizon < 2 {
        return Err(Error::Invalid(format!("tower horizon must be at least 2, got {horizon}")));
    }
    let p1 = spec.p1_matrix();
    let p2 = spec.p2_matrix();
    let mut levels = vec![
        Level { k: spec.p1_word().len() as u128, n1: 1, n2: 0, approx: LogMatrix::from_exact(&p1), exact: Some(p1) },
        Level { k: spec.p2_word().len() as u128, n1: 0, n2: 1, approx: LogMatrix::from_exact(&p2), exact: Some(p2) },
    ];
    let mut last_dual_check = None;
    let ln_cap = exact_cap as f64 * std::f64::consts::LN_10;

    for m in 3..=horizon {
        let q = spec.quotients().get(m - 2)?;
        let (prev, prev2) = (&levels[m - 2], &levels[m - 3]);
        let grow = |x: u128, y: u128| (q as u128).checked_mul(x).and_then(|v| v.checked_add(y));
        let k = grow(prev.k, prev2.k).ok_or(Error::LengthOverflow { level: m })?;
        let n1 = grow(prev.n1, prev2.n1).ok_or(Error::LengthOverflow { level: m })?;
        let n2 = grow(prev.n2, prev2.n2).ok_or(Error::LengthOverflow { level: m })?;

        let chained = prev.approx.pow(q).mul(&prev2.approx);
        let fits = chained.log_scale <= ln_cap;
        let exact = match (&prev.exact, &prev2.exact) {
            (Some(x), Some(y)) if fits => Some(x.pow(q).mul(y)),
            _ => None,
        };
        let approx = match &exact {
            Some(x) => {
                let direct = LogMatrix::from_exact(x);
                last_dual_check = Some((m, dual_discrepancy(&chained, &direct)));
                direct
            }
            None => chained,
        };
        levels.push(Level { k, n1, n2, exact, approx });
    }

    Ok(ProductTower { spec: spec.clone(), levels, exact_cap, last_dual_check })
}

fn dual_discrepancy(chained: &LogMatrix, direct: &LogMatrix) -> f64 {
    let rel = |x: f64, y: f64| if y == 0.0 { x.abs() } else { ((x - y) / y).abs() };
    let mut worst = rel(chained.log_scale, direct.log_scale);
    for i in 0..4 {
        let scale = direct.m.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        worst = worst.max((chained.m[i] - direct.m[i]).abs() / scale);
    }
    worst
}
