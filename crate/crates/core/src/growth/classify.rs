use crate::growth::sandwich::{find_sandwich, is_degenerate_pattern, preservation_failures, SandwichConstants};
use crate::word::ProductTower;

pub const DEFAULT_CLASSIFY_HORIZON: usize = 12;

#[derive(Clone, Debug, PartialEq)]
pub enum CaseLabel {
    /// Every level shows `|b| = |c| = |d| - 1 = |a| + 1`.
    Linear,
    /// Sandwich constants exist at the witness level.
    Exponential(SandwichConstants),
    /// Neither pattern settled within this many levels.
    Undetermined(usize),
}

impl CaseLabel {
    pub fn name(&self) -> &'static str {
        match self {
            CaseLabel::Linear => "linear",
            CaseLabel::Exponential(_) => "exponential",
            CaseLabel::Undetermined(_) => "undetermined",
        }
    }

    pub fn constants(&self) -> Option<&SandwichConstants> {
        match self {
            CaseLabel::Exponential(c) => Some(c),
            _ => None,
        }
    }
}

/// Scans levels `2..=horizon` (capped at the exact part of the tower). The
/// witness is the first level whose constants can be built and still bound
/// every later exact level; constants read off a single early level can be
/// too tight for the row ratios further up.
pub fn classify_case(tower: &ProductTower, horizon: usize) -> CaseLabel {
    let top = horizon.min(tower.horizon());
    let exact_top = top.min(tower.exact_horizon());
    for m in 2..=exact_top {
        if let Some(c) = find_sandwich(tower, m) {
            if preservation_failures(tower, &c).is_empty() {
                return CaseLabel::Exponential(c);
            }
        }
    }
    let all_degenerate = (2..=exact_top).all(|m| tower.exact(m).is_some_and(is_degenerate_pattern));
    if exact_top == horizon && horizon >= 3 && all_degenerate {
        CaseLabel::Linear
    } else {
        CaseLabel::Undetermined(horizon)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::SeedMatrix;
    use crate::word::{build_tower, QuotientSource, WordSpec};

    #[test]
    fn standard_specs() {
        let spec = WordSpec::new(
            vec![SeedMatrix::A, SeedMatrix::B],
            vec![0, 0, 0, 1, 1, 1],
            vec![0, 0, 0, 1, 1, 1],
            QuotientSource::all_ones(),
        )
        .unwrap();
        let t = build_tower(&spec, 12, 1000).unwrap();
        assert_eq!(classify_case(&t, 12), CaseLabel::Linear);
        assert_eq!(classify_case(&t, 20), CaseLabel::Undetermined(20));

        let fib = WordSpec::new(vec![SeedMatrix::A], vec![0, 0], vec![0, 0], QuotientSource::all_ones()).unwrap();
        let t = build_tower(&fib, 12, 1000).unwrap();
        let c = classify_case(&t, 12);
        assert_eq!(c.constants().unwrap().base_level, 3);

        let pi = WordSpec::ab_squares(QuotientSource::Explicit(vec![3, 7, 15, 1]));
        let t = build_tower(&pi, 6, 1000).unwrap();
        let c = classify_case(&t, 6);
        let w = c.constants().unwrap();
        assert_eq!(w.base_level, 3);
        assert_eq!((w.r2.clone(), w.r3.clone(), w.r4.clone()), (17.into(), 16.into(), 17.into()));
    }

    #[test]
    fn skips_levels_whose_constants_break_later() {
        // level 2 gives (1, 4, 3, 4) but level 3 has row ratio 7/9 > 3/4
        let spec = WordSpec::new(
            vec![SeedMatrix::A, SeedMatrix::B],
            vec![0, 0, 0],
            vec![1, 1, 1, 1],
            QuotientSource::all_ones(),
        )
        .unwrap();
        let t = build_tower(&spec, 12, 1000).unwrap();
        assert!(find_sandwich(&t, 2).is_some());
        let w = classify_case(&t, 12);
        let w = w.constants().unwrap();
        assert_eq!(w.base_level, 3);
        assert!(preservation_failures(&t, w).is_empty());
    }
}
