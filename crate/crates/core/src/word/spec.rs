use crate::error::{Error, Result};
use crate::matrix::IMatrix2;
use crate::seed::{validate_base_product, SeedMatrix};

/// Where the partial quotients `q_1, q_2, ...` come from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuotientSource {
    Explicit(Vec<u64>),
    /// Terms of a named constant's continued fraction `[0; q_1, q_2, ...]`,
    /// supplied by the caller.
    Named { name: String, terms: Vec<u64> },
    /// Every quotient equal to the given value.
    Constant(u64),
}

impl QuotientSource {
    pub fn all_ones() -> Self {
        QuotientSource::Constant(1)
    }

    /// `q_index`, 1-based.
    pub fn get(&self, index: usize) -> Result<u64> {
        assert!(index >= 1, "quotients are 1-based");
        let q = match self {
            QuotientSource::Explicit(v) | QuotientSource::Named { terms: v, .. } => {
                *v.get(index - 1).ok_or(Error::QuotientExhausted { index })?
            }
            QuotientSource::Constant(q) => *q,
        };
        if q == 0 {
            return Err(Error::NonPositiveQuotient { index });
        }
        Ok(q)
    }

    /// Number of available terms, `None` when unbounded.
    pub fn available(&self) -> Option<usize> {
        match self {
            QuotientSource::Explicit(v) | QuotientSource::Named { terms: v, .. } => Some(v.len()),
            QuotientSource::Constant(_) => None,
        }
    }

    /// The first `count` quotients.
    pub fn prefix(&self, count: usize) -> Result<Vec<u64>> {
        (1..=count).map(|i| self.get(i)).collect()
    }

    /// The source with the first `by` terms dropped.
    pub fn shifted(&self, by: usize) -> QuotientSource {
        match self {
            QuotientSource::Explicit(v) => QuotientSource::Explicit(v.iter().skip(by).copied().collect()),
            QuotientSource::Named { name, terms } => QuotientSource::Named {
                name: name.clone(),
                terms: terms.iter().skip(by).copied().collect(),
            },
            QuotientSource::Constant(q) => QuotientSource::Constant(*q),
        }
    }
}

/// Seeds, the two base words (0-based seed indices) and the quotient schedule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordSpec {
    seeds: Vec<SeedMatrix>,
    p1_word: Vec<usize>,
    p2_word: Vec<usize>,
    quotients: QuotientSource,
}

impl WordSpec {
    /// Validates indices and both base products.
    pub fn new(
        seeds: Vec<SeedMatrix>,
        p1_word: Vec<usize>,
        p2_word: Vec<usize>,
        quotients: QuotientSource,
    ) -> Result<Self> {
        let spec = WordSpec::new_unchecked(seeds, p1_word, p2_word, quotients)?;
        for (level, p) in [(1, spec.p1_matrix()), (2, spec.p2_matrix())] {
            let report = validate_base_product(&p);
            if !report.passed {
                return Err(Error::BaseProduct { level, report });
            }
        }
        Ok(spec)
    }

    /// Structural checks only; the base products are not validated.
    pub fn new_unchecked(
        seeds: Vec<SeedMatrix>,
        p1_word: Vec<usize>,
        p2_word: Vec<usize>,
        quotients: QuotientSource,
    ) -> Result<Self> {
        if seeds.is_empty() {
            return Err(Error::NoSeeds);
        }
        for seed in &seeds {
            SeedMatrix::new(seed.epsilon, seed.shift)?;
        }
        for (level, word) in [(1, &p1_word), (2, &p2_word)] {
            if word.is_empty() {
                return Err(Error::EmptyWord { level });
            }
            if let Some(&index) = word.iter().find(|&&i| i >= seeds.len()) {
                return Err(Error::SeedIndex { index, count: seeds.len() });
            }
        }
        Ok(WordSpec { seeds, p1_word, p2_word, quotients })
    }

    /// `P_1 = A^2`, `P_2 = B^2` over `{A, B}`.
    pub fn ab_squares(quotients: QuotientSource) -> Self {
        WordSpec::new(vec![SeedMatrix::A, SeedMatrix::B], vec![0, 0], vec![1, 1], quotients)
            .expect("A^2 and B^2 are valid base products")
    }

    pub fn seeds(&self) -> &[SeedMatrix] {
        &self.seeds
    }

    pub fn p1_word(&self) -> &[usize] {
        &self.p1_word
    }

    pub fn p2_word(&self) -> &[usize] {
        &self.p2_word
    }

    pub fn base_word(&self, level: usize) -> &[usize] {
        match level {
            1 => &self.p1_word,
            2 => &self.p2_word,
            _ => panic!("base words exist for levels 1 and 2 only"),
        }
    }

    pub fn quotients(&self) -> &QuotientSource {
        &self.quotients
    }

    pub fn seed_matrix(&self, index: usize) -> IMatrix2 {
        self.seeds[index].to_matrix()
    }

    pub fn word_product(&self, word: &[usize]) -> IMatrix2 {
        word.iter().fold(IMatrix2::identity(), |acc, &i| {
            let s = self.seeds[i];
            acc.mul_seed(s.epsilon, s.shift)
        })
    }

    pub fn p1_matrix(&self) -> IMatrix2 {
        self.word_product(&self.p1_word)
    }

    pub fn p2_matrix(&self) -> IMatrix2 {
        self.word_product(&self.p2_word)
    }

    pub fn has_prefix_property(&self) -> bool {
        self.p2_word.starts_with(&self.p1_word)
    }

    /// Lowest level `b` such that `P_b` is a prefix of `P_(b+1)`: 1 when the
    /// base words already nest, otherwise 2 (`P_2` always begins `P_3`).
    pub fn base_level(&self) -> usize {
        if self.has_prefix_property() {
            1
        } else {
            2
        }
    }

    /// Replaces `(P_1, P_2)` by `(P_2, P_3)` and drops `q_1`, so that the new
    /// `P_1` is a prefix of the new `P_2`. Returns a clone when the prefix
    /// property already holds.
    pub fn reindexed(&self) -> Result<WordSpec> {
        if self.has_prefix_property() {
            return Ok(self.clone());
        }
        let q1 = self.quotients.get(1)?;
        let mut p3 = Vec::with_capacity(q1 as usize * self.p2_word.len() + self.p1_word.len());
        for _ in 0..q1 {
            p3.extend_from_slice(&self.p2_word);
        }
        p3.extend_from_slice(&self.p1_word);
        WordSpec::new(self.seeds.clone(), self.p2_word.clone(), p3, self.quotients.shifted(1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quotient_sources() {
        let q = QuotientSource::Explicit(vec![3, 7]);
        assert_eq!(q.get(2).unwrap(), 7);
        assert_eq!(q.get(3), Err(Error::QuotientExhausted { index: 3 }));
        assert_eq!(QuotientSource::all_ones().get(1000).unwrap(), 1);
        assert_eq!(QuotientSource::Explicit(vec![1, 0]).get(2), Err(Error::NonPositiveQuotient { index: 2 }));
        assert_eq!(q.shifted(1), QuotientSource::Explicit(vec![7]));
    }

    #[test]
    fn rejects_bad_specs() {
        let seeds = vec![SeedMatrix::A, SeedMatrix::B];
        let q = QuotientSource::all_ones();
        assert!(matches!(
            WordSpec::new(seeds.clone(), vec![0], vec![0, 0], q.clone()),
            Err(Error::BaseProduct { level: 1, .. })
        ));
        assert!(matches!(
            WordSpec::new(seeds.clone(), vec![0, 2], vec![0, 0], q.clone()),
            Err(Error::SeedIndex { index: 2, count: 2 })
        ));
        assert!(matches!(WordSpec::new(seeds, vec![], vec![0, 0], q), Err(Error::EmptyWord { level: 1 })));
    }

    #[test]
    fn reindexing_restores_prefix() {
        let spec = WordSpec::ab_squares(QuotientSource::Explicit(vec![3, 7, 15, 1]));
        assert!(!spec.has_prefix_property());
        assert_eq!(spec.base_level(), 2);
        let re = spec.reindexed().unwrap();
        assert!(re.has_prefix_property());
        assert_eq!(re.p1_word(), &[1, 1]);
        assert_eq!(re.p2_word(), &[1, 1, 1, 1, 1, 1, 0, 0]);
        assert_eq!(re.quotients().get(1).unwrap(), 7);
    }
}
