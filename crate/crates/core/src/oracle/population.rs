use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::matrix::IMatrix2;
use crate::seed::SeedMatrix;
use crate::word::{QuotientSource, WordSpec};

/// Which random words feed an oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Population {
    /// `A^j B^k ...` with block exponents in `2..=6`.
    AbBlocks,
    /// Up to 12 symbols, each a random seed with `|shift| <= 5`.
    GeneralSeeds,
    /// Even mix of the two.
    Mixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DetFilter {
    PlusOne,
    AbsOne,
}

impl DetFilter {
    pub fn admits(&self, p: &IMatrix2) -> bool {
        match self {
            DetFilter::PlusOne => p.det() == 1.into(),
            DetFilter::AbsOne => p.is_unimodular(),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            DetFilter::PlusOne => "det=+1",
            DetFilter::AbsOne => "|det|=1",
        }
    }
}

impl Population {
    pub fn label(&self) -> &'static str {
        match self {
            Population::AbBlocks => "ab-blocks",
            Population::GeneralSeeds => "general-seeds",
            Population::Mixed => "mixed",
        }
    }
}

/// A sampled word over its own seed list.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledWord {
    pub seeds: Vec<SeedMatrix>,
    pub word: Vec<usize>,
}

impl SampledWord {
    pub fn product(&self) -> IMatrix2 {
        self.word.iter().fold(IMatrix2::identity(), |acc, &i| acc.mul_seed(self.seeds[i].epsilon, self.seeds[i].shift))
    }
}

fn ab_block_word(rng: &mut ChaCha8Rng, max_blocks: usize) -> SampledWord {
    let blocks = rng.gen_range(1..=max_blocks);
    let mut letter = rng.gen_range(0..2usize);
    let mut word = Vec::new();
    for _ in 0..blocks {
        let e = rng.gen_range(2..=6);
        word.extend(std::iter::repeat_n(letter, e));
        letter ^= 1;
    }
    SampledWord { seeds: vec![SeedMatrix::A, SeedMatrix::B], word }
}

fn general_word(rng: &mut ChaCha8Rng) -> SampledWord {
    let len = rng.gen_range(1..=12);
    let mut seeds: Vec<SeedMatrix> = Vec::new();
    let mut word = Vec::with_capacity(len);
    for _ in 0..len {
        let s = SeedMatrix { epsilon: if rng.gen() { 1 } else { -1 }, shift: rng.gen_range(-5..=5) };
        let idx = match seeds.iter().position(|x| *x == s) {
            Some(i) => i,
            None => {
                seeds.push(s);
                seeds.len() - 1
            }
        };
        word.push(idx);
    }
    SampledWord { seeds, word }
}

pub fn sample_word(rng: &mut ChaCha8Rng, pop: Population) -> SampledWord {
    match pop {
        Population::AbBlocks => ab_block_word(rng, 3),
        Population::GeneralSeeds => general_word(rng),
        Population::Mixed => {
            if rng.gen() {
                ab_block_word(rng, 3)
            } else {
                general_word(rng)
            }
        }
    }
}

pub fn sample_matrix(rng: &mut ChaCha8Rng, pop: Population) -> IMatrix2 {
    sample_word(rng, pop).product()
}

/// A random spec whose base words are `A/B` block words and whose
/// quotients are drawn from `1..=max_q`; `None` when the base products fail
/// validation.
pub fn sample_spec(rng: &mut ChaCha8Rng, levels: usize, max_q: u64) -> Option<WordSpec> {
    let p1 = ab_block_word(rng, 2);
    let p2 = ab_block_word(rng, 2);
    let quotients = (0..levels).map(|_| rng.gen_range(1..=max_q)).collect();
    WordSpec::new(p1.seeds, p1.word, p2.word, QuotientSource::Explicit(quotients)).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    use crate::seed::validate_base_product;

    #[test]
    fn block_words_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let w = sample_word(&mut rng, Population::AbBlocks);
            assert!(validate_base_product(&w.product()).passed);
        }
    }

    #[test]
    fn general_words_are_unimodular() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let w = sample_word(&mut rng, Population::GeneralSeeds);
            assert!(w.word.len() <= 12);
            assert!(w.seeds.iter().all(|s| s.shift.abs() <= 5));
            assert!(DetFilter::AbsOne.admits(&w.product()));
        }
    }

    #[test]
    fn deterministic() {
        let a: Vec<_> = {
            let mut rng = ChaCha8Rng::seed_from_u64(1);
            (0..20).map(|_| sample_matrix(&mut rng, Population::Mixed)).collect()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let b: Vec<_> = (0..20).map(|_| sample_matrix(&mut rng, Population::Mixed)).collect();
        assert_eq!(a, b);
    }
}
