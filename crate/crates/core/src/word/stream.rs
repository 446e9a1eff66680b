use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::matrix::IMatrix2;
use crate::word::spec::WordSpec;

#[derive(Clone, Debug)]
enum Frame {
    /// Position inside the literal word of level 1 or 2.
    Literal { level: usize, pos: usize },
    /// Next child of a composite level: children `0..q` are `P(level-1)`,
    /// child `q` is `P(level-2)`.
    Composite { level: usize, child: u64, q: u64 },
}

/// The limiting seed word, as 0-based seed indices.
///
/// Starts with the literal `P_2` (which begins every higher level), then
/// whenever level `T` is complete continues with the unseen tail of
/// `P(T+1) = P(T)^q P(T-1)`. Memory is one frame per level of depth.
#[derive(Clone, Debug)]
pub struct SymbolStream {
    spec: WordSpec,
    stack: Vec<Frame>,
    top: usize,
    emitted: u64,
    failed: bool,
}

impl SymbolStream {
    pub fn new(spec: &WordSpec) -> Self {
        SymbolStream {
            spec: spec.clone(),
            stack: vec![Frame::Literal { level: 2, pos: 0 }],
            top: 2,
            emitted: 0,
            failed: false,
        }
    }

    /// Number of symbols emitted so far.
    pub fn position(&self) -> u64 {
        self.emitted
    }

    fn frame_for(&self, level: usize) -> Result<Frame> {
        if level <= 2 {
            Ok(Frame::Literal { level, pos: 0 })
        } else {
            Ok(Frame::Composite { level, child: 0, q: self.spec.quotients().get(level - 2)? })
        }
    }

    fn advance(&mut self) -> Result<usize> {
        loop {
            let next = match self.stack.last_mut() {
                None => {
                    self.top += 1;
                    let q = self.spec.quotients().get(self.top - 2)?;
                    self.stack.push(Frame::Composite { level: self.top, child: 1, q });
                    continue;
                }
                Some(Frame::Literal { level, pos }) => {
                    let word = self.spec.base_word(*level);
                    if *pos < word.len() {
                        let s = word[*pos];
                        *pos += 1;
                        return Ok(s);
                    }
                    None
                }
                Some(Frame::Composite { level, child, q }) => {
                    if *child > *q {
                        None
                    } else {
                        let sub = if *child < *q { *level - 1 } else { *level - 2 };
                        *child += 1;
                        Some(sub)
                    }
                }
            };
            match next {
                None => {
                    self.stack.pop();
                }
                Some(sub) => {
                    let frame = self.frame_for(sub)?;
                    self.stack.push(frame);
                }
            }
        }
    }

    /// The next `n` symbols.
    pub fn take_symbols(&mut self, n: usize) -> Result<Vec<usize>> {
        self.by_ref().take(n).collect()
    }
}

impl Iterator for SymbolStream {
    type Item = Result<usize>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        match self.advance() {
            Ok(s) => {
                self.emitted += 1;
                Some(Ok(s))
            }
            Err(e) => {
                self.failed = true;
                Some(Err(e))
            }
        }
    }
}

pub fn symbol_stream(spec: &WordSpec) -> SymbolStream {
    SymbolStream::new(spec)
}

/// Running product `Q_n` of the first `n` stream matrices.
#[derive(Clone, Debug)]
pub struct PrefixWalker {
    stream: SymbolStream,
    product: IMatrix2,
    digit_cap: Option<usize>,
}

impl PrefixWalker {
    pub fn new(spec: &WordSpec, digit_cap: Option<usize>) -> Self {
        PrefixWalker { stream: SymbolStream::new(spec), product: IMatrix2::identity(), digit_cap }
    }

    pub fn position(&self) -> u64 {
        self.stream.position()
    }

    /// `Q_position`.
    pub fn product(&self) -> &IMatrix2 {
        &self.product
    }

    /// Multiplies in one more symbol and returns it.
    pub fn step(&mut self) -> Result<usize> {
        let s = self.stream.next().expect("stream is unbounded until it fails")?;
        let seed = self.stream.spec.seeds()[s];
        self.product = self.product.mul_seed(seed.epsilon, seed.shift);
        if let Some(cap) = self.digit_cap {
            if self.stream.position().is_multiple_of(64) && over_cap(&self.product, cap) {
                return Err(Error::DigitBudget { cap });
            }
        }
        Ok(s)
    }

    /// Advances to `Q_n`; `n` must not be behind the current position.
    pub fn advance_to(&mut self, n: u64) -> Result<&IMatrix2> {
        if n < self.position() {
            return Err(Error::Invalid(format!("walker is at {} and cannot rewind to {n}", self.position())));
        }
        while self.position() < n {
            self.step()?;
        }
        if let Some(cap) = self.digit_cap {
            if over_cap(&self.product, cap) {
                return Err(Error::DigitBudget { cap });
            }
        }
        Ok(&self.product)
    }
}

fn over_cap(m: &IMatrix2, cap: usize) -> bool {
    // bits * log10(2) bounds the digit count from below within one digit
    let bits = m.entries().iter().map(|e: &&BigInt| e.bits()).max().unwrap_or(0);
    bits as f64 * std::f64::consts::LOG10_2 > cap as f64 && m.digits() > cap
}

/// `Q_n`, the exact product of the first `n` stream matrices.
pub fn prefix_product(spec: &WordSpec, n: u64, digit_cap: Option<usize>) -> Result<IMatrix2> {
    if n == 0 {
        return Err(Error::Invalid("prefix length must be at least 1".into()));
    }
    let mut walker = PrefixWalker::new(spec, digit_cap);
    walker.advance_to(n).cloned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::SeedMatrix;
    use crate::word::spec::QuotientSource;
    use crate::word::tower::build_tower;

    fn pi_spec() -> WordSpec {
        WordSpec::ab_squares(QuotientSource::Explicit(vec![3, 7, 15, 1, 292]))
    }

    /// Expands `P_m` into its full seed word.
    fn expand(spec: &WordSpec, m: usize) -> Vec<usize> {
        if m <= 2 {
            return spec.base_word(m).to_vec();
        }
        let q = spec.quotients().get(m - 2).unwrap();
        let mut w = Vec::new();
        let hi = expand(spec, m - 1);
        for _ in 0..q {
            w.extend_from_slice(&hi);
        }
        w.extend(expand(spec, m - 2));
        w
    }

    #[test]
    fn first_symbols() {
        let s = symbol_stream(&pi_spec()).take_symbols(16).unwrap();
        assert_eq!(s, vec![1, 1, 1, 1, 1, 1, 0, 0, 1, 1, 1, 1, 1, 1, 0, 0]);
    }

    #[test]
    fn prefix_stable_against_levels() {
        let spec = pi_spec();
        let p5 = expand(&spec, 5);
        let s = symbol_stream(&spec).take_symbols(p5.len()).unwrap();
        assert_eq!(s, p5);
        for m in 3..5 {
            assert!(p5.starts_with(&expand(&spec, m)));
        }
    }

    #[test]
    fn nested_bases_start_at_level_one() {
        let seeds = vec![SeedMatrix::A, SeedMatrix::B];
        let spec = WordSpec::new(seeds, vec![0, 0], vec![0, 0, 1, 1, 1], QuotientSource::Constant(2)).unwrap();
        let p6 = expand(&spec, 6);
        assert_eq!(symbol_stream(&spec).take_symbols(p6.len()).unwrap(), p6);
    }

    #[test]
    fn exhaustion_surfaces_once() {
        let spec = WordSpec::ab_squares(QuotientSource::Explicit(vec![3]));
        let items: Vec<_> = symbol_stream(&spec).take(100).collect();
        assert_eq!(items.len(), 9);
        assert_eq!(items[8], Err(Error::QuotientExhausted { index: 2 }));
    }

    #[test]
    fn prefix_products_match_tower() {
        let spec = pi_spec();
        let t = build_tower(&spec, 5, 10_000).unwrap();
        for m in 3..=5 {
            assert_eq!(&prefix_product(&spec, t.k(m) as u64, None).unwrap(), t.exact(m).unwrap());
        }
        assert_eq!(prefix_product(&spec, 1, None).unwrap(), SeedMatrix::B.to_matrix());
        assert!(prefix_product(&spec, 0, None).is_err());
    }

    #[test]
    fn digit_cap_enforced() {
        let spec = WordSpec::new(vec![SeedMatrix::A], vec![0, 0], vec![0, 0], QuotientSource::all_ones()).unwrap();
        assert_eq!(prefix_product(&spec, 5000, Some(50)).unwrap_err(), Error::DigitBudget { cap: 50 });
        assert!(prefix_product(&spec, 200, Some(50)).is_ok());
    }
}
