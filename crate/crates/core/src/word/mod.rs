//! Balanced-word schedules: the tower `P(m+2) = P(m+1)^q(m) P(m)`, its
//! limiting seed word, prefix products and their decomposition into tower
//! powers.

mod decompose;
mod frequency;
mod spec;
mod stream;
mod tower;

pub use decompose::{checkpoint_indices, checkpoint_indices_from, decompose_prefix, decompose_prefix_from, Decomposition};
pub use frequency::{block_word, cf_convergents, letter_frequency, letter_ratio};
pub use spec::{QuotientSource, WordSpec};
pub use stream::{prefix_product, symbol_stream, PrefixWalker, SymbolStream};
pub use tower::{build_tower, Level, ProductTower};
