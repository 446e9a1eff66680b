//! Randomized and enumerated falsification harnesses for the structural
//! lemmas, with exact comparisons throughout.

mod lemmas;
mod population;

use std::time::Duration;

use crate::matrix::IMatrix2;

pub use lemmas::{
    run_suite, standard_linear_spec, verify_decomposition, verify_entry_divergence, verify_entry_divergence_random,
    verify_g_bounds, verify_g_bounds_random, verify_lemma_positive, verify_lemma_power, verify_lemma_power_random,
    verify_linear_growth, verify_samesigns, SuiteConfig,
};
pub use population::{sample_matrix, sample_spec, sample_word, DetFilter, Population, SampledWord};

pub const DEFAULT_TRIALS: u64 = 10_000;

/// Everything needed to reproduce one failure.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub note: String,
    pub matrices: Vec<IMatrix2>,
    pub indices: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LemmaReport {
    pub lemma: String,
    pub population: String,
    /// Candidates drawn, including filtered ones.
    pub generated: u64,
    /// Candidates rejected by the hypothesis filter.
    pub filtered: u64,
    /// Candidates actually checked.
    pub instances: u64,
    pub failures: Vec<Witness>,
    pub notes: Vec<String>,
    pub elapsed: Duration,
}

impl LemmaReport {
    pub fn new(lemma: &str, population: &str) -> Self {
        LemmaReport {
            lemma: lemma.to_string(),
            population: population.to_string(),
            generated: 0,
            filtered: 0,
            instances: 0,
            failures: Vec::new(),
            notes: Vec::new(),
            elapsed: Duration::ZERO,
        }
    }

    /// No failures and at least one real instance.
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.instances > 0
    }

    pub fn filter_rate(&self) -> f64 {
        if self.generated == 0 {
            0.0
        } else {
            self.filtered as f64 / self.generated as f64
        }
    }

    pub(crate) fn skip(&mut self) {
        self.generated += 1;
        self.filtered += 1;
    }

    pub(crate) fn check(&mut self, outcome: Option<Witness>) {
        self.generated += 1;
        self.instances += 1;
        if let Some(w) = outcome {
            self.failures.push(w);
        }
    }

    /// Combines two runs of the same lemma.
    pub fn merge(mut self, other: LemmaReport) -> LemmaReport {
        self.generated += other.generated;
        self.filtered += other.filtered;
        self.instances += other.instances;
        self.failures.extend(other.failures);
        self.notes.extend(other.notes);
        self.elapsed += other.elapsed;
        if self.population != other.population {
            self.population = format!("{}+{}", self.population, other.population);
        }
        self
    }
}
