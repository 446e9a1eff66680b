//! JSON run configuration.

use std::path::PathBuf;

use num_rational::BigRational;
use serde::Deserialize;
use serde_json::Value;
use sturmfib::growth::{DEFAULT_CLASSIFY_HORIZON, DEFAULT_DIGIT_CAP, DEFAULT_LEVELS};
use sturmfib::sequence::InitialPair;
use sturmfib::word::{QuotientSource, WordSpec};
use sturmfib::SeedMatrix;
use thiserror::Error;

use crate::parse::{parse_rational, parse_word, ParseError};

pub const MIN_DIGIT_CAP: usize = 1_000;
pub const DEFAULT_TERMS: u64 = 10_000;
pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{field}: {source}")]
    Parse { field: &'static str, source: ParseError },
    #[error("{0}")]
    Invalid(String),
    #[error("spec rejected: {0}")]
    Spec(#[from] sturmfib::Error),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSeed {
    epsilon: i64,
    shift: i64,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawWord {
    Indices(Vec<usize>),
    Text(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInit {
    g1: Value,
    g2: Value,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    seeds: Option<Vec<RawSeed>>,
    p1_word: RawWord,
    p2_word: RawWord,
    quotients: Value,
    init: Option<RawInit>,
    levels: Option<usize>,
    terms: Option<u64>,
    digit_cap: Option<usize>,
    classify_horizon: Option<usize>,
    trials: Option<u64>,
    seed: Option<u64>,
    full_digits: Option<bool>,
    out: Option<PathBuf>,
}

/// A validated run: the word spec, optional initial pair, horizons and
/// output settings.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub spec: WordSpec,
    pub init: Option<InitialPair>,
    pub levels: usize,
    pub terms: u64,
    pub digit_cap: usize,
    pub classify_horizon: usize,
    pub trials: u64,
    pub seed: u64,
    pub full_digits: bool,
    pub out: Option<PathBuf>,
}

/// Command-line values that take precedence over the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub levels: Option<usize>,
    pub terms: Option<u64>,
    pub digit_cap: Option<usize>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub full_digits: bool,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    /// Defaults for everything but the spec.
    pub fn for_spec(spec: WordSpec) -> Self {
        RunConfig {
            spec,
            init: None,
            levels: DEFAULT_LEVELS,
            terms: DEFAULT_TERMS,
            digit_cap: DEFAULT_DIGIT_CAP,
            classify_horizon: DEFAULT_CLASSIFY_HORIZON,
            trials: sturmfib::oracle::DEFAULT_TRIALS,
            seed: DEFAULT_SEED,
            full_digits: false,
            out: None,
        }
    }

    pub fn apply(&mut self, o: &Overrides) -> Result<(), ConfigError> {
        self.levels = o.levels.unwrap_or(self.levels);
        self.terms = o.terms.unwrap_or(self.terms);
        self.digit_cap = o.digit_cap.unwrap_or(self.digit_cap);
        self.trials = o.trials.unwrap_or(self.trials);
        self.seed = o.seed.unwrap_or(self.seed);
        self.full_digits |= o.full_digits;
        if o.out.is_some() {
            self.out = o.out.clone();
        }
        self.validate()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let positive = [
            ("levels", self.levels as u64),
            ("terms", self.terms),
            ("classify_horizon", self.classify_horizon as u64),
            ("trials", self.trials),
        ];
        if let Some((name, _)) = positive.iter().find(|(_, v)| *v == 0) {
            return Err(ConfigError::Invalid(format!("{name} must be positive")));
        }
        if self.levels < 2 {
            return Err(ConfigError::Invalid("levels must be at least 2".into()));
        }
        if self.digit_cap < MIN_DIGIT_CAP {
            return Err(ConfigError::Invalid(format!("digit_cap must be at least {MIN_DIGIT_CAP}")));
        }
        Ok(())
    }
}

/// Parses and validates a config document.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let raw: RawConfig = serde_json::from_str(text)?;
    let seeds = match raw.seeds {
        None => vec![SeedMatrix::A, SeedMatrix::B],
        Some(list) if list.is_empty() => return Err(ConfigError::Invalid("seeds: empty list".into())),
        Some(list) => list.iter().map(|s| SeedMatrix::new(s.epsilon, s.shift)).collect::<Result<_, _>>()?,
    };
    let p1 = word_field(raw.p1_word, seeds.len(), "p1_word")?;
    let p2 = word_field(raw.p2_word, seeds.len(), "p2_word")?;
    let quotients = quotient_field(&raw.quotients)?;
    let spec = WordSpec::new(seeds, p1, p2, quotients)?;
    let init = raw.init.map(|i| init_pair(&i.g1, &i.g2)).transpose()?;
    let mut cfg = RunConfig::for_spec(spec);
    cfg.init = init;
    cfg.levels = raw.levels.unwrap_or(cfg.levels);
    cfg.terms = raw.terms.unwrap_or(cfg.terms);
    cfg.digit_cap = raw.digit_cap.unwrap_or(cfg.digit_cap);
    cfg.classify_horizon = raw.classify_horizon.unwrap_or(cfg.classify_horizon);
    cfg.trials = raw.trials.unwrap_or(cfg.trials);
    cfg.seed = raw.seed.unwrap_or(cfg.seed);
    cfg.full_digits = raw.full_digits.unwrap_or(false);
    cfg.out = raw.out;
    cfg.validate()?;
    Ok(cfg)
}

fn word_field(w: RawWord, seed_count: usize, field: &'static str) -> Result<Vec<usize>, ConfigError> {
    match w {
        RawWord::Text(s) => parse_word(&s, seed_count).map_err(|source| ConfigError::Parse { field, source }),
        RawWord::Indices(v) if v.is_empty() => Err(ConfigError::Invalid(format!("{field}: empty word"))),
        RawWord::Indices(v) => v
            .into_iter()
            .map(|i| {
                if i == 0 || i > seed_count {
                    Err(ConfigError::Parse { field, source: ParseError::IndexRange { index: i, count: seed_count } })
                } else {
                    Ok(i - 1)
                }
            })
            .collect(),
    }
}

fn quotient_terms(v: &Value, field: &str) -> Result<Vec<u64>, ConfigError> {
    let list = v.as_array().ok_or_else(|| ConfigError::Invalid(format!("quotients.{field}: expected an array")))?;
    if list.is_empty() {
        return Err(ConfigError::Invalid(format!("quotients.{field}: empty")));
    }
    list.iter()
        .map(|x| match x.as_u64() {
            Some(q) if q > 0 => Ok(q),
            _ => Err(ConfigError::Invalid(format!("quotients.{field}: {x} is not a positive integer"))),
        })
        .collect()
}

fn quotient_field(v: &Value) -> Result<QuotientSource, ConfigError> {
    let obj = v.as_object().ok_or_else(|| ConfigError::Invalid("quotients: expected an object".into()))?;
    let keys: Vec<&str> = obj.keys().map(String::as_str).collect();
    match keys.as_slice() {
        ["explicit"] => Ok(QuotientSource::Explicit(quotient_terms(&obj["explicit"], "explicit")?)),
        ["named", "terms"] => {
            let name = obj["named"]
                .as_str()
                .ok_or_else(|| ConfigError::Invalid("quotients.named: expected a string".into()))?;
            Ok(QuotientSource::Named { name: name.to_string(), terms: quotient_terms(&obj["terms"], "terms")? })
        }
        ["constant"] => match obj["constant"].as_u64() {
            Some(q) if q > 0 => Ok(QuotientSource::Constant(q)),
            _ => Err(ConfigError::Invalid("quotients.constant: expected a positive integer".into())),
        },
        _ => Err(ConfigError::Invalid(format!(
            "quotients: expected {{\"explicit\": [..]}}, {{\"named\": .., \"terms\": [..]}} or {{\"constant\": q}}, got keys {keys:?}"
        ))),
    }
}

enum InitValue {
    Exact(BigRational),
    Float(f64),
}

fn init_value(v: &Value, field: &'static str) -> Result<InitValue, ConfigError> {
    match v {
        Value::String(s) => parse_rational(s).map(InitValue::Exact).map_err(|source| ConfigError::Parse { field, source }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(InitValue::Exact(BigRational::from_integer(i.into())))
            } else {
                let x = n.as_f64().filter(|x| x.is_finite());
                x.map(InitValue::Float).ok_or_else(|| ConfigError::Invalid(format!("{field}: {n} is not finite")))
            }
        }
        _ => Err(ConfigError::Invalid(format!("{field}: expected a number or a \"p/q\" string"))),
    }
}

/// Exact when both values are integers or strings; a JSON float on either
/// side makes the pair approximate.
fn init_pair(g1: &Value, g2: &Value) -> Result<InitialPair, ConfigError> {
    use num_traits::ToPrimitive;
    let as_f64 = |x: InitValue| match x {
        InitValue::Exact(q) => q.to_f64().unwrap_or(f64::NAN),
        InitValue::Float(f) => f,
    };
    match (init_value(g1, "init.g1")?, init_value(g2, "init.g2")?) {
        (InitValue::Exact(a), InitValue::Exact(b)) => Ok(InitialPair::Rational(a, b)),
        (a, b) => Ok(InitialPair::Float(as_f64(a), as_f64(b))),
    }
}
