//! Text parsers for words and exact rational values.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

/// Words longer than this are rejected rather than expanded.
pub const MAX_WORD_LEN: usize = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("empty input")]
    Empty,
    #[error("unexpected character {ch:?} at byte {at}")]
    Unexpected { ch: char, at: usize },
    #[error("letter {letter} names seed {index} but only {count} seeds are defined")]
    UnknownSeed { letter: char, index: usize, count: usize },
    #[error("seed index {index} out of range 1..={count}")]
    IndexRange { index: usize, count: usize },
    #[error("exponent at byte {at} is missing or zero")]
    BadExponent { at: usize },
    #[error("word expands past {MAX_WORD_LEN} symbols")]
    TooLong,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("malformed number {0:?}")]
    Number(String),
}

/// Parses a seed word into 0-based seed indices.
///
/// Two notations are accepted: letters with optional exponents
/// (`A^3B^3`, `A3 B3`, `AB`, where `A` is seed 1, `B` seed 2, ...), or
/// 1-based indices separated by commas or whitespace (`1,1,2,2`).
pub fn parse_word(input: &str, seed_count: usize) -> Result<Vec<usize>, ParseError> {
    let text = input.trim();
    if text.is_empty() {
        return Err(ParseError::Empty);
    }
    if text.starts_with(|c: char| c.is_ascii_digit()) {
        parse_indices(text, seed_count)
    } else {
        parse_letters(text, seed_count)
    }
}

fn parse_indices(text: &str, seed_count: usize) -> Result<Vec<usize>, ParseError> {
    let mut out = Vec::new();
    for tok in text.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
        let index: usize = tok.parse().map_err(|_| ParseError::Number(tok.to_string()))?;
        if index == 0 || index > seed_count {
            return Err(ParseError::IndexRange { index, count: seed_count });
        }
        if out.len() >= MAX_WORD_LEN {
            return Err(ParseError::TooLong);
        }
        out.push(index - 1);
    }
    if out.is_empty() {
        return Err(ParseError::Empty);
    }
    Ok(out)
}

fn parse_letters(text: &str, seed_count: usize) -> Result<Vec<usize>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let ch = bytes[i] as char;
        if ch.is_ascii_whitespace() || ch == '*' || ch == '.' {
            i += 1;
            continue;
        }
        if !ch.is_ascii_uppercase() {
            let ch = text[i..].chars().next().unwrap_or('?');
            return Err(ParseError::Unexpected { ch, at: i });
        }
        let index = (bytes[i] - b'A') as usize;
        if index >= seed_count {
            return Err(ParseError::UnknownSeed { letter: ch, index: index + 1, count: seed_count });
        }
        i += 1;
        let mut power = 1usize;
        let caret = i < bytes.len() && bytes[i] == b'^';
        if caret {
            i += 1;
        }
        let start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        if i > start {
            power = text[start..i].parse().map_err(|_| ParseError::TooLong)?;
            if power == 0 {
                return Err(ParseError::BadExponent { at: start });
            }
        } else if caret {
            return Err(ParseError::BadExponent { at: start });
        }
        if out.len().saturating_add(power) > MAX_WORD_LEN {
            return Err(ParseError::TooLong);
        }
        out.extend(std::iter::repeat_n(index, power));
    }
    if out.is_empty() {
        return Err(ParseError::Empty);
    }
    Ok(out)
}

/// Renders 0-based indices in letter notation with run-length exponents.
pub fn format_word(word: &[usize]) -> String {
    let mut out = String::new();
    let mut i = 0;
    while i < word.len() {
        let j = word[i..].iter().position(|&s| s != word[i]).map_or(word.len(), |p| i + p);
        out.push(letter(word[i]));
        if j - i > 1 {
            out.push_str(&format!("^{}", j - i));
        }
        i = j;
    }
    out
}

/// `0 -> 'A'`, `1 -> 'B'`, ...; `'?'` past `Z`.
pub fn letter(index: usize) -> char {
    if index < 26 {
        (b'A' + index as u8) as char
    } else {
        '?'
    }
}

/// Parses `-3`, `3/4`, `+1.25` or `-2.5e-3` exactly.
pub fn parse_rational(input: &str) -> Result<BigRational, ParseError> {
    let text = input.trim();
    if text.is_empty() {
        return Err(ParseError::Empty);
    }
    if let Some((n, d)) = text.split_once('/') {
        let n = parse_decimal(n.trim())?;
        let d = parse_decimal(d.trim())?;
        if d.is_zero() {
            return Err(ParseError::ZeroDenominator);
        }
        return Ok(n / d);
    }
    parse_decimal(text)
}

fn parse_decimal(text: &str) -> Result<BigRational, ParseError> {
    let bad = || ParseError::Number(text.to_string());
    let (mantissa, exp) = match text.find(['e', 'E']) {
        Some(p) => {
            let e: i32 = text[p + 1..].parse().map_err(|_| bad())?;
            if e.unsigned_abs() > 10_000 {
                return Err(bad());
            }
            (&text[..p], e)
        }
        None => (text, 0),
    };
    let (neg, body) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let mut value = BigRational::from_integer(digits.parse::<BigInt>().map_err(|_| bad())?);
    let ten = BigRational::from_integer(BigInt::from(10));
    let shift = exp - frac.len() as i32;
    let scale = num_traits::pow(ten, shift.unsigned_abs() as usize);
    if shift >= 0 {
        value *= scale;
    } else {
        value /= scale;
    }
    Ok(if neg { -value } else { value })
}

/// `p/q`, or `p` when `q = 1`.
pub fn format_rational(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn letters() {
        assert_eq!(parse_word("A^3B^3", 2).unwrap(), vec![0, 0, 0, 1, 1, 1]);
        assert_eq!(parse_word("A3 B", 2).unwrap(), vec![0, 0, 0, 1]);
        assert_eq!(parse_word("AB", 2).unwrap(), vec![0, 1]);
        assert_eq!(parse_word("C", 2), Err(ParseError::UnknownSeed { letter: 'C', index: 3, count: 2 }));
        assert!(matches!(parse_word("A^", 2), Err(ParseError::BadExponent { .. })));
        assert!(matches!(parse_word("A0", 2), Err(ParseError::BadExponent { .. })));
        assert!(matches!(parse_word("a", 2), Err(ParseError::Unexpected { .. })));
        assert_eq!(parse_word("A99999999999999999999", 1), Err(ParseError::TooLong));
        assert_eq!(parse_word("A^2000000", 1), Err(ParseError::TooLong));
    }

    #[test]
    fn indices() {
        assert_eq!(parse_word("1,1, 2 2", 2).unwrap(), vec![0, 0, 1, 1]);
        assert_eq!(parse_word("3", 2), Err(ParseError::IndexRange { index: 3, count: 2 }));
        assert_eq!(parse_word("0", 2), Err(ParseError::IndexRange { index: 0, count: 2 }));
        assert_eq!(parse_word("  ", 2), Err(ParseError::Empty));
    }

    #[test]
    fn word_round_trip() {
        let w = vec![1, 1, 1, 1, 1, 1, 0, 0, 1];
        assert_eq!(format_word(&w), "B^6A^2B");
        assert_eq!(parse_word(&format_word(&w), 2).unwrap(), w);
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("-3").unwrap(), q(-3, 1));
        assert_eq!(parse_rational(" 6/-4 ").unwrap(), q(-3, 2));
        assert_eq!(parse_rational("1.25").unwrap(), q(5, 4));
        assert_eq!(parse_rational("-2.5e-3").unwrap(), q(-1, 400));
        assert_eq!(parse_rational(".5").unwrap(), q(1, 2));
        assert_eq!(parse_rational("3e2").unwrap(), q(300, 1));
        assert_eq!(parse_rational("1/0"), Err(ParseError::ZeroDenominator));
        for bad in ["", "-", ".", "1/2/3", "x", "1e", "--1", "1e99999", "1.2.3"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
        assert_eq!(format_rational(&q(6, -4)), "-3/2");
        assert_eq!(format_rational(&q(4, 2)), "2");
    }
}
