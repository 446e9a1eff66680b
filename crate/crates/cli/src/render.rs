//! Output formatting for large integers and atomic file writes.

use std::io::Write;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use sturmfib::matrix::decimal_digits;

/// Integers with more digits than this are abbreviated unless full digits
/// are requested.
pub const FULL_DIGIT_THRESHOLD: usize = 30;
pub const LEADING_DIGITS: usize = 12;

/// `-123456789012...[4821 digits]` beyond the threshold, plain decimal otherwise.
pub fn render_bigint(x: &BigInt, full: bool) -> String {
    // 96 bits never exceed 29 digits
    if full || x.bits() <= 96 {
        return x.to_string();
    }
    let digits = decimal_digits(x);
    if digits <= FULL_DIGIT_THRESHOLD {
        return x.to_string();
    }
    let lead = x.abs() / BigInt::from(10u32).pow((digits - LEADING_DIGITS) as u32);
    let sign = if x.is_negative() { "-" } else { "" };
    format!("{sign}{lead}...[{digits} digits]")
}

pub fn render_rational(x: &BigRational, full: bool) -> String {
    if x.denom().is_one() {
        render_bigint(x.numer(), full)
    } else {
        format!("{}/{}", render_bigint(x.numer(), full), render_bigint(x.denom(), full))
    }
}

/// Writes through a temporary file in the same directory and renames it
/// into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// CSV with a header row and LF line endings.
pub fn csv_bytes<I, R>(header: &[&str], rows: I) -> Vec<u8>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

/// Shortest round-tripping decimal for finite values, `NaN`/`inf` spelled out.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:?}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values_in_full() {
        assert_eq!(render_bigint(&BigInt::from(-12345), false), "-12345");
        let x: BigInt = "123456789012345678901234567890".parse().unwrap();
        assert_eq!(render_bigint(&x, false), x.to_string());
    }

    #[test]
    fn large_values_abbreviated() {
        let x = -BigInt::from(7u32).pow(100);
        let s = x.to_string();
        let r = render_bigint(&x, false);
        assert_eq!(r, format!("-{}...[{} digits]", &s[1..13], s.len() - 1));
        assert_eq!(render_bigint(&x, true), s);
        let ten = BigInt::from(10u32).pow(40);
        assert_eq!(render_bigint(&ten, false), "100000000000...[41 digits]");
    }

    #[test]
    fn csv_has_lf_and_header() {
        let out = csv_bytes(&["n", "v"], vec![vec!["1".to_string(), "a,b".to_string()]]);
        assert_eq!(String::from_utf8(out).unwrap(), "n,v\n1,\"a,b\"\n");
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.txt");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(std::fs::read(&p).unwrap(), b"two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
