#![no_main]

use libfuzzer_sys::fuzz_target;
use sturmfib_cli::parse::{format_word, parse_word};

fuzz_target!(|data: &[u8]| {
    let Some((&count, rest)) = data.split_first() else { return };
    let seeds = (count % 8) as usize + 1;
    let Ok(text) = std::str::from_utf8(rest) else { return };
    if let Ok(word) = parse_word(text, seeds) {
        assert!(!word.is_empty());
        assert!(word.iter().all(|&i| i < seeds));
        assert_eq!(parse_word(&format_word(&word), seeds).as_ref(), Ok(&word));
    }
});
