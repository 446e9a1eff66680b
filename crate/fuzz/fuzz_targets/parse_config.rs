#![no_main]

use libfuzzer_sys::fuzz_target;
use sturmfib_cli::parse_config;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(cfg) = parse_config(text) {
            // anything accepted must pass its own validation again
            cfg.validate().expect("accepted config re-validates");
        }
    }
});
