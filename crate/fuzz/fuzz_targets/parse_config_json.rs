#![no_main]

use cable_budget::config::parse_config_json;
use cable_budget::parse_config;
use libfuzzer_sys::fuzz_target;

// A config accepted as JSON must mean the same thing in the line format.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cfg) = parse_config_json(text) {
        assert_eq!(parse_config(&cfg.to_document()).expect("rendered config parses"), cfg);
    }
});
