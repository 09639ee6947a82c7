#![no_main]

use cable_budget::parse_config;
use libfuzzer_sys::fuzz_target;

// Any accepted configuration must survive a trip through its own rendering.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cfg) = parse_config(text) {
        let again = parse_config(&cfg.to_document()).expect("rendered config parses");
        assert_eq!(again, cfg);
    }
});
