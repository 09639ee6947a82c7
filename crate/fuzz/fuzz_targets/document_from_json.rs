#![no_main]

use cable_budget::report::{from_json, to_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(doc) = from_json(text) {
        let again = from_json(&to_json(&doc)).expect("rendered document parses");
        assert_eq!(again, doc);
    }
});
