#![no_main]

use cable_budget::TransceiverTable;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(table) = TransceiverTable::parse(text) {
        let pts = table.points();
        let (lo, hi) = (pts[0], pts[pts.len() - 1]);
        for x in [f64::NEG_INFINITY, lo.gsnr_db - 1.0, lo.gsnr_db, hi.gsnr_db, hi.gsnr_db + 1.0] {
            let r = table.interpolate(x);
            assert!(r >= lo.net_rate_gbps && r <= hi.net_rate_gbps);
        }
    }
});
