#![no_main]

use libfuzzer_sys::fuzz_target;
use synthseg_core::stats::{aggregate_matrix, compute_stats, parse_run_records, DEFAULT_ALPHA};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(records) = parse_run_records(text) {
        if let Ok(matrix) = aggregate_matrix(&records) {
            let _ = compute_stats(&matrix, DEFAULT_ALPHA);
        }
    }
});
