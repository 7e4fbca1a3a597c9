#![no_main]

use libfuzzer_sys::fuzz_target;
use synthseg_core::dataset::DatasetManifest;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(m) = DatasetManifest::from_jsonl_str(text) {
        // serialization is a fixed point after one round trip
        let again = DatasetManifest::from_jsonl_str(&m.to_jsonl()).expect("re-parse");
        assert_eq!(again, m);
    }
});
