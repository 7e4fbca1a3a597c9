#![no_main]

use libfuzzer_sys::fuzz_target;
use synthseg_core::dataset::GeneratorConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cfg) = GeneratorConfig::from_json_str(text) {
        GeneratorConfig::from_json_str(&cfg.to_json_pretty()).expect("re-parse");
    }
});
