#![no_main]

use libfuzzer_sys::fuzz_target;
use synthseg_core::scene::{parse_obj, FeatureClass, GroupMap};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let labeled: GroupMap = [FeatureClass::FRONT_DOOR, FeatureClass::MIRROR].into_iter().map(|c| (c.slug().to_owned(), c)).collect();
    for map in [GroupMap::new(), labeled] {
        if let Ok(subject) = parse_obj(text, &map) {
            assert!(!subject.groups().is_empty());
        }
    }
});
