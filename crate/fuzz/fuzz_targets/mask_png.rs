#![no_main]

use libfuzzer_sys::fuzz_target;
use synthseg_core::render::image::{decode_gray8, decode_rgb8};
use synthseg_core::render::ClassMask;
use synthseg_core::scene::FeatureClass;

fuzz_target!(|data: &[u8]| {
    if let Ok(mask) = ClassMask::decode_png(FeatureClass::MIRROR, data) {
        let bytes = mask.encode_png().expect("encode");
        assert_eq!(ClassMask::decode_png(FeatureClass::MIRROR, &bytes).expect("decode"), mask);
    }
    let _ = decode_gray8(data);
    let _ = decode_rgb8(data);
});
