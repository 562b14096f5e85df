#![no_main]

use libfuzzer_sys::fuzz_target;
use necklace_core::io::{presheaf_from_str, presheaf_from_value, presheaf_to_value};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(f) = presheaf_from_str(s) {
        let back = presheaf_from_value(&presheaf_to_value(&f)).expect("serialized presheaf parses");
        assert_eq!(back, f);
    }
});
