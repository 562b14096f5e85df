#![no_main]

use libfuzzer_sys::fuzz_target;
use necklace_core::io::{category_from_str, category_from_value, category_to_value};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(c) = category_from_str(s) {
        let back = category_from_value(&category_to_value(&c)).expect("serialized category parses");
        assert_eq!(back, c);
    }
});
