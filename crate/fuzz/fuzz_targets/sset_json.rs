#![no_main]

use libfuzzer_sys::fuzz_target;
use necklace_core::io::{sset_from_str, sset_from_value, sset_to_value};

// Anything that parses and validates must survive a round trip.
fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(x) = sset_from_str(s) else { return };
    if x.validate().ok {
        let back = sset_from_value(&sset_to_value(&x)).expect("serialized set parses");
        assert_eq!(back, x);
    }
});
