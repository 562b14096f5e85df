#![no_main]

use libfuzzer_sys::fuzz_target;
use necklace_core::io::{map_from_str, BuiltinResolver};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let r = BuiltinResolver { trunc_level: 2 };
    if let Ok(f) = map_from_str(s, &r) {
        let _ = f.check();
    }
});
