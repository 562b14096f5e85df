#![no_main]

use libfuzzer_sys::fuzz_target;
use necklace_core::io::{builtin_category, builtin_sset};

// Builtin specs come straight from the command line.
fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(x) = builtin_sset(s, 2) {
        assert!(x.validate().ok, "builtin {s} is not a simplicial set");
    }
    let _ = builtin_category(s);
});
