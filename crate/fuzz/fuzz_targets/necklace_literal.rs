#![no_main]

use libfuzzer_sys::fuzz_target;
use necklace_core::necklace::hom_set;
use necklace_core::Necklace;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(n) = s.parse::<Necklace>() else { return };
    assert_eq!(n.to_string().parse::<Necklace>().unwrap(), n);
    // hom sets grow quickly; stay small
    if n.total() <= 6 {
        assert!(hom_set(&n, &n).iter().any(|f| f.vertex_map().iter().enumerate().all(|(i, &v)| i == v)));
    }
});
