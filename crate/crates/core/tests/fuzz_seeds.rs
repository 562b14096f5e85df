//! Replays the checked-in fuzz seeds through the properties the fuzz
//! targets assert, so a broken seed shows up without a fuzzing toolchain.

use std::fs;
use std::path::PathBuf;

use necklace_core::io::{self, BuiltinResolver};
use necklace_core::necklace::hom_set;
use necklace_core::Necklace;

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<(String, String)> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read_to_string(&p).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn sset_seeds_parse_and_round_trip() {
    let mut invalid = Vec::new();
    for (name, s) in seeds("sset_json") {
        let x = io::sset_from_str(&s).unwrap_or_else(|e| panic!("{name}: {e}"));
        if x.validate().ok {
            assert_eq!(io::sset_from_value(&io::sset_to_value(&x)).unwrap(), x, "{name}");
        } else {
            invalid.push(name);
        }
    }
    assert_eq!(invalid, ["swapped_faces.json"]);
}

#[test]
fn map_seeds_are_simplicial() {
    let r = BuiltinResolver { trunc_level: 2 };
    for (name, s) in seeds("sset_map_json") {
        let f = io::map_from_str(&s, &r).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(f.check().ok, "{name}");
    }
}

#[test]
fn category_seeds_round_trip() {
    for (name, s) in seeds("category_json") {
        let c = io::category_from_str(&s).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(io::category_from_value(&io::category_to_value(&c)).unwrap(), c, "{name}");
    }
}

#[test]
fn presheaf_seeds_round_trip() {
    for (name, s) in seeds("presheaf_json") {
        let f = io::presheaf_from_str(&s).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(io::presheaf_from_value(&io::presheaf_to_value(&f)).unwrap(), f, "{name}");
    }
}

#[test]
fn necklace_seeds_parse() {
    for (name, s) in seeds("necklace_literal") {
        let n: Necklace = s.parse().unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(n.to_string(), s.trim());
        assert!(!hom_set(&n, &n).is_empty());
    }
}

#[test]
fn builtin_seeds_resolve() {
    for (name, s) in seeds("builtin_spec") {
        if s.starts_with("cat:") {
            io::builtin_category(&s).unwrap_or_else(|e| panic!("{name}: {e}"));
        } else {
            assert!(io::builtin_sset(&s, 2).unwrap_or_else(|e| panic!("{name}: {e}")).validate().ok, "{s}");
        }
    }
}
