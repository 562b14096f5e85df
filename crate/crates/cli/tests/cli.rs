use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn necklace(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_necklace")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn interval_over_point_is_not_a_right_fibration() {
    let o = necklace(&["fib", "check", &data("simplex1_to_point.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("NOT a right fibration (n=1)\n"), "{}", stdout(&o));
}

#[test]
fn fib_check_json_counts() {
    let o = necklace(&["--format", "json", "fib", "check", &data("simplex1_to_point.json")]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["right_fibration"], false);
    assert_eq!(v["first_failing_level"], 1);
    assert_eq!(v["counts"][0]["cells"], 3);
    assert_eq!(v["counts"][0]["pullback"], 2);
}

#[test]
fn boundary_compare_reports_two_from_every_backend() {
    let o = necklace(&["homcat", "--compare", "std:boundary:2", "--from", "0", "--to", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let row = out.lines().find(|l| l.starts_with("(0,2)")).unwrap();
    assert_eq!(row.split_whitespace().collect::<Vec<_>>(), ["(0,2)", "2", "2", "2"]);
    assert!(out.contains("agreement: yes"));
}

#[test]
fn homcat_single_backends() {
    for backend in ["necklace", "rewrite", "localize"] {
        let o = necklace(&["--format", "json", "homcat", "std:simplex:2", "--backend", backend]);
        assert_eq!(o.status.code(), Some(0), "{backend}");
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        let counts: Vec<u64> = v["homs"].as_array().unwrap().iter().map(|h| h["count"].as_u64().unwrap()).collect();
        assert_eq!(counts, [1, 1, 1, 0, 1, 1, 0, 0, 1], "{backend}");
    }
}

#[test]
fn swapped_faces_fail_validation() {
    let o = necklace(&["validate", &data("simplex2_swapped_faces.json")]);
    assert_eq!(o.status.code(), Some(2));
    let out = stdout(&o);
    assert!(out.contains("d0d2=d1d0"), "{out}");
    assert!(out.contains("`012`"), "{out}");
    assert_eq!(necklace(&["validate", &data("simplex2.json")]).status.code(), Some(0));
}

#[test]
fn invalid_input_is_refused_before_computing() {
    let o = necklace(&["homcat", &data("simplex2_swapped_faces.json")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn exit_codes_for_io_and_parse_errors() {
    assert_eq!(necklace(&["validate", "/nonexistent/x.json"]).status.code(), Some(1));
    assert_eq!(necklace(&["validate", "std:nonsense"]).status.code(), Some(2));
    let dir = std::env::temp_dir().join(format!("necklace-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\"trunc_level\": ").unwrap();
    assert_eq!(necklace(&["validate", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn unstraighten_check_straighten() {
    let dir = std::env::temp_dir().join(format!("necklace-cli-u-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let u = dir.join("u.json");
    let o = necklace(&["fib", "unstraighten", &data("interval_presheaf.json"), "--out", u.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = necklace(&["fib", "check", u.to_str().unwrap()]);
    assert!(stdout(&o).starts_with("right fibration"));
    let o = necklace(&["--format", "json", "fib", "straighten", u.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["values"]["0"].as_array().unwrap().len(), 2);
    assert_eq!(v["values"]["1"].as_array().unwrap().len(), 1);
    let o = necklace(&["fib", "roundtrip", &data("interval_presheaf.json")]);
    assert!(stdout(&o).contains("isomorphism over the base"));
}

#[test]
fn f0_on_identity_and_precondition() {
    let id = data("simplex1_identity.json");
    let o = necklace(&["fib", "f0", &id, &id, &id]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("consistent"));
    let bang = data("simplex1_to_point.json");
    assert_eq!(necklace(&["fib", "f0", &bang, &bang, &id]).status.code(), Some(2));
}

#[test]
fn necklace_verbs() {
    let o = necklace(&["nec", "hom", "1v1", "2"]);
    assert!(stdout(&o).starts_with("hom(1v1, 2): 3 map(s)"));
    let o = necklace(&["nec", "cut", "2v2", "0,1,4"]);
    assert_eq!(stdout(&o).trim(), "1 1v2");
    let o = necklace(&["nec", "join", "2", "0", "1v1"]);
    assert!(stdout(&o).starts_with("2v1v1\n"));
    let o = necklace(&["nec", "sifted", "1", "1"]);
    assert!(stdout(&o).starts_with("connected"));
    assert_eq!(necklace(&["nec", "hom", "1v", "2"]).status.code(), Some(2));
}

#[test]
fn mapspace_matches_hom() {
    let o = necklace(&["--format", "json", "mapspace", "std:boundary:2", "--from", "0", "--to", "2", "--explicit"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["components"], 2);
    assert_eq!(v["hom"], 2);
    assert_eq!(v["explicit_components"], 2);
}

#[test]
fn product_is_compatible() {
    let o = necklace(&["product", "std:simplex:1", "std:horn:2:1", "--trunc", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("comparison functor: isomorphism"));
}

#[test]
fn corpus_output_does_not_depend_on_jobs() {
    let run = |jobs: &str| {
        let o = necklace(&["--jobs", jobs, "--seed", "7", "corpus", "random-dag-complex", "--size", "12", "--check"]);
        assert_eq!(o.status.code(), Some(0));
        o.stdout
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn bench_without_time_is_reproducible() {
    let run = || necklace(&["bench", "--no-time", "--size", "6", "--trunc", "2"]).stdout;
    let a = run();
    assert_eq!(a, run());
    assert!(String::from_utf8(a).unwrap().contains("thin visits fewer words: yes"));
}

#[test]
fn corpus_families_generate_valid_instances() {
    let o = necklace(&["--format", "json", "--seed", "7", "corpus", "nerve-of-random-poset", "--size", "3"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v["instances"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r["valid"] == true));
    let o = necklace(&["--format", "json", "--seed", "1", "corpus", "random-dag-complex", "--size", "10", "--check"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v["instances"].as_array().unwrap();
    assert_eq!(rows.len(), 10);
    assert!(rows.iter().all(|r| r["valid"] == true && r["acyclic"] == true && r["agree"] == true));
    let o = necklace(&["corpus", "spines", "--size", "5"]);
    let names: Vec<String> = stdout(&o).lines().skip(1).map(|l| l.split_whitespace().next().unwrap().to_string()).collect();
    assert_eq!(names, ["spine(1)", "spine(2)", "spine(3)", "spine(4)", "spine(5)"]);
    assert_eq!(necklace(&["corpus", "tori"]).status.code(), Some(2));
}
