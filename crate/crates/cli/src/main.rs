use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::anyhow;
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use necklace_core::corpus::{self, Family};
use necklace_core::fibration::{
    f0_criterion, fibration_round_trip, is_right_fibration, presheaf_round_trip, straighten, unstraighten_map,
    Presheaf,
};
use necklace_core::io::{self, IoError, Resolver};
use necklace_core::localize::{compare_localization, ObjectMode, Verdict};
use necklace_core::necklace::{hom_set, join, join_right_adjoint, necklaces_up_to, realize};
use necklace_core::rewrite::Budget;
use necklace_core::segalify::{compare_by_words, h1_necklace, h1_rewrite, product_comparison};
use necklace_core::slice::{slice_category_pi0, slice_components, sifted_witness_with, SliceFilter};
use necklace_core::sset::product;
use necklace_core::{bench, Necklace, SSetMap, TruncatedSSet};

#[derive(Parser)]
#[command(name = "necklace", version, about = "Homotopy categories of finite simplicial sets through necklaces")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for generated inputs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for batch work; results are merged in input order.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Truncation level used for builtin `std:` inputs.
    #[arg(long, global = true, default_value_t = 3)]
    trunc: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum Backend {
    Necklace,
    Rewrite,
    Localize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    FaceClosed,
    Nondegenerate,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Check the simplicial identities of a set, or the commutation of a map.
    Validate { input: String },
    /// Hom counts of the homotopy category.
    Homcat {
        input: String,
        #[arg(long, value_enum, default_value_t = Backend::Necklace)]
        backend: Backend,
        /// Run all three backends and require agreement.
        #[arg(long)]
        compare: bool,
        /// Word length bound for the necklace backend.
        #[arg(long)]
        bound: Option<usize>,
        /// Rule budget for the rewriting backends.
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        from: Option<String>,
        #[arg(long)]
        to: Option<String>,
    },
    /// Components of the necklace slice between two vertices.
    Mapspace {
        input: String,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// Largest necklace length; defaults to the longest path plus two.
        #[arg(long)]
        bound: Option<usize>,
        /// Also count components of the explicit slice category.
        #[arg(long)]
        explicit: bool,
    },
    /// Necklace utilities.
    Nec {
        #[command(subcommand)]
        command: NecCommand,
    },
    /// Compare the localization of the simplex category with the homotopy category.
    Localize {
        input: String,
        #[arg(long, value_enum, default_value_t = Mode::FaceClosed)]
        mode: Mode,
        /// Dimension cap for `--mode all`; defaults to the truncation level.
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Right fibrations and straightening.
    Fib {
        #[command(subcommand)]
        command: FibCommand,
    },
    /// Product of two sets and the comparison of homotopy categories.
    Product {
        x: String,
        y: String,
        /// Write the product as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a family of inputs.
    Corpus {
        family: Family,
        #[arg(long, default_value_t = 10)]
        size: usize,
        /// Directory to write one JSON file per instance.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Run the three backends on every instance.
        #[arg(long)]
        check: bool,
    },
    /// Words visited by thin and naive saturation.
    Bench {
        #[arg(long, default_value_t = Family::Spines)]
        family: Family,
        #[arg(long, default_value_t = 8)]
        size: usize,
        /// Omit the wall-time column so output is reproducible.
        #[arg(long)]
        no_time: bool,
    },
}

#[derive(Subcommand)]
enum NecCommand {
    /// Morphisms between two necklaces, as vertex maps.
    Hom { source: String, target: String },
    /// The simplicial set of a necklace.
    Realize { necklace: String },
    /// Join necklaces end to end.
    Join {
        #[arg(required = true)]
        parts: Vec<String>,
    },
    /// Cut a necklace at the vertices of a monotone map, such as `0,2,5`.
    Cut { necklace: String, alpha: String },
    /// Connectivity of the necklaces over a product of two necklaces.
    Sifted {
        a: String,
        b: String,
        #[arg(long)]
        bound: Option<usize>,
        /// Use thin necklaces only.
        #[arg(long)]
        thin: bool,
    },
    /// Every necklace of length at most the bound.
    List { bound: usize },
}

#[derive(Subcommand)]
enum FibCommand {
    /// Decide whether a map is a right fibration.
    Check { map: String },
    /// Compare f0 with f for a map of right fibrations `f: X -> Z` over `Y`.
    F0 { p: String, q: String, f: String },
    /// Unstraighten a presheaf into a right fibration over its nerve.
    Unstraighten {
        presheaf: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Straighten a right fibration over a nerve.
    Straighten {
        map: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Unstraighten then straighten, checking the natural isomorphism.
    Roundtrip { presheaf: String },
}

enum CliError {
    Io(anyhow::Error),
    Invalid(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Invalid(_) => 2,
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

fn invalid(e: impl std::fmt::Display) -> CliError {
    CliError::Invalid(e.to_string())
}

/// Text and JSON renderings with the exit status to report.
struct Output {
    text: String,
    json: Value,
    code: u8,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Output { text, json, code: 0 }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(anyhow!("{}: {e}", path.display())))
}

fn write(path: &Path, v: &Value) -> Result<(), CliError> {
    let s = serde_json::to_string_pretty(v).expect("values serialize");
    fs::write(path, s + "\n").map_err(|e| CliError::Io(anyhow!("{}: {e}", path.display())))
}

/// Resolves builtin specs and paths relative to a base directory.
struct FileResolver {
    base: PathBuf,
    trunc_level: usize,
}

impl Resolver for FileResolver {
    fn resolve(&self, reference: &str) -> Result<TruncatedSSet, IoError> {
        if reference.starts_with("std:") {
            return io::builtin_sset(reference, self.trunc_level);
        }
        let path = self.base.join(reference);
        let s = fs::read_to_string(&path).map_err(|e| IoError::Schema(format!("{}: {e}", path.display())))?;
        io::sset_from_str(&s)
    }
}

fn resolver_for(arg: &str, trunc_level: usize) -> FileResolver {
    let base = Path::new(arg).parent().map(Path::to_path_buf).unwrap_or_default();
    FileResolver { base, trunc_level }
}

fn parse_sset(arg: &str, trunc_level: usize) -> Result<TruncatedSSet, CliError> {
    if arg.starts_with("std:") {
        return Ok(io::builtin_sset(arg, trunc_level)?);
    }
    Ok(io::sset_from_str(&read(Path::new(arg))?)?)
}

/// Loads a set and rejects it unless the simplicial identities hold.
fn load_sset(arg: &str, trunc_level: usize) -> Result<TruncatedSSet, CliError> {
    let x = parse_sset(arg, trunc_level)?;
    let report = x.validate();
    if !report.ok {
        let v: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
        return Err(CliError::Invalid(format!("{arg} is not a simplicial set: {}", v.join("; "))));
    }
    Ok(x)
}

fn load_map(arg: &str, trunc_level: usize) -> Result<SSetMap, CliError> {
    let f = io::map_from_str(&read(Path::new(arg))?, &resolver_for(arg, trunc_level))?;
    for (side, x) in [("source", f.source()), ("target", f.target())] {
        if !x.validate().ok {
            return Err(CliError::Invalid(format!("{arg}: {side} is not a simplicial set")));
        }
    }
    let report = f.check();
    if !report.ok {
        let v: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
        return Err(CliError::Invalid(format!("{arg} is not a simplicial map: {}", v.join("; "))));
    }
    Ok(f)
}

fn load_presheaf(arg: &str) -> Result<Presheaf, CliError> {
    Ok(io::presheaf_from_str(&read(Path::new(arg))?)?)
}

fn necklace(arg: &str) -> Result<Necklace, CliError> {
    arg.parse().map_err(invalid)
}

fn vertex(x: &TruncatedSSet, name: &str) -> Result<usize, CliError> {
    x.cell(0, name).ok_or_else(|| CliError::Invalid(format!("no vertex named `{name}`")))
}

fn budget(max_rules: Option<usize>) -> Budget {
    let mut b = Budget::default();
    if let Some(m) = max_rules {
        b.max_rules = m;
    }
    b
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok(out) => {
            let body = match cli.format {
                Format::Text => out.text,
                Format::Json => serde_json::to_string_pretty(&out.json).expect("values serialize") + "\n",
            };
            // A closed pipe downstream is not an error worth reporting.
            let _ = std::io::stdout().lock().write_all(body.as_bytes());
            ExitCode::from(out.code)
        }
        Err(e) => {
            match &e {
                CliError::Io(err) => eprintln!("error: {err}"),
                CliError::Invalid(msg) => eprintln!("error: {msg}"),
            }
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    let l = cli.trunc;
    match &cli.command {
        Command::Validate { input } => validate(input, l),
        Command::Homcat { input, backend, compare, bound, budget: b, from, to } => {
            let x = load_sset(input, l)?;
            let pairs = vertex_pairs(&x, from.as_deref(), to.as_deref())?;
            if *compare {
                homcat_compare(&x, &pairs, *bound, budget(*b))
            } else {
                let t = hom_table(&x, *backend, *bound, budget(*b))?;
                Ok(render_table(&x, &t, &pairs))
            }
        }
        Command::Mapspace { input, from, to, bound, explicit } => {
            mapspace(&load_sset(input, l)?, from, to, *bound, *explicit)
        }
        Command::Nec { command } => nec(command, l),
        Command::Localize { input, mode, cap, budget: b } => {
            let x = load_sset(input, l)?;
            let mode = match mode {
                Mode::FaceClosed => ObjectMode::FaceClosed,
                Mode::Nondegenerate => ObjectMode::Nondegenerate,
                Mode::All => ObjectMode::AllUpTo(cap.unwrap_or(x.trunc_level())),
            };
            let r = compare_localization(&x, mode, budget(*b)).map_err(invalid)?;
            let rows: Vec<Value> = r
                .vertex_rows()
                .map(|row| {
                    json!({"source": row.source, "target": row.target, "loc_classes": row.loc_classes,
                           "h1_classes": row.h1_classes, "matches": row.matches})
                })
                .collect();
            let verdict = match &r.verdict {
                Verdict::Equivalence => json!({"equivalence": true}),
                Verdict::Failed(v) => json!({"failed": v}),
                Verdict::Inconclusive(s) => json!({"inconclusive": s}),
            };
            let json = json!({"mode": format!("{:?}", r.mode), "objects": r.objects, "arrows": r.arrows,
                              "engine": r.engine_status, "verdict": verdict, "rows": rows});
            Ok(Output::ok(r.to_string(), json))
        }
        Command::Fib { command } => fib(command, l),
        Command::Product { x, y, out } => {
            let (x, y) = (load_sset(x, l)?, load_sset(y, l)?);
            let xy = product(&x, &y).map_err(invalid)?;
            let cmp = product_comparison(&x, &y);
            let mut text = format!(
                "product: {} vertices, {} nondegenerate simplices\n",
                xy.len(0),
                xy.nondegenerate_count()
            );
            match &cmp {
                Ok(_) => text.push_str("comparison functor: isomorphism\n"),
                Err(e) => text.push_str(&format!("comparison functor: NOT an isomorphism ({e})\n")),
            }
            if let Some(p) = out {
                write(p, &io::sset_to_value(&xy))?;
            }
            let json = json!({"vertices": xy.len(0), "nondegenerate": xy.nondegenerate_count(),
                              "isomorphism": cmp.is_ok(), "product": io::sset_to_value(&xy)});
            Ok(Output::ok(text, json))
        }
        Command::Corpus { family, size, out, check } => corpus_cmd(*family, *size, cli.seed, l, out.as_deref(), *check),
        Command::Bench { family, size, no_time } => {
            let inst = corpus::generate(*family, *size, cli.seed, l.max(2)).map_err(invalid)?;
            let report = bench::run(&inst).map_err(invalid)?;
            let mut text = bench::Table { report: &report, with_time: !no_time }.to_string();
            let pairs = bench::visit_pairs(&report);
            let long: Vec<_> = if *family == Family::Spines { pairs.iter().skip(5).cloned().collect() } else { pairs.clone() };
            let gap = bench::monotone_gap(&long);
            match &gap {
                Ok(()) => text.push_str("thin visits fewer words: yes\n"),
                Err(e) => text.push_str(&format!("thin visits fewer words: no ({e})\n")),
            }
            if !report.partition_mismatches.is_empty() {
                text.push_str(&format!("partition mismatches: {}\n", report.partition_mismatches.join(", ")));
            }
            let rows: Vec<Value> = report
                .rows
                .iter()
                .map(|r| {
                    let mut v = json!({"instance": r.instance, "backend": bench::backend_name(r.backend),
                                       "words_visited": r.words_visited, "classes": r.classes});
                    if !no_time {
                        v["wall_ms"] = json!(r.wall.as_secs_f64() * 1e3);
                    }
                    v
                })
                .collect();
            let json = json!({"rows": rows, "thin_fewer": gap.is_ok(), "partition_mismatches": report.partition_mismatches});
            let code = if report.partition_mismatches.is_empty() { 0 } else { 3 };
            Ok(Output { text, json, code })
        }
    }
}

fn validate(input: &str, l: usize) -> Result<Output, CliError> {
    let is_map = !input.starts_with("std:") && {
        let v: Value = serde_json::from_str(&read(Path::new(input))?).map_err(invalid)?;
        v.get("levels").is_some()
    };
    let (kind, report) = if is_map {
        let f = io::map_from_str(&read(Path::new(input))?, &resolver_for(input, l))?;
        let mut report = f.source().validate();
        report.violations.extend(f.target().validate().violations);
        if report.violations.is_empty() {
            report = f.check();
        }
        report.ok = report.violations.is_empty();
        ("map", report)
    } else {
        let x = parse_sset(input, l)?;
        ("simplicial set", x.validate())
    };
    let mut text = String::new();
    if report.ok {
        text.push_str(&format!("ok: valid {kind}\n"));
    } else {
        text.push_str(&format!("invalid {kind}: {} violation(s)\n", report.violations.len()));
        for v in &report.violations {
            text.push_str(&format!("  {v}\n"));
        }
    }
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|v| json!({"identity": v.identity, "dimension": v.dimension, "simplex": v.simplex}))
        .collect();
    let json = json!({"kind": kind, "ok": report.ok, "violations": violations});
    Ok(Output { text, json, code: if report.ok { 0 } else { 2 } })
}

fn vertex_pairs(x: &TruncatedSSet, from: Option<&str>, to: Option<&str>) -> Result<Vec<(usize, usize)>, CliError> {
    let all: Vec<usize> = (0..x.len(0)).collect();
    let pick = |n: Option<&str>| -> Result<Vec<usize>, CliError> {
        match n {
            Some(n) => Ok(vec![vertex(x, n)?]),
            None => Ok(all.clone()),
        }
    };
    let (a, b) = (pick(from)?, pick(to)?);
    Ok(a.iter().flat_map(|&s| b.iter().map(move |&t| (s, t))).collect())
}

/// Per-pair hom data from one backend; `None` where the backend cannot decide.
struct HomTable {
    backend: Backend,
    note: String,
    counts: Vec<Vec<Option<usize>>>,
    reps: Vec<Vec<Vec<String>>>,
}

fn hom_table(x: &TruncatedSSet, backend: Backend, bound: Option<usize>, budget: Budget) -> Result<HomTable, CliError> {
    let n = x.len(0);
    let mut counts = vec![vec![None; n]; n];
    let mut reps = vec![vec![Vec::new(); n]; n];
    let note;
    match backend {
        Backend::Necklace => {
            let h = h1_necklace(x, bound).map_err(invalid)?;
            note = format!(
                "max_word={}, {}",
                h.max_word(),
                if h.is_exact() { "exact" } else { "bounded; the edge graph has a cycle" }
            );
            for a in 0..n {
                for b in 0..n {
                    let cls = h.classes(a, b);
                    if h.is_exact() {
                        counts[a][b] = Some(cls.len());
                    }
                    reps[a][b] = cls.iter().map(|&c| h.representative(c).display(x).to_string()).collect();
                }
            }
        }
        Backend::Rewrite => {
            let r = h1_rewrite(x, budget).map_err(invalid)?;
            note = format!(
                "{}; budget max_rules={} max_lhs={}",
                r.presented().engine().status_line(),
                budget.max_rules,
                budget.max_lhs
            );
            for a in 0..n {
                if r.normal_forms(a, 0).is_some() {
                    for b in 0..n {
                        let nf = r.normal_forms(a, b).expect("finite from this source");
                        if r.is_complete() {
                            counts[a][b] = Some(nf.len());
                        }
                        reps[a][b] = nf.iter().map(|w| w.display(x).to_string()).collect();
                    }
                } else if n > 0 {
                    for b in 0..n {
                        reps[a][b] = vec!["infinitely many".into()];
                    }
                }
            }
        }
        Backend::Localize => {
            let r = compare_localization(x, ObjectMode::FaceClosed, budget).map_err(invalid)?;
            let verdict = match &r.verdict {
                Verdict::Equivalence => "equivalence certified".to_string(),
                Verdict::Failed(v) => format!("FAILED: {}", v.join("; ")),
                Verdict::Inconclusive(s) => format!("inconclusive: {s}"),
            };
            note = format!("{verdict}; budget max_rules={} max_lhs={}", budget.max_rules, budget.max_lhs);
            for row in r.vertex_rows() {
                let (a, b) = (vertex(x, &row.source)?, vertex(x, &row.target)?);
                counts[a][b] = Some(row.loc_classes);
            }
        }
    }
    Ok(HomTable { backend, note, counts, reps })
}

fn backend_label(b: Backend) -> &'static str {
    match b {
        Backend::Necklace => "necklace",
        Backend::Rewrite => "rewrite",
        Backend::Localize => "localize",
    }
}

fn count_cell(c: Option<usize>) -> String {
    c.map_or("?".to_string(), |c| c.to_string())
}

fn render_table(x: &TruncatedSSet, t: &HomTable, pairs: &[(usize, usize)]) -> Output {
    let mut text = format!("backend: {} ({})\n", backend_label(t.backend), t.note);
    let mut rows = Vec::new();
    for &(a, b) in pairs {
        let (an, bn) = (x.name(0, a), x.name(0, b));
        let reps = &t.reps[a][b];
        if reps.is_empty() {
            text.push_str(&format!("hom({an},{bn}) = {}\n", count_cell(t.counts[a][b])));
        } else {
            text.push_str(&format!("hom({an},{bn}) = {}: {}\n", count_cell(t.counts[a][b]), reps.join(" | ")));
        }
        rows.push(json!({"source": an, "target": bn, "count": t.counts[a][b], "representatives": reps}));
    }
    let json = json!({"backend": backend_label(t.backend), "note": t.note, "homs": rows});
    Output::ok(text, json)
}

fn homcat_compare(x: &TruncatedSSet, pairs: &[(usize, usize)], bound: Option<usize>, budget: Budget) -> Result<Output, CliError> {
    let backends = [Backend::Necklace, Backend::Rewrite, Backend::Localize];
    let tables: Vec<Result<HomTable, String>> = backends
        .par_iter()
        .map(|&b| hom_table(x, b, bound, budget).map_err(|e| match e {
            CliError::Invalid(m) => m,
            CliError::Io(e) => e.to_string(),
        }))
        .collect();
    let mut text = String::new();
    let mut disagreements = Vec::new();
    for (b, t) in backends.iter().zip(&tables) {
        match t {
            Ok(t) => text.push_str(&format!("{}: {}\n", backend_label(*b), t.note)),
            Err(e) => text.push_str(&format!("{}: unavailable ({e})\n", backend_label(*b))),
        }
    }
    if let Ok(t) = &tables[2] {
        if t.note.starts_with("FAILED") {
            disagreements.push("localization is not an equivalence".to_string());
        }
    }
    text.push_str(&format!("{:<12} {:>9} {:>9} {:>9}\n", "pair", "necklace", "rewrite", "localize"));
    let mut rows = Vec::new();
    for &(a, b) in pairs {
        let cs: Vec<Option<usize>> = tables.iter().map(|t| t.as_ref().ok().and_then(|t| t.counts[a][b])).collect();
        let known: Vec<usize> = cs.iter().flatten().copied().collect();
        let pair = format!("({},{})", x.name(0, a), x.name(0, b));
        if known.windows(2).any(|w| w[0] != w[1]) {
            disagreements.push(format!("hom{pair}"));
        }
        text.push_str(&format!("{:<12} {:>9} {:>9} {:>9}\n", pair, count_cell(cs[0]), count_cell(cs[1]), count_cell(cs[2])));
        rows.push(json!({"source": x.name(0, a), "target": x.name(0, b), "necklace": cs[0], "rewrite": cs[1], "localize": cs[2]}));
    }
    // Equal counts are necessary; matching the words is the real check.
    if let (Ok(_), Ok(_)) = (&tables[0], &tables[1]) {
        let hn = h1_necklace(x, bound).ok().filter(|h| h.is_exact()).and_then(|h| h.materialize().ok());
        let hr = h1_rewrite(x, budget).ok().filter(|h| h.is_complete()).and_then(|h| h.materialize().ok());
        if let (Some(hn), Some(hr)) = (hn, hr) {
            if compare_by_words(&hn, &hr).is_err() || compare_by_words(&hr, &hn).is_err() {
                disagreements.push("necklace and rewrite classes differ on representatives".into());
            }
        }
    }
    let agree = disagreements.is_empty();
    if agree {
        text.push_str("agreement: yes\n");
    } else {
        text.push_str(&format!("agreement: NO ({})\n", disagreements.join("; ")));
    }
    let json = json!({"homs": rows, "agreement": agree, "disagreements": disagreements});
    Ok(Output { text, json, code: if agree { 0 } else { 3 } })
}

fn mapspace(x: &TruncatedSSet, from: &str, to: &str, bound: Option<usize>, explicit: bool) -> Result<Output, CliError> {
    let (a, b) = (vertex(x, from)?, vertex(x, to)?);
    let bound = match bound {
        Some(t) => t,
        None => x
            .longest_nondegenerate_path()
            .map(|p| p + 2)
            .ok_or_else(|| CliError::Invalid("the edge graph has a cycle; pass --bound".into()))?,
    };
    let s = slice_components(x, a, b, bound, SliceFilter::All);
    let reps: Vec<String> = s
        .representatives()
        .iter()
        .map(|edges| edges.iter().map(|&e| x.name(1, e)).collect::<Vec<_>>().join(","))
        .map(|w| if w.is_empty() { "(empty)".to_string() } else { w })
        .collect();
    let mut text = format!(
        "slice {from} -> {to}, necklaces up to length {bound}: {} objects, {} components\n",
        s.objects, s.components
    );
    if s.omitted_shapes > 0 {
        text.push_str(&format!("shapes omitted for beads above the truncation: {}\n", s.omitted_shapes));
    }
    for (i, r) in reps.iter().enumerate() {
        text.push_str(&format!("  component {i}: {r}\n"));
    }
    let mut json = json!({"bound": bound, "objects": s.objects, "components": s.components,
                          "omitted_shapes": s.omitted_shapes, "representatives": reps});
    if let Ok(h) = h1_necklace(x, None) {
        if h.is_exact() {
            let n = h.classes(a, b).len();
            text.push_str(&format!("hom({from},{to}) in the homotopy category: {n}\n"));
            json["hom"] = json!(n);
        }
    }
    if explicit {
        let e = slice_category_pi0(x, a, b, bound);
        text.push_str(&format!("explicit slice category: {e} components\n"));
        json["explicit_components"] = json!(e);
    }
    Ok(Output::ok(text, json))
}

fn nec(command: &NecCommand, l: usize) -> Result<Output, CliError> {
    match command {
        NecCommand::Hom { source, target } => {
            let (n, m) = (necklace(source)?, necklace(target)?);
            let maps = hom_set(&n, &m);
            let mut text = format!("hom({n}, {m}): {} map(s)\n", maps.len());
            let vm: Vec<Vec<usize>> = maps.iter().map(|f| f.vertex_map().to_vec()).collect();
            for v in &vm {
                text.push_str(&format!("  {v:?}\n"));
            }
            Ok(Output::ok(text, json!({"source": n.to_string(), "target": m.to_string(), "maps": vm})))
        }
        NecCommand::Realize { necklace: lit } => {
            let n = necklace(lit)?;
            let b = realize(&n, l.max(n.beads().iter().copied().max().unwrap_or(0))).map_err(invalid)?;
            let v = json!({"min": b.sset.name(0, b.min), "max": b.sset.name(0, b.max), "sset": io::sset_to_value(&b.sset)});
            let text = serde_json::to_string_pretty(&v).expect("values serialize") + "\n";
            Ok(Output::ok(text, v))
        }
        NecCommand::Join { parts } => {
            let ns = parts.iter().map(|p| necklace(p)).collect::<Result<Vec<_>, _>>()?;
            let (j, joints) = join(&ns).map_err(invalid)?;
            Ok(Output::ok(format!("{j}\njoint vertices: {joints:?}\n"), json!({"necklace": j.to_string(), "joints": joints})))
        }
        NecCommand::Cut { necklace: lit, alpha } => {
            let n = necklace(lit)?;
            let alpha = alpha
                .split(',')
                .map(|s| s.trim().parse::<usize>().map_err(|_| CliError::Invalid(format!("bad vertex `{s}`"))))
                .collect::<Result<Vec<_>, _>>()?;
            let parts = join_right_adjoint(&n, &alpha).map_err(invalid)?;
            let names: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
            Ok(Output::ok(format!("{}\n", names.join(" ")), json!({"parts": names})))
        }
        NecCommand::Sifted { a, b, bound, thin } => {
            let (a, b) = (necklace(a)?, necklace(b)?);
            let bound = bound.unwrap_or(a.total() + b.total() + 2);
            let filter = if *thin { SliceFilter::Thin } else { SliceFilter::All };
            let r = sifted_witness_with(&a, &b, bound, filter).map_err(invalid)?;
            let text = format!("{}\n", r.verdict());
            Ok(Output::ok(text, json!({"a": a.to_string(), "b": b.to_string(), "bound": bound,
                                       "objects": r.objects, "components": r.components, "connected": r.connected()})))
        }
        NecCommand::List { bound } => {
            if *bound > 16 {
                return Err(CliError::Invalid("bound above 16 lists too many necklaces".into()));
            }
            let all: Vec<String> = necklaces_up_to(*bound).iter().map(|n| n.to_string()).collect();
            Ok(Output::ok(all.iter().map(|s| format!("{s}\n")).collect(), json!(all)))
        }
    }
}

fn fib(command: &FibCommand, l: usize) -> Result<Output, CliError> {
    match command {
        FibCommand::Check { map } => {
            let p = load_map(map, l)?;
            let r = is_right_fibration(&p);
            let counts: Vec<Value> =
                r.counts.iter().map(|c| json!({"level": c.level, "cells": c.cells, "pullback": c.pullback})).collect();
            let failures: Vec<String> = r.failures.iter().map(|f| f.to_string()).collect();
            let json = json!({"right_fibration": r.is_right_fibration, "first_failing_level": r.first_failing_level(),
                              "levels_checked": r.levels_checked, "counts": counts, "failures": failures});
            Ok(Output::ok(format!("{r}\n"), json))
        }
        FibCommand::F0 { p, q, f } => {
            let (p, q, f) = (load_map(p, l)?, load_map(q, l)?, load_map(f, l)?);
            let r = f0_criterion(&p, &q, &f).map_err(invalid)?;
            let json = json!({"f0_bijective": r.level0_bijective, "levelwise_bijective": r.levelwise_bijective,
                              "reconstruction_agrees": r.reconstruction_agrees, "consistent": r.consistent()});
            Ok(Output::ok(format!("{r}\n"), json))
        }
        FibCommand::Unstraighten { presheaf, out } => {
            let f = load_presheaf(presheaf)?;
            let p = unstraighten_map(&f, l).map_err(invalid)?;
            let v = io::map_to_value(&p);
            emit(v, out.as_deref())
        }
        FibCommand::Straighten { map, out } => {
            let p = load_map(map, l)?;
            let st = straighten(&p).map_err(invalid)?;
            let v = io::presheaf_to_value(&st.presheaf);
            emit(v, out.as_deref())
        }
        FibCommand::Roundtrip { presheaf } => {
            let f = load_presheaf(presheaf)?;
            let eta = presheaf_round_trip(&f, l).map_err(invalid)?;
            let p = unstraighten_map(&f, l).map_err(invalid)?;
            let back = fibration_round_trip(&p).map_err(invalid)?;
            let iso = back.iso.is_isomorphism();
            let text = format!(
                "presheaf round trip: natural isomorphism\nfibration round trip: {}\n",
                if iso { "isomorphism over the base" } else { "NOT an isomorphism" }
            );
            Ok(Output::ok(text, json!({"components": eta.components, "fibration_iso": iso})))
        }
    }
}

fn emit(v: Value, out: Option<&Path>) -> Result<Output, CliError> {
    match out {
        Some(p) => {
            write(p, &v)?;
            Ok(Output::ok(format!("wrote {}\n", p.display()), json!({"wrote": p.display().to_string()})))
        }
        None => Ok(Output::ok(serde_json::to_string_pretty(&v).expect("values serialize") + "\n", v)),
    }
}

fn corpus_cmd(family: Family, size: usize, seed: u64, l: usize, out: Option<&Path>, check: bool) -> Result<Output, CliError> {
    let inst = corpus::generate(family, size, seed, l).map_err(invalid)?;
    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(|e| CliError::Io(anyhow!("{}: {e}", dir.display())))?;
        for i in &inst {
            write(&dir.join(format!("{}.json", i.name)), &io::sset_to_value(&i.sset))?;
        }
    }
    let checks: Vec<Option<Result<(), String>>> = inst
        .par_iter()
        .map(|i| check.then(|| triple_check(&i.sset)))
        .collect();
    let mut text = format!("{:<24} {:>8} {:>13} {:>8} {:>6}\n", "instance", "vertices", "nondegenerate", "acyclic", "valid");
    let mut rows = Vec::new();
    let mut failed = false;
    for (i, c) in inst.iter().zip(&checks) {
        let x = &i.sset;
        let valid = x.validate().ok;
        text.push_str(&format!(
            "{:<24} {:>8} {:>13} {:>8} {:>6}",
            i.name,
            x.len(0),
            x.nondegenerate_count(),
            x.is_acyclic(),
            valid
        ));
        let mut row = json!({"name": i.name, "vertices": x.len(0), "nondegenerate": x.nondegenerate_count(),
                             "acyclic": x.is_acyclic(), "valid": valid});
        if let Some(c) = c {
            match c {
                Ok(()) => text.push_str("  agree"),
                Err(e) => {
                    failed = true;
                    text.push_str(&format!("  DISAGREE: {e}"));
                }
            }
            row["agree"] = json!(c.is_ok());
        }
        text.push('\n');
        rows.push(row);
    }
    Ok(Output { text, json: json!({"family": family.to_string(), "seed": seed, "instances": rows}), code: if failed { 3 } else { 0 } })
}

/// Necklace, rewrite and localization backends on one set.
fn triple_check(x: &TruncatedSSet) -> Result<(), String> {
    let hn = h1_necklace(x, None).and_then(|h| h.materialize()).map_err(|e| e.to_string())?;
    let hr = h1_rewrite(x, Budget::default()).and_then(|h| h.materialize()).map_err(|e| e.to_string())?;
    compare_by_words(&hn, &hr).map_err(|e| format!("necklace to rewrite: {e}"))?;
    compare_by_words(&hr, &hn).map_err(|e| format!("rewrite to necklace: {e}"))?;
    let loc = compare_localization(x, ObjectMode::FaceClosed, Budget::default()).map_err(|e| e.to_string())?;
    if !loc.certified() {
        return Err(format!("localization: {:?}", loc.verdict));
    }
    for r in loc.vertex_rows() {
        let (a, b) = (x.cell(0, &r.source).unwrap(), x.cell(0, &r.target).unwrap());
        if r.loc_classes != hn.hom_count(a, b) {
            return Err(format!("localization hom({},{})", r.source, r.target));
        }
    }
    Ok(())
}
