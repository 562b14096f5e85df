//! End-to-end acceptance checks. Each criterion prints one PASS or FAIL
//! line; the process fails if any criterion does.

use std::collections::{HashMap, HashSet};
use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use necklace_core::bench;
use necklace_core::corpus::{self, Instance};
use necklace_core::fibration::{
    f0_criterion, fibration_round_trip, is_right_fibration, nerve_of_functor, presheaf_round_trip,
    unstraighten_map, unstraighten_transformation,
};
use necklace_core::localize::{compare_localization, ObjectMode};
use necklace_core::necklace::{hom_set, join, join_right_adjoint, necklaces_up_to, realize, restrict_interval};
use necklace_core::rewrite::Budget;
use necklace_core::segalify::{
    compare_by_words, h1_necklace, h1_necklace_with, h1_rewrite, nerve_round_trip, product_comparison, Saturation,
};
use necklace_core::slice::{sifted_witness, slice_category_pi0, slice_components, SliceFilter};
use necklace_core::sset::{boundary, horn, spine, standard_simplex};
use necklace_core::{ExplicitFinCategory, Necklace, NecklaceMap, SSetMap, TruncatedSSet};

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

const CORPUS_SEED: u64 = 2024;
const CORPUS_SIZE: usize = 200;
const CORPUS_TRUNC: usize = 3;
/// Largest total slice size for which the explicit slice category is built.
const EXPLICIT_SLICE_CAP: u64 = 3000;
/// Longest tuple fed to the join.
const MAX_JOIN_PARTS: usize = 6;

fn corpus() -> Vec<Instance> {
    corpus::acyclic_corpus(CORPUS_SEED, CORPUS_SIZE, CORPUS_TRUNC).expect("corpus generates")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1_triple_backends(corpus: &[Instance]) -> Outcome {
    let start = Instant::now();
    ensure(corpus.len() >= 200, || format!("only {} instances", corpus.len()))?;
    let mut pairs = 0;
    for inst in corpus {
        let x = &inst.sset;
        let name = &inst.name;
        ensure(x.is_acyclic(), || format!("{name} is not acyclic"))?;
        ensure(x.nondegenerate_count() <= 30, || format!("{name} has {} nondegenerate simplices", x.nondegenerate_count()))?;
        let hn = h1_necklace(x, None).and_then(|h| h.materialize()).map_err(|e| format!("{name}: necklace: {e}"))?;
        let hr = h1_rewrite(x, Budget::default()).map_err(|e| format!("{name}: rewrite: {e}"))?;
        ensure(hr.is_complete(), || format!("{name}: rewriting did not complete"))?;
        let hrm = hr.materialize().map_err(|e| format!("{name}: rewrite: {e}"))?;
        compare_by_words(&hn, &hrm).map_err(|e| format!("{name}: necklace to rewrite: {e}"))?;
        compare_by_words(&hrm, &hn).map_err(|e| format!("{name}: rewrite to necklace: {e}"))?;
        let loc = compare_localization(x, ObjectMode::FaceClosed, Budget::default()).map_err(|e| format!("{name}: {e}"))?;
        ensure(loc.certified(), || format!("{name}: localization verdict {:?}", loc.verdict))?;
        let mut seen = HashSet::new();
        for r in loc.vertex_rows() {
            let (a, b) = (x.cell(0, &r.source).unwrap(), x.cell(0, &r.target).unwrap());
            let nf = hr.normal_forms(a, b).ok_or_else(|| format!("{name}: infinite hom"))?.len();
            let counts = [hn.hom_count(a, b), hrm.hom_count(a, b), nf, r.loc_classes];
            ensure(counts.iter().all(|&c| c == counts[0]), || format!("{name}: hom({},{}) counts {counts:?}", r.source, r.target))?;
            seen.insert((a, b));
        }
        ensure(seen.len() == x.len(0) * x.len(0), || format!("{name}: localization misses vertex pairs"))?;
        pairs += seen.len();
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(120), || format!("took {t:.1?}, over the 2 minute limit"))?;
    Ok(format!("{} instances, {pairs} vertex pairs, {t:.2?}", corpus.len()))
}

fn c2_golden_homs() -> Outcome {
    let cases: Vec<(&str, TruncatedSSet, usize, usize, usize)> = vec![
        ("simplex 2", standard_simplex(2, 2).unwrap(), 0, 2, 1),
        ("boundary of simplex 2", boundary(2, 2).unwrap(), 0, 2, 2),
        ("inner horn 2,1", horn(2, 1, 2).unwrap(), 0, 2, 1),
        ("spine 3", spine(3, 2).unwrap(), 0, 3, 1),
    ];
    let mut out = Vec::new();
    for (name, x, a, b, want) in cases {
        let hn = h1_necklace(&x, None).map_err(|e| e.to_string())?.classes(a, b).len();
        let hr = h1_rewrite(&x, Budget::default()).map_err(|e| e.to_string())?.normal_forms(a, b).map(|v| v.len());
        let loc = compare_localization(&x, ObjectMode::FaceClosed, Budget::default()).map_err(|e| e.to_string())?;
        let (sa, sb) = (x.name(0, a).to_string(), x.name(0, b).to_string());
        let hl = loc.vertex_rows().find(|r| r.source == sa && r.target == sb).map(|r| r.loc_classes);
        ensure(hn == want && hr == Some(want) && hl == Some(want) && loc.certified(), || {
            format!("{name}: hom({a},{b}) necklace {hn}, rewrite {hr:?}, localize {hl:?}, expected {want}")
        })?;
        out.push(format!("{name} {want}"));
    }
    Ok(out.join(", "))
}

fn c3_thin_partitions(corpus: &[Instance]) -> Outcome {
    let mut words = 0;
    for inst in corpus {
        let thin = h1_necklace_with(&inst.sset, None, Saturation::Thin).map_err(|e| e.to_string())?;
        let all = h1_necklace_with(&inst.sset, None, Saturation::Unrestricted).map_err(|e| e.to_string())?;
        ensure(thin.words() == all.words(), || format!("{}: word sets differ", inst.name))?;
        ensure(thin.partition() == all.partition(), || format!("{}: partitions differ", inst.name))?;
        words += thin.words().len();
    }
    Ok(format!("{} instances, {words} words", corpus.len()))
}

fn c4_nerve_round_trip() -> Outcome {
    let mut r = corpus::rng(404);
    let mut cyclic = 0;
    let count = 60;
    for i in 0..count {
        let c = corpus::random_category(&mut r, 5, 4, i % 2 == 1);
        ensure(c.object_count() <= 5, || format!("category {i} has {} objects", c.object_count()))?;
        if (0..c.arrow_count()).any(|f| !c.is_identity(f) && c.source(f) == c.target(f)) {
            cyclic += 1;
        }
        let f = nerve_round_trip(&c).map_err(|e| format!("category {i}: {e}"))?;
        f.check_isomorphism(&c, &h1_of_nerve(&c)?).map_err(|e| format!("category {i}: {e}"))?;
    }
    Ok(format!("{count} categories, {cyclic} with nonidentity endomorphisms"))
}

/// `h₁(N C)` through whichever backend is exact for it.
fn h1_of_nerve(c: &ExplicitFinCategory) -> Result<ExplicitFinCategory, String> {
    let n = necklace_core::sset::nerve_of_category(c, 2).map_err(|e| e.to_string())?;
    let h = if n.is_acyclic() {
        h1_necklace(&n, None).and_then(|h| h.materialize())
    } else {
        h1_rewrite(&n, Budget::default()).and_then(|h| h.materialize())
    };
    Ok(h.map_err(|e| e.to_string())?.category)
}

/// Bipointed simplicial maps between realizations, found by trying every
/// vertex function and looking up the image of each bead's top simplex.
fn simplicial_vertex_maps(n: &Necklace, m: &Necklace, level: usize) -> Vec<Vec<usize>> {
    let rm = realize(m, level).unwrap();
    let y = &rm.sset;
    let beads = n.bead_intervals();
    let tm = m.total();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(
        v: usize,
        tn: usize,
        tm: usize,
        beads: &[(usize, usize)],
        y: &TruncatedSSet,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if v > tn {
            if cur[0] == 0 && cur[tn] == tm {
                out.push(cur.clone());
            }
            return;
        }
        for w in 0..=tm {
            cur.push(w);
            let ok = beads.iter().filter(|&&(_, b)| b == v).all(|&(a, b)| {
                let name: String = cur[a..=b].iter().map(|&u| char::from(b'0' + u as u8)).collect();
                y.cell(b - a, &name).is_some()
            });
            if ok {
                go(v + 1, tn, tm, beads, y, cur, out);
            }
            cur.pop();
        }
    }
    go(0, n.total(), tm, &beads, y, &mut cur, &mut out);
    out.sort();
    out
}

fn c5_necklace_laws() -> Outcome {
    let start = Instant::now();
    let ns = necklaces_up_to(5);
    let k = ns.len();
    let level = 5;
    // hom lists, with an index of each list by vertex map
    let mut homs: Vec<Vec<Vec<NecklaceMap>>> = Vec::with_capacity(k);
    let mut index: Vec<Vec<HashMap<Vec<usize>, u32>>> = Vec::with_capacity(k);
    let mut total = 0;
    for a in &ns {
        let mut row = Vec::with_capacity(k);
        let mut irow = Vec::with_capacity(k);
        for b in &ns {
            let h = hom_set(a, b);
            let mut vms: Vec<Vec<usize>> = h.iter().map(|f| f.vertex_map().to_vec()).collect();
            for vm in &vms {
                let monotone = vm.windows(2).all(|w| w[0] <= w[1]);
                ensure(monotone && vm[0] == 0 && *vm.last().unwrap() == b.total(), || {
                    format!("hom({a},{b}) contains {vm:?}")
                })?;
            }
            vms.sort();
            ensure(vms.windows(2).all(|w| w[0] != w[1]), || format!("hom({a},{b}) repeats a vertex map"))?;
            ensure(vms == simplicial_vertex_maps(a, b, level), || format!("hom({a},{b}) differs from bipointed simplicial maps"))?;
            irow.push(h.iter().enumerate().map(|(i, f)| (f.vertex_map().to_vec(), i as u32)).collect());
            total += h.len();
            row.push(h);
        }
        homs.push(row);
        index.push(irow);
    }
    // The realization functor is faithful on a sample of pairs small enough to realize quickly.
    for (i, a) in ns.iter().enumerate().filter(|(_, a)| a.total() <= 3) {
        for (j, _) in ns.iter().enumerate() {
            let mut seen = HashSet::new();
            for f in &homs[i][j] {
                let g = f.to_sset_map(3).map_err(|e| e.to_string())?;
                ensure(g.check().ok, || format!("realization of {:?} from {a} is not simplicial", f.vertex_map()))?;
                ensure(seen.insert(g.levels().to_vec()), || format!("two maps from {a} realize equally"))?;
            }
        }
    }
    // comp[a][b][c][i * |hom(b,c)| + j] is the index of hom(b,c)[j] ∘ hom(a,b)[i]
    let mut comp: Vec<Vec<Vec<Vec<u32>>>> = vec![vec![vec![Vec::new(); k]; k]; k];
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                let (hab, hbc) = (&homs[a][b], &homs[b][c]);
                let mut t = Vec::with_capacity(hab.len() * hbc.len());
                for f in hab {
                    for g in hbc {
                        let gf = g.compose(f).map_err(|e| format!("composite fails: {e}"))?;
                        let idx = index[a][c].get(gf.vertex_map()).ok_or_else(|| {
                            format!("{:?} then {:?} leaves hom({},{})", f.vertex_map(), g.vertex_map(), ns[a], ns[c])
                        })?;
                        t.push(*idx);
                    }
                }
                comp[a][b][c] = t;
            }
        }
    }
    for a in 0..k {
        let id = index[a][a][&NecklaceMap::identity(&ns[a]).vertex_map().to_vec()] as usize;
        for b in 0..k {
            let (hab, hbb) = (homs[a][b].len(), homs[b][b].len());
            let idb = index[b][b][&NecklaceMap::identity(&ns[b]).vertex_map().to_vec()] as usize;
            for i in 0..hab {
                ensure(comp[a][a][b][id * hab + i] as usize == i, || format!("left unit fails on {} -> {}", ns[a], ns[b]))?;
                ensure(comp[a][b][b][i * hbb + idb] as usize == i, || format!("right unit fails on {} -> {}", ns[a], ns[b]))?;
            }
        }
    }
    let mut checked: u64 = 0;
    for a in 0..k {
        for b in 0..k {
            let hab = homs[a][b].len();
            for c in 0..k {
                let hbc = homs[b][c].len();
                let abc = &comp[a][b][c];
                for d in 0..k {
                    let (hcd, hbd) = (homs[c][d].len(), homs[b][d].len());
                    let (acd, abd, bcd) = (&comp[a][c][d], &comp[a][b][d], &comp[b][c][d]);
                    for i in 0..hab {
                        for j in 0..hbc {
                            let ij = abc[i * hbc + j] as usize;
                            for l in 0..hcd {
                                let left = acd[ij * hcd + l];
                                let right = abd[i * hbd + bcd[j * hcd + l] as usize];
                                if left != right {
                                    return Err(format!("associativity fails on {} {} {} {}", ns[a], ns[b], ns[c], ns[d]));
                                }
                            }
                        }
                    }
                    checked += (hab * hbc * hcd) as u64;
                }
            }
        }
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(30), || format!("took {t:.1?}, over the 30 second limit"))?;
    Ok(format!("{k} necklaces, {total} morphisms, {checked} composable triples, {t:.2?}"))
}

/// Monotone maps `[n] -> [t]` preserving both endpoints.
fn anchors(n: usize, t: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, t: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            if *cur.last().unwrap() == t {
                out.push(cur.clone());
            }
            return;
        }
        for v in *cur.last().unwrap()..=t {
            cur.push(v);
            go(n, t, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n + 1, t, &mut vec![0], &mut out);
    out
}

fn c6_join_adjunction() -> Outcome {
    let ns = necklaces_up_to(5);
    let mut homs: HashMap<(Necklace, Necklace), usize> = HashMap::new();
    let mut hom_count = |a: &Necklace, b: &Necklace| -> usize {
        *homs.entry((a.clone(), b.clone())).or_insert_with(|| hom_set(a, b).len())
    };
    // tuples of necklaces with total at most 5
    let mut tuples: Vec<Vec<Necklace>> = ns.iter().map(|n| vec![n.clone()]).collect();
    let mut frontier = tuples.clone();
    for _ in 1..MAX_JOIN_PARTS {
        let mut next = Vec::new();
        for t in &frontier {
            let used: usize = t.iter().map(Necklace::total).sum();
            for n in ns.iter().filter(|n| used + n.total() <= 5) {
                let mut u = t.clone();
                u.push(n.clone());
                next.push(u);
            }
        }
        tuples.extend(next.iter().cloned());
        frontier = next;
    }
    let mut bijections = 0u64;
    let mut maps = 0u64;
    for parts in &tuples {
        let (j, joints) = join(parts).map_err(|e| e.to_string())?;
        for target in &ns {
            let mut by_anchor: HashMap<Vec<usize>, usize> = HashMap::new();
            for f in hom_set(&j, target) {
                let vm = f.vertex_map();
                let alpha: Vec<usize> = joints.iter().map(|&v| vm[v]).collect();
                // restrict to each part and confirm the pieces are morphisms
                for (i, p) in parts.iter().enumerate() {
                    let (lo, hi) = (alpha[i], alpha[i + 1]);
                    let piece: Vec<usize> = vm[joints[i]..=joints[i + 1]].iter().map(|&v| v - lo).collect();
                    NecklaceMap::new(p.clone(), restrict_interval(target, lo, hi), piece)
                        .map_err(|e| format!("restriction of a map from {j} to {target}: {e}"))?;
                }
                *by_anchor.entry(alpha).or_default() += 1;
                maps += 1;
            }
            for alpha in anchors(parts.len(), target.total()) {
                let cut = join_right_adjoint(target, &alpha).map_err(|e| e.to_string())?;
                let rhs: usize = parts.iter().zip(&cut).map(|(p, q)| hom_count(p, q)).product();
                let lhs = by_anchor.get(&alpha).copied().unwrap_or(0);
                ensure(lhs == rhs, || {
                    let names: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                    format!("J({}) to ({target}, {alpha:?}): {lhs} against {rhs}", names.join(","))
                })?;
                bijections += 1;
            }
        }
    }
    Ok(format!(
        "{} tuples of up to {MAX_JOIN_PARTS} parts, {bijections} hom bijections, {maps} maps restricted",
        tuples.len()
    ))
}

fn c7_slice_pi0(corpus: &[Instance]) -> Outcome {
    let mut pairs = 0;
    let mut explicit_instances = 0;
    for inst in corpus {
        let x = &inst.sset;
        let h = h1_necklace(x, None).map_err(|e| e.to_string())?;
        let hm = match h.materialize() {
            Ok(m) => m,
            Err(_) => continue,
        };
        let bound = x.longest_nondegenerate_path().expect("acyclic") + 2;
        let mut rows = Vec::new();
        let mut objects = 0;
        for a in 0..x.len(0) {
            for b in 0..x.len(0) {
                let s = slice_components(x, a, b, bound, SliceFilter::All);
                ensure(s.components == hm.hom_count(a, b), || {
                    format!("{}: hom({a},{b}) = {} but slice has {} components at bound {bound}", inst.name, hm.hom_count(a, b), s.components)
                })?;
                objects += s.objects;
                rows.push((a, b, s.components));
                pairs += 1;
            }
        }
        if objects <= EXPLICIT_SLICE_CAP {
            explicit_instances += 1;
            for (a, b, c) in rows {
                let e = slice_category_pi0(x, a, b, bound);
                ensure(e == c, || format!("{}: explicit slice ({a},{b}) has {e} components, streaming {c}", inst.name))?;
            }
        }
    }
    Ok(format!(
        "{pairs} vertex pairs at bound longest path + 2; explicit slice category cross-checked on {explicit_instances} of {} instances",
        corpus.len()
    ))
}

fn c8_sifted() -> Outcome {
    let small = necklaces_up_to(3);
    let mut count = 0;
    for a in &small {
        for b in &small {
            let bound = a.total() + b.total() + 2;
            let r = sifted_witness(a, b, bound).map_err(|e| e.to_string())?;
            ensure(r.connected(), || format!("({a}, {b}) at bound {bound}: {} components", r.components))?;
            count += 1;
        }
    }
    Ok(format!("{count} pairs connected"))
}

fn c9_products() -> Outcome {
    let inst = corpus::acyclic_corpus(CORPUS_SEED, CORPUS_SIZE, 2).map_err(|e| e.to_string())?;
    let small: Vec<&Instance> = inst.iter().filter(|i| i.sset.len(0) <= 3).collect();
    let mut count = 0;
    for (i, x) in small.iter().enumerate() {
        for y in small.iter().skip(i).take(3) {
            product_comparison(&x.sset, &y.sset).map_err(|e| format!("{} x {}: {e}", x.name, y.name))?;
            count += 1;
        }
    }
    ensure(count >= 50, || format!("only {count} pairs"))?;
    Ok(format!("{count} pairs"))
}

fn c10_fibrations() -> Outcome {
    let l = 3;
    // golden trio
    let x = Arc::new(standard_simplex(2, l).unwrap());
    let id = SSetMap::identity(x);
    ensure(is_right_fibration(&id).is_right_fibration, || "identity rejected".into())?;
    let bang = {
        let s = Arc::new(standard_simplex(1, l).unwrap());
        let p = Arc::new(standard_simplex(0, l).unwrap());
        SSetMap::from_fn(s, p, |_, _| 0).map_err(|e| e.to_string())?
    };
    let r = is_right_fibration(&bang);
    ensure(r.first_failing_level() == Some(1), || format!("simplex 1 over a point: {r}"))?;
    ensure(r.to_string().starts_with("NOT a right fibration (n=1)"), || r.to_string())?;
    let c = ExplicitFinCategory::linear_order(2);
    for o in 0..c.object_count() {
        let (slice, proj) = c.slice_over(o);
        let p = nerve_of_functor(&slice, &c, &proj, l).map_err(|e| e.to_string())?;
        ensure(is_right_fibration(&p).is_right_fibration, || format!("slice over {o} rejected"))?;
    }
    let mut r = corpus::rng(1010);
    for i in 0..20 {
        let c = corpus::random_category(&mut r, 3, 2, i % 2 == 0);
        let o = i % c.object_count();
        let (slice, proj) = c.slice_over(o);
        let p = nerve_of_functor(&slice, &c, &proj, l).map_err(|e| e.to_string())?;
        ensure(is_right_fibration(&p).is_right_fibration, || format!("slice projection {i} rejected"))?;
    }

    // round trips
    let mut trips = 0;
    for i in 0..120 {
        let c = corpus::random_category(&mut r, 4, 2, i % 3 != 0);
        let f = corpus::random_presheaf(&mut r, &c, 3);
        presheaf_round_trip(&f, l).map_err(|e| format!("presheaf {i}: {e}"))?;
        let p = unstraighten_map(&f, l).map_err(|e| format!("presheaf {i}: {e}"))?;
        ensure(is_right_fibration(&p).is_right_fibration, || format!("unstraightening {i} is not a right fibration"))?;
        let back = fibration_round_trip(&p).map_err(|e| format!("fibration {i}: {e}"))?;
        ensure(back.iso.is_isomorphism(), || format!("fibration {i}: comparison is not an isomorphism"))?;
        let over = back.iso.then(&back.unstraightened).map_err(|e| e.to_string())?;
        ensure(over.levels() == p.levels(), || format!("fibration {i}: comparison is not over the base"))?;
        trips += 1;
    }

    // f0 criterion against whether the transformation is invertible
    let mut f0 = 0;
    let mut invertible = 0;
    for i in 0..240 {
        let c = corpus::random_category(&mut r, 4, 2, i % 3 != 0);
        let (f, g, eta) = corpus::random_transformation(&mut r, &c, 3);
        let (uf, ug, m) = unstraighten_transformation(&f, &g, &eta, l).map_err(|e| format!("instance {i}: {e}"))?;
        let rep = f0_criterion(&uf, &ug, &m).map_err(|e| format!("instance {i}: {e}"))?;
        ensure(rep.consistent(), || format!("instance {i}: {rep}"))?;
        let iso = eta.is_isomorphism(&f, &g);
        ensure(rep.level0_bijective == iso && rep.levelwise_bijective == iso, || {
            format!("instance {i}: transformation invertible {iso}, {rep}")
        })?;
        invertible += iso as usize;
        f0 += 1;
    }
    Ok(format!("golden trio ok, {trips} round trips, {f0} f0 instances ({invertible} invertible)"))
}

fn c11_bench() -> Outcome {
    let spines = corpus::generate(corpus::Family::Spines, 8, 0, 2).map_err(|e| e.to_string())?;
    let report = bench::run(&spines).map_err(|e| e.to_string())?;
    ensure(report.partition_mismatches.is_empty(), || format!("partitions differ on {:?}", report.partition_mismatches))?;
    let pairs = bench::visit_pairs(&report);
    let long: Vec<_> = pairs.iter().skip(5).cloned().collect();
    bench::monotone_gap(&long)?;
    let o = Command::new(env!("CARGO_BIN_EXE_necklace"))
        .args(["bench", "--size", "8", "--trunc", "2"])
        .output()
        .map_err(|e| e.to_string())?;
    let text = String::from_utf8_lossy(&o.stdout);
    ensure(o.status.success() && text.contains("thin visits fewer words: yes"), || format!("cli bench output:\n{text}"))?;
    ensure(text.lines().next().is_some_and(|h| h.contains("wall_ms")), || "cli bench has no timing column".into())?;
    let gaps: Vec<String> = long.iter().map(|(n, t, v)| format!("{n} {t}/{v}")).collect();
    Ok(format!("thin/naive words {}", gaps.join(", ")))
}

fn main() -> ExitCode {
    let corpus = corpus();
    let criteria: Vec<Criterion> = vec![
        ("triple-backend agreement", Box::new(|| c1_triple_backends(&corpus))),
        ("golden homs", Box::new(c2_golden_homs)),
        ("thin and unrestricted saturation agree", Box::new(|| c3_thin_partitions(&corpus))),
        ("nerve round trip", Box::new(c4_nerve_round_trip)),
        ("necklace category laws and faithfulness", Box::new(c5_necklace_laws)),
        ("join adjunction bijections", Box::new(c6_join_adjunction)),
        ("hom counts equal slice components", Box::new(|| c7_slice_pi0(&corpus))),
        ("siftedness witnesses", Box::new(c8_sifted)),
        ("product compatibility", Box::new(c9_products)),
        ("right fibration suite", Box::new(c10_fibrations)),
        ("benchmark thin against naive", Box::new(c11_bench)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let t = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{t:.2?}]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} [{t:.2?}]", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
