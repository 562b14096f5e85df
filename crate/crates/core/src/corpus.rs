//! Deterministic generators for simplicial sets, categories and presheaves.
//!
//! Everything is driven by a `ChaCha8Rng` seeded from the caller, so equal
//! seeds give equal corpora on every platform.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::category::{Arrow, ExplicitFinCategory};
use crate::fibration::{NaturalTransformation, Presheaf};
use crate::sset::{boundary, horn, nerve_of_category, spine, FaceRef, NondegenerateBuilder, SsetError, TruncatedSSet};
use crate::union_find::UnionFind;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CorpusError {
    #[error("unknown corpus family `{0}`")]
    UnknownFamily(String),
    #[error(transparent)]
    Sset(#[from] SsetError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Spines,
    Horns,
    Boundaries,
    RandomDagComplex,
    NerveOfRandomPoset,
}

impl Family {
    pub const ALL: [Family; 5] =
        [Family::Spines, Family::Horns, Family::Boundaries, Family::RandomDagComplex, Family::NerveOfRandomPoset];
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Spines => "spines",
            Family::Horns => "horns",
            Family::Boundaries => "boundaries",
            Family::RandomDagComplex => "random-dag-complex",
            Family::NerveOfRandomPoset => "nerve-of-random-poset",
        })
    }
}

impl FromStr for Family {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL.into_iter().find(|f| f.to_string() == s).ok_or_else(|| CorpusError::UnknownFamily(s.into()))
    }
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub name: String,
    pub sset: TruncatedSSet,
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `size` members of a family. Deterministic in `seed`; the fixed
/// families ignore it.
pub fn generate(family: Family, size: usize, seed: u64, trunc_level: usize) -> Result<Vec<Instance>, CorpusError> {
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(size);
    match family {
        Family::Spines => {
            for n in 1..=size {
                out.push(Instance { name: format!("spine({n})"), sset: spine(n, trunc_level)? });
            }
        }
        Family::Boundaries => {
            for n in 1..=size {
                out.push(Instance { name: format!("boundary({n})"), sset: boundary(n, trunc_level)? });
            }
        }
        Family::Horns => {
            let mut n = 2;
            'outer: loop {
                for k in 0..=n {
                    if out.len() == size {
                        break 'outer;
                    }
                    out.push(Instance { name: format!("horn({n},{k})"), sset: horn(n, k, trunc_level)? });
                }
                n += 1;
            }
        }
        Family::RandomDagComplex => {
            for i in 0..size {
                let sset = random_dag_complex(&mut r, &DagOptions { trunc_level, ..DagOptions::default() })?;
                out.push(Instance { name: format!("dag#{i}"), sset });
            }
        }
        Family::NerveOfRandomPoset => {
            for i in 0..size {
                let n = r.gen_range(2..=4);
                let poset = random_poset(&mut r, n);
                out.push(Instance { name: format!("poset#{i}"), sset: nerve_of_category(&poset, trunc_level)? });
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct DagOptions {
    pub trunc_level: usize,
    pub max_vertices: usize,
    /// Upper bound on the number of nondegenerate simplices.
    pub max_simplices: usize,
    /// Allow 2-simplices with a degenerate face, which identify parallel
    /// edges.
    pub collapsed: bool,
}

impl Default for DagOptions {
    fn default() -> Self {
        DagOptions { trunc_level: 3, max_vertices: 6, max_simplices: 30, collapsed: true }
    }
}

#[derive(Clone, Copy)]
struct Tri {
    idx: usize,
    v: [usize; 3],
    // d0, d1, d2
    e: [usize; 3],
}

/// Random simplicial set whose nondegenerate edges all go from a smaller to
/// a larger vertex, so its edge graph is acyclic.
pub fn random_dag_complex(r: &mut impl Rng, opts: &DagOptions) -> Result<TruncatedSSet, SsetError> {
    let mut b = NondegenerateBuilder::new(opts.trunc_level);
    let n = r.gen_range(2..=opts.max_vertices.max(2));
    let cap = opts.max_simplices;
    let mut count = n;
    for v in 0..n {
        b.vertex(v.to_string());
    }
    // edges[i][j] = indices of edges i -> j
    let mut edges = vec![vec![Vec::new(); n]; n];
    let mut edge_count = 0;
    for i in 0..n {
        for j in i + 1..n {
            let mult = match r.gen_range(0..20) {
                0..=8 => 0,
                9..=17 => 1,
                _ => 2,
            };
            for m in 0..mult {
                if count >= cap {
                    break;
                }
                let name = if m == 0 { format!("e{i}{j}") } else { format!("e{i}{j}'") };
                let name = if n > 10 { format!("e{i}.{j}.{m}") } else { name };
                let _ = b.simplex(name, vec![FaceRef::nondegenerate(0, j), FaceRef::nondegenerate(0, i)])?;
                edges[i][j].push(edge_count);
                edge_count += 1;
                count += 1;
            }
        }
    }
    let mut tris: Vec<Tri> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for &ij in &edges[i][j] {
                    for &jk in &edges[j][k] {
                        for &ik in &edges[i][k] {
                            if count < cap && r.gen_bool(0.4) {
                                let faces = vec![
                                    FaceRef::nondegenerate(1, jk),
                                    FaceRef::nondegenerate(1, ik),
                                    FaceRef::nondegenerate(1, ij),
                                ];
                                let idx = b.simplex(format!("t{}", tris.len()), faces)?;
                                tris.push(Tri { idx, v: [i, j, k], e: [jk, ik, ij] });
                                count += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    if opts.collapsed {
        let mut collapsed = 0;
        for i in 0..n {
            for j in i + 1..n {
                let par = &edges[i][j];
                if par.len() < 2 || count >= cap || !r.gen_bool(0.3) {
                    continue;
                }
                let (f, g) = (par[0], par[1]);
                // (i, j, j) with d0 = s0 j, or (i, i, j) with d2 = s0 i.
                let degen = |v| FaceRef::degenerate(0, v, vec![0, 0]);
                let faces = if r.gen_bool(0.5) {
                    vec![degen(j), FaceRef::nondegenerate(1, g), FaceRef::nondegenerate(1, f)]
                } else {
                    vec![FaceRef::nondegenerate(1, f), FaceRef::nondegenerate(1, g), degen(i)]
                };
                b.simplex(format!("c{collapsed}"), faces)?;
                collapsed += 1;
                count += 1;
            }
        }
    }
    if opts.trunc_level >= 3 {
        let find = |v: [usize; 3], e: [usize; 3]| tris.iter().filter(move |t| t.v == v && t.e == e).map(|t| t.idx);
        let mut tets = 0;
        for t3 in &tris {
            // t3 = ijk is d3; choose l > k and the remaining faces.
            let [i, j, k] = t3.v;
            for l in k + 1..n {
                for jkl in tris.iter().filter(|t| t.v == [j, k, l] && t.e[2] == t3.e[0]) {
                    for ikl in tris.iter().filter(|t| t.v == [i, k, l] && t.e[0] == jkl.e[0] && t.e[2] == t3.e[1]) {
                        let want = [jkl.e[1], ikl.e[1], t3.e[2]];
                        for ijl in find([i, j, l], want) {
                            if count < cap && r.gen_bool(0.5) {
                                b.simplex(
                                    format!("s{tets}"),
                                    vec![
                                        FaceRef::nondegenerate(2, jkl.idx),
                                        FaceRef::nondegenerate(2, ikl.idx),
                                        FaceRef::nondegenerate(2, ijl),
                                        FaceRef::nondegenerate(2, t3.idx),
                                    ],
                                )?;
                                tets += 1;
                                count += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    b.build()
}

/// Random poset on `0..n` containing `i <= j` only for `i <= j`.
pub fn random_poset(r: &mut impl Rng, n: usize) -> ExplicitFinCategory {
    let mut leq = vec![vec![false; n]; n];
    for i in 0..n {
        leq[i][i] = true;
        for j in i + 1..n {
            leq[i][j] = r.gen_bool(0.5);
        }
    }
    // transitive closure
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if leq[i][k] && leq[k][j] {
                    leq[i][j] = true;
                }
            }
        }
    }
    ExplicitFinCategory::poset((0..n).map(|i| i.to_string()).collect(), |a, b| leq[a][b])
}

/// Small monoids on `0..size` with unit 0, as multiplication tables.
fn monoid(kind: usize) -> (usize, fn(usize, usize, usize) -> usize) {
    match kind {
        0 => (2, |a, b, n| (a + b) % n),
        1 => (3, |a, b, n| (a + b) % n),
        2 => (4, |a, b, n| (a + b) % n),
        // Klein four group
        3 => (4, |a, b, _| a ^ b),
        // {1, 0} under multiplication; 1 is the unit 0.
        4 => (2, |a, b, _| a | b),
        // truncated addition
        5 => (3, |a, b, n| (a + b).min(n - 1)),
        // max
        6 => (4, |a, b, _| a.max(b)),
        // left zeros with a unit adjoined
        _ => (3, |a, b, _| if a == 0 { b } else { a }),
    }
}

/// Poset whose strict relations carry a monoid label that multiplies
/// under composition.
fn labelled_poset(r: &mut impl Rng, n: usize, kind: usize) -> ExplicitFinCategory {
    let poset = random_poset(r, n);
    let (size, mul) = monoid(kind);
    let mut arrows = Vec::new();
    let mut ids = vec![0; n];
    let mut index = HashMap::new();
    for a in 0..n {
        for b in 0..n {
            if a == b {
                ids[a] = arrows.len();
                arrows.push(Arrow { name: format!("id{a}"), source: a, target: a });
            } else if !poset.hom(a, b).is_empty() {
                for m in 0..size {
                    index.insert((a, b, m), arrows.len());
                    arrows.push(Arrow { name: format!("{a}<{b}:{m}"), source: a, target: b });
                }
            }
        }
    }
    let label: Vec<Option<(usize, usize, usize)>> =
        arrows.iter().enumerate().map(|(i, _)| index.iter().find(|(_, &v)| v == i).map(|(k, _)| *k)).collect();
    let ends: Vec<(usize, usize)> = arrows.iter().map(|a| (a.source, a.target)).collect();
    ExplicitFinCategory::new((0..n).map(|i| i.to_string()).collect(), arrows, ids.clone(), |f, g| {
        if ends[f].1 != ends[g].0 {
            return None;
        }
        match (label[f], label[g]) {
            (None, _) => Some(g),
            (_, None) => Some(f),
            (Some((a, _, m)), Some((_, c, m2))) => index.get(&(a, c, mul(m, m2, size))).copied(),
        }
    })
    .expect("labelled poset is a category")
}

fn one_object(kind: usize) -> ExplicitFinCategory {
    let (size, mul) = monoid(kind);
    let arrows = (0..size).map(|m| Arrow { name: format!("m{m}"), source: 0, target: 0 }).collect();
    ExplicitFinCategory::new(vec!["*".into()], arrows, vec![0], |f, g| Some(mul(f, g, size))).expect("monoid")
}

/// Free category on a random quiver with edges `i -> j` for `i < j`, or
/// `None` if some hom-set exceeds `max_parallel`.
fn free_dag_category(r: &mut impl Rng, max_objects: usize, max_parallel: usize) -> Option<ExplicitFinCategory> {
    let n = r.gen_range(2..=max_objects.max(2));
    let mut gens = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mult = match r.gen_range(0..10) {
                0..=3 => 0,
                4..=8 => 1,
                _ => 2,
            };
            for m in 0..mult {
                gens.push((format!("g{i}{j}{}", if m == 0 { "" } else { "'" }), i, j));
            }
        }
    }
    // paths[t] = generator sequences; grown in length order.
    let mut paths: Vec<Vec<usize>> = Vec::new();
    let mut frontier: Vec<Vec<usize>> = (0..gens.len()).map(|g| vec![g]).collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for p in &frontier {
            let end = gens[*p.last().unwrap()].2;
            for (g, gen) in gens.iter().enumerate() {
                if gen.1 == end {
                    let mut q = p.clone();
                    q.push(g);
                    next.push(q);
                }
            }
        }
        paths.append(&mut frontier);
        frontier = next;
    }
    let mut hom = vec![vec![0usize; n]; n];
    for p in &paths {
        hom[gens[p[0]].1][gens[*p.last().unwrap()].2] += 1;
    }
    if hom.iter().flatten().any(|&h| h > max_parallel) {
        return None;
    }
    let mut arrows: Vec<Arrow> =
        (0..n).map(|o| Arrow { name: format!("id{o}"), source: o, target: o }).collect();
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    for p in &paths {
        index.insert(p.clone(), arrows.len());
        arrows.push(Arrow {
            name: p.iter().map(|&g| gens[g].0.as_str()).collect::<Vec<_>>().join(";"),
            source: gens[p[0]].1,
            target: gens[*p.last().unwrap()].2,
        });
    }
    let word: Vec<Vec<usize>> = std::iter::repeat_with(Vec::new).take(n).chain(paths.iter().cloned()).collect();
    let ends: Vec<(usize, usize)> = arrows.iter().map(|a| (a.source, a.target)).collect();
    Some(
        ExplicitFinCategory::new((0..n).map(|i| i.to_string()).collect(), arrows, (0..n).collect(), |f, g| {
            if ends[f].1 != ends[g].0 {
                return None;
            }
            if f < n {
                return Some(g);
            }
            if g < n {
                return Some(f);
            }
            let mut w = word[f].clone();
            w.extend(&word[g]);
            index.get(&w).copied()
        })
        .expect("free category"),
    )
}

/// Random category with at most `max_objects` objects and at most
/// `max_parallel` arrows between any two objects. With `acyclic` only
/// categories whose nerve has an acyclic edge graph are produced.
pub fn random_category(r: &mut impl Rng, max_objects: usize, max_parallel: usize, acyclic: bool) -> ExplicitFinCategory {
    let small_monoids: Vec<usize> = (0..8).filter(|&k| monoid(k).0 <= max_parallel).collect();
    loop {
        let kind = r.gen_range(0..if acyclic { 3 } else { 5 });
        let c = match kind {
            0 => {
                let n = r.gen_range(1..=max_objects);
                random_poset(r, n)
            }
            1 => {
                let Some(&m) = small_monoids.choose(r) else { continue };
                let n = r.gen_range(2..=max_objects.clamp(2, 4));
                labelled_poset(r, n, m)
            }
            2 => match free_dag_category(r, max_objects, max_parallel) {
                Some(c) => c,
                None => continue,
            },
            3 => {
                let Some(&m) = small_monoids.choose(r) else { continue };
                one_object(m)
            }
            _ => {
                let n = r.gen_range(1..=2.min(max_objects));
                let group = one_object(0);
                ExplicitFinCategory::product(&ExplicitFinCategory::linear_order(n - 1), &group)
            }
        };
        let fits = (0..c.object_count())
            .all(|a| (0..c.object_count()).all(|b| c.hom(a, b).len() <= max_parallel));
        if fits && c.object_count() <= max_objects {
            return c;
        }
    }
}

/// Coproduct of representables `⊔_t hom(-, t)` as element lists per object.
fn representables(c: &ExplicitFinCategory, tops: &[usize]) -> Vec<Vec<(usize, usize)>> {
    (0..c.object_count())
        .map(|o| tops.iter().enumerate().flat_map(|(k, &t)| c.hom(o, t).into_iter().map(move |f| (k, f))).collect())
        .collect()
}

/// Quotient presheaf data: the congruence generated by `merges` on a
/// coproduct of representables.
struct Quotient {
    elements: Vec<Vec<(usize, usize)>>,
    offset: Vec<usize>,
    uf: UnionFind,
}

impl Quotient {
    fn new(c: &ExplicitFinCategory, tops: &[usize]) -> Self {
        let elements = representables(c, tops);
        let mut offset = Vec::with_capacity(elements.len());
        let mut total = 0;
        for e in &elements {
            offset.push(total);
            total += e.len();
        }
        Quotient { elements, offset, uf: UnionFind::new(total) }
    }

    /// `x·a` for `x: c -> t` and `a: c' -> c`.
    fn act(&self, c: &ExplicitFinCategory, a: usize, o: usize, i: usize) -> usize {
        let (k, f) = self.elements[o][i];
        let g = c.compose(a, f).expect("composable");
        let s = c.source(a);
        self.offset[s] + self.elements[s].iter().position(|&e| e == (k, g)).expect("element")
    }

    /// Merges two elements of the same value set and closes the result
    /// under the action. Closing each new pair suffices: if the relation
    /// was a congruence before, transitivity is inherited.
    fn merge(&mut self, c: &ExplicitFinCategory, o: usize, i: usize, j: usize) {
        let mut stack = vec![(o, i, j)];
        while let Some((o, i, j)) = stack.pop() {
            if !self.uf.union(self.offset[o] + i, self.offset[o] + j) {
                continue;
            }
            for &a in c.arrows_to(o) {
                let s = c.source(a);
                let (x, y) = (self.act(c, a, o, i) - self.offset[s], self.act(c, a, o, j) - self.offset[s]);
                stack.push((s, x, y));
            }
        }
    }

    fn class_count(&mut self, o: usize) -> usize {
        let mut reps: Vec<usize> = (0..self.elements[o].len()).map(|i| self.uf.find(self.offset[o] + i)).collect();
        reps.sort_unstable();
        reps.dedup();
        reps.len()
    }

    /// The quotient presheaf and, per object, the class of each element.
    fn presheaf(&mut self, c: &ExplicitFinCategory) -> (Presheaf, Vec<Vec<usize>>) {
        let mut class_of = Vec::new();
        let mut values = Vec::new();
        for o in 0..self.elements.len() {
            let mut seen: HashMap<usize, usize> = HashMap::new();
            let mut names = Vec::new();
            let mut cls = Vec::new();
            for i in 0..self.elements[o].len() {
                let rep = self.uf.find(self.offset[o] + i);
                let next = seen.len();
                let id = *seen.entry(rep).or_insert_with(|| {
                    let (k, f) = self.elements[o][i];
                    names.push(format!("{k}:{}", c.arrow_name(f)));
                    next
                });
                cls.push(id);
            }
            class_of.push(cls);
            values.push(names);
        }
        let mut action = Vec::with_capacity(c.arrow_count());
        for a in 0..c.arrow_count() {
            let (s, t) = (c.source(a), c.target(a));
            let mut table = vec![0; values[t].len()];
            for i in 0..self.elements[t].len() {
                table[class_of[t][i]] = class_of[s][self.act(c, a, t, i) - self.offset[s]];
            }
            action.push(table);
        }
        (Presheaf::new(c.clone(), values, action).expect("quotient of representables"), class_of)
    }
}

fn random_quotient(r: &mut impl Rng, c: &ExplicitFinCategory, max_value: usize) -> Quotient {
    let k = r.gen_range(0..=2);
    let tops: Vec<usize> = (0..k).map(|_| r.gen_range(0..c.object_count())).collect();
    let mut q = Quotient::new(c, &tops);
    for _ in 0..r.gen_range(0..=2) {
        let o = r.gen_range(0..c.object_count());
        let len = q.elements[o].len();
        if len >= 2 {
            let (i, j) = (r.gen_range(0..len), r.gen_range(0..len));
            q.merge(c, o, i, j);
        }
    }
    for o in 0..c.object_count() {
        while q.class_count(o) > max_value {
            let len = q.elements[o].len();
            let (i, j) = (r.gen_range(0..len), r.gen_range(0..len));
            q.merge(c, o, i, j);
        }
    }
    q
}

/// Random presheaf with at most `max_value` elements per object: a random
/// quotient of a coproduct of up to two representables.
pub fn random_presheaf(r: &mut impl Rng, c: &ExplicitFinCategory, max_value: usize) -> Presheaf {
    random_quotient(r, c, max_value).presheaf(c).0
}

/// Random natural transformation `F -> G`: a quotient map (possibly an
/// isomorphism), a relabelling isomorphism, or an inclusion into a
/// coproduct with another presheaf.
pub fn random_transformation(
    r: &mut impl Rng,
    c: &ExplicitFinCategory,
    max_value: usize,
) -> (Presheaf, Presheaf, NaturalTransformation) {
    let mut q = random_quotient(r, c, max_value);
    let (f, f_class) = q.presheaf(c);
    match r.gen_range(0..3) {
        0 => {
            // Coarsen further; the induced map is surjective.
            for _ in 0..r.gen_range(0..=1) {
                let o = r.gen_range(0..c.object_count());
                let len = q.elements[o].len();
                if len >= 2 {
                    let (i, j) = (r.gen_range(0..len), r.gen_range(0..len));
                    q.merge(c, o, i, j);
                }
            }
            let (g, g_class) = q.presheaf(c);
            let components = (0..c.object_count())
                .map(|o| {
                    let mut comp = vec![0; f.values(o).len()];
                    for (i, &fc) in f_class[o].iter().enumerate() {
                        comp[fc] = g_class[o][i];
                    }
                    comp
                })
                .collect();
            (f, g, NaturalTransformation { components })
        }
        1 => {
            let perms: Vec<Vec<usize>> = (0..c.object_count())
                .map(|o| {
                    let mut p: Vec<usize> = (0..f.values(o).len()).collect();
                    p.shuffle(r);
                    p
                })
                .collect();
            let mut values = vec![Vec::new(); c.object_count()];
            for o in 0..c.object_count() {
                values[o] = vec![String::new(); perms[o].len()];
                for (i, &p) in perms[o].iter().enumerate() {
                    values[o][p] = format!("{}'", f.values(o)[i]);
                }
            }
            let action = (0..c.arrow_count())
                .map(|a| {
                    let (s, t) = (c.source(a), c.target(a));
                    let mut table = vec![0; perms[t].len()];
                    for x in 0..perms[t].len() {
                        table[perms[t][x]] = perms[s][f.act(a, x)];
                    }
                    table
                })
                .collect();
            let g = Presheaf::new(c.clone(), values, action).expect("relabelled presheaf");
            (f, g, NaturalTransformation { components: perms })
        }
        _ => {
            let h = random_presheaf(r, c, max_value);
            let values: Vec<Vec<String>> = (0..c.object_count())
                .map(|o| {
                    f.values(o).iter().map(|v| format!("L{v}")).chain(h.values(o).iter().map(|v| format!("R{v}"))).collect()
                })
                .collect();
            let action = (0..c.arrow_count())
                .map(|a| {
                    let s = c.source(a);
                    let shift = f.values(s).len();
                    f.action(a).iter().copied().chain(h.action(a).iter().map(|&x| x + shift)).collect()
                })
                .collect();
            let g = Presheaf::new(c.clone(), values, action).expect("coproduct presheaf");
            let components = (0..c.object_count()).map(|o| (0..f.values(o).len()).collect()).collect();
            (f, g, NaturalTransformation { components })
        }
    }
}

/// Mixed corpus of acyclic simplicial sets with at most 30 nondegenerate
/// simplices each.
pub fn acyclic_corpus(seed: u64, count: usize, trunc_level: usize) -> Result<Vec<Instance>, CorpusError> {
    let mut out = Vec::with_capacity(count);
    for family in [Family::Spines, Family::Boundaries, Family::Horns] {
        let size = match family {
            Family::Spines => 6,
            Family::Boundaries => 3,
            _ => 7,
        };
        out.extend(generate(family, size, seed, trunc_level)?);
    }
    let mut r = rng(seed);
    let mut i = 0;
    while out.len() < count {
        let sset = if i % 4 == 3 {
            let n = r.gen_range(2..=4);
            nerve_of_category(&random_poset(&mut r, n), trunc_level)?
        } else {
            random_dag_complex(&mut r, &DagOptions { trunc_level, max_vertices: 5 + i % 2, ..DagOptions::default() })?
        };
        out.push(Instance { name: format!("mixed#{i}"), sset });
        i += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_names_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.to_string().parse::<Family>().unwrap(), f);
        }
        assert!("prisms".parse::<Family>().is_err());
    }

    #[test]
    fn spines_are_fixed() {
        let c = generate(Family::Spines, 5, 99, 2).unwrap();
        assert_eq!(c.len(), 5);
        assert_eq!(c[4].sset.len(0), 6);
    }

    #[test]
    fn random_complexes_are_valid_and_acyclic() {
        let c = generate(Family::RandomDagComplex, 40, 1, 3).unwrap();
        for inst in &c {
            assert!(inst.sset.validate().ok, "{}", inst.name);
            assert!(inst.sset.is_acyclic());
            assert!(inst.sset.nondegenerate_count() <= 30);
        }
        let names: Vec<_> = c.iter().map(|i| i.sset.names(1).to_vec()).collect();
        let again: Vec<_> =
            generate(Family::RandomDagComplex, 40, 1, 3).unwrap().iter().map(|i| i.sset.names(1).to_vec()).collect();
        assert_eq!(names, again);
    }

    #[test]
    fn poset_nerves_validate() {
        for inst in generate(Family::NerveOfRandomPoset, 3, 7, 3).unwrap() {
            assert!(inst.sset.validate().ok);
        }
    }

    #[test]
    fn random_categories_respect_bounds() {
        let mut r = rng(3);
        for _ in 0..60 {
            let c = random_category(&mut r, 5, 4, false);
            c.validate().unwrap();
            assert!(c.object_count() <= 5);
            let mut r2 = rng(c.arrow_count() as u64);
            let f = random_presheaf(&mut r2, &c, 3);
            assert!(f.all_values().iter().all(|v| v.len() <= 3));
            let (f, g, eta) = random_transformation(&mut r2, &c, 3);
            eta.check(&f, &g).unwrap();
        }
    }
}
