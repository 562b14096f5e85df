//! Slice categories `Nec_{/(X,x,y)}` truncated by total bead sum.
//!
//! An object is a necklace `N` with a bipointed map `N -> X`, i.e. one
//! simplex of `X` per bead with matching joints, starting at `x` and
//! ending at `y`. Two routes compute `π₀`:
//!
//! * [`slice_category`] builds every object and every morphism over `X`;
//! * [`slice_components`] stores only very thin objects (edge words) and
//!   joins every object's spine to each of its very thin restrictions.
//!
//! The second is exact: each object receives a map from its spine, and a
//! morphism `N -> M` restricts along `spine(N) -> N` to a very thin
//! restriction of `M` with the same anchor as `spine(N)`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::necklace::{compositions, hom_set, realize, Necklace, NecklaceError, NecklaceMap};
use crate::sset::{product, sequence_name, SSetMap, TruncatedSSet};
use crate::union_find::UnionFind;

/// Necklace over `X`: one simplex per bead. For `Δ⁰` the anchor is `start`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SliceObject {
    pub necklace: Necklace,
    pub start: usize,
    pub simplices: Vec<usize>,
}

impl SliceObject {
    /// Image of the vertex `v` of the necklace.
    pub fn vertex_image(&self, x: &TruncatedSSet, v: usize) -> usize {
        let mut off = 0;
        for (&n, &s) in self.necklace.beads().iter().zip(&self.simplices) {
            if v <= off + n {
                return x.vertex(n, s, v - off);
            }
            off += n;
        }
        self.start
    }

    /// Image of the vertex sequence `seq`, which must lie in one bead or be constant.
    fn image(&self, x: &TruncatedSSet, seq: &[usize]) -> Option<usize> {
        let (lo, hi) = (seq[0], *seq.last().unwrap());
        if lo == hi {
            let v = self.vertex_image(x, lo);
            return Some(x.pullback(0, v, &vec![0; seq.len()]));
        }
        let b = self.necklace.bead_containing(lo, hi)?;
        let off = self.necklace.joints()[b];
        let local: Vec<usize> = seq.iter().map(|&s| s - off).collect();
        Some(x.pullback(self.necklace.beads()[b], self.simplices[b], &local))
    }

    /// Restriction along a necklace map into this object's necklace.
    pub fn restrict(&self, x: &TruncatedSSet, f: &NecklaceMap) -> Option<SliceObject> {
        if f.target() != &self.necklace {
            return None;
        }
        let vm = f.vertex_map();
        let simplices = f
            .source()
            .bead_intervals()
            .into_iter()
            .map(|(a, b)| self.image(x, &vm[a..=b]))
            .collect::<Option<Vec<_>>>()?;
        Some(SliceObject { necklace: f.source().clone(), start: self.start, simplices })
    }

    /// The anchor as a map of simplicial sets out of the realization.
    pub fn anchor_map(&self, x: &Arc<TruncatedSSet>) -> Result<SSetMap, NecklaceError> {
        let r = Arc::new(realize(&self.necklace, x.trunc_level())?.sset);
        let levels = (0..=r.trunc_level())
            .map(|n| {
                (0..r.len(n))
                    .map(|c| self.image(x, &r.vertices(n, c)).expect("cells of a wedge lie in one bead"))
                    .collect()
            })
            .collect();
        Ok(SSetMap::new(r, x.clone(), levels)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum SliceFilter {
    /// Every necklace with beads up to the truncation level.
    #[default]
    All,
    /// Thin necklaces only. Connectivity found this way is genuine, but
    /// disconnection is inconclusive.
    Thin,
}

/// Simplices grouped by first vertex, with their last vertex.
struct Starts {
    by_first: Vec<Vec<Vec<(usize, usize)>>>,
}

impl Starts {
    fn new(x: &TruncatedSSet) -> Self {
        let by_first = (0..=x.trunc_level())
            .map(|n| {
                let mut v = vec![Vec::new(); x.len(0)];
                for c in 0..x.len(n) {
                    v[x.vertex(n, c, 0)].push((c, x.vertex(n, c, n)));
                }
                v
            })
            .collect();
        Starts { by_first }
    }
}

/// Calls `f` for every anchor of `shape` from `from` to `to`.
fn for_each_anchor(starts: &Starts, shape: &[usize], from: usize, to: usize, f: &mut impl FnMut(&[usize])) {
    fn go(starts: &Starts, shape: &[usize], at: usize, to: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        let i = cur.len();
        if i == shape.len() {
            if at == to {
                f(cur);
            }
            return;
        }
        for &(c, last) in &starts.by_first[shape[i]][at] {
            cur.push(c);
            go(starts, shape, last, to, cur, f);
            cur.pop();
        }
    }
    go(starts, shape, from, to, &mut Vec::new(), f);
}

/// Shapes with `T <= bound`, split into those usable at this truncation
/// and the number omitted for having a bead above it.
fn shapes(bound: usize, trunc_level: usize, filter: SliceFilter) -> (Vec<Necklace>, usize) {
    let mut kept = Vec::new();
    let mut omitted = 0;
    for t in 0..=bound {
        for beads in compositions(t, usize::MAX) {
            let n = Necklace::new(beads).expect("compositions have positive parts");
            if filter == SliceFilter::Thin && !n.is_thin() {
                continue;
            }
            if n.beads().iter().any(|&b| b > trunc_level) {
                omitted += 1;
            } else {
                kept.push(n);
            }
        }
    }
    (kept, omitted)
}

/// All slice objects with `T <= bound`, in shape order then anchor order.
pub fn slice_objects(x: &TruncatedSSet, from: usize, to: usize, bound: usize, filter: SliceFilter) -> (Vec<SliceObject>, usize) {
    let starts = Starts::new(x);
    let (kept, omitted) = shapes(bound, x.trunc_level(), filter);
    let mut out = Vec::new();
    for n in kept {
        if n.is_point() {
            if from == to {
                out.push(SliceObject { necklace: n, start: from, simplices: vec![] });
            }
            continue;
        }
        for_each_anchor(&starts, n.beads(), from, to, &mut |s| {
            out.push(SliceObject { necklace: n.clone(), start: from, simplices: s.to_vec() })
        });
    }
    (out, omitted)
}

/// Explicit truncated slice category.
#[derive(Clone, Debug)]
pub struct SliceGraph {
    pub bound: usize,
    pub omitted_shapes: usize,
    pub objects: Vec<SliceObject>,
    /// `(source, target, map)` with `target.restrict(map) == source`.
    pub edges: Vec<(usize, usize, NecklaceMap)>,
}

impl SliceGraph {
    pub fn components(&self) -> Vec<Vec<usize>> {
        pi0(self.objects.len(), self.edges.iter().map(|&(a, b, _)| (a, b)))
    }
}

pub fn slice_category(x: &TruncatedSSet, from: usize, to: usize, bound: usize) -> SliceGraph {
    let (objects, omitted_shapes) = slice_objects(x, from, to, bound, SliceFilter::All);
    let mut edges = Vec::new();
    for_each_morphism(x, &objects, |i, j, f| edges.push((i, j, f.clone())));
    edges.sort_by(|a, b| (a.0, a.1, a.2.vertex_map()).cmp(&(b.0, b.1, b.2.vertex_map())));
    SliceGraph { bound, omitted_shapes, objects, edges }
}

/// `π₀` of [`slice_category`] without storing its morphisms.
pub fn slice_category_pi0(x: &TruncatedSSet, from: usize, to: usize, bound: usize) -> usize {
    let (objects, _) = slice_objects(x, from, to, bound, SliceFilter::All);
    let mut uf = UnionFind::new(objects.len());
    for_each_morphism(x, &objects, |i, j, _| {
        uf.union(i, j);
    });
    uf.set_count()
}

/// Every morphism `objects[i] -> objects[j]` over `X`, found by restricting
/// each target along every necklace map into its shape.
fn for_each_morphism(x: &TruncatedSSet, objects: &[SliceObject], mut f: impl FnMut(usize, usize, &NecklaceMap)) {
    let index: HashMap<&SliceObject, usize> = objects.iter().enumerate().map(|(i, o)| (o, i)).collect();
    let mut shapes: Vec<&Necklace> = objects.iter().map(|o| &o.necklace).collect();
    shapes.sort();
    shapes.dedup();
    let mut homs: HashMap<(&Necklace, &Necklace), Vec<NecklaceMap>> = HashMap::new();
    for (j, target) in objects.iter().enumerate() {
        for &src in &shapes {
            let maps = homs.entry((src, &target.necklace)).or_insert_with(|| hom_set(src, &target.necklace));
            for m in maps.iter() {
                if let Some(r) = target.restrict(x, m) {
                    if let Some(&i) = index.get(&r) {
                        f(i, j, m);
                    }
                }
            }
        }
    }
}

/// Connected components of a finite graph, each sorted, ordered by least member.
pub fn pi0(nodes: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(nodes);
    for (a, b) in edges {
        uf.union(a, b);
    }
    let labels = uf.labels();
    let mut out = vec![Vec::new(); uf.set_count()];
    for (i, l) in labels.into_iter().enumerate() {
        out[l].push(i);
    }
    out
}

/// `π₀` of a truncated slice, with the very thin object classes.
#[derive(Clone, Debug)]
pub struct SliceComponents {
    pub bound: usize,
    pub filter: SliceFilter,
    pub omitted_shapes: usize,
    pub objects: u64,
    pub components: usize,
    words: Vec<Vec<u32>>,
    labels: Vec<usize>,
}

impl SliceComponents {
    /// Component of a very thin object given by its edges.
    pub fn component_of(&self, edges: &[usize]) -> Option<usize> {
        let key: Vec<u32> = edges.iter().map(|&e| e as u32).collect();
        self.words.iter().position(|w| *w == key).map(|i| self.labels[i])
    }

    /// Edge words, one per component: the first seen of each.
    pub fn representatives(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Option<Vec<usize>>> = vec![None; self.components];
        for (w, &l) in self.words.iter().zip(&self.labels) {
            if out[l].is_none() {
                out[l] = Some(w.iter().map(|&e| e as usize).collect());
            }
        }
        out.into_iter().flatten().collect()
    }
}

/// A step of a restriction path: stay at a vertex, or move inside a bead
/// between local vertices.
#[derive(Clone, Copy, Debug)]
enum Step {
    Stay(usize),
    Move(usize, usize, usize),
}

/// Very thin restrictions of a shape with at most `bound` steps, excluding
/// the spine itself.
fn restriction_paths(shape: &Necklace, bound: usize) -> Vec<Vec<Step>> {
    let t = shape.total();
    let joints = shape.joints();
    let bead_of = |v: usize, w: usize| shape.bead_containing(v, w);
    let mut out = Vec::new();
    fn go(
        v: usize,
        t: usize,
        left: usize,
        joints: &[usize],
        bead_of: &dyn Fn(usize, usize) -> Option<usize>,
        cur: &mut Vec<Step>,
        out: &mut Vec<Vec<Step>>,
    ) {
        if v == t {
            out.push(cur.clone());
        }
        if left == 0 {
            return;
        }
        cur.push(Step::Stay(v));
        go(v, t, left - 1, joints, bead_of, cur, out);
        cur.pop();
        for w in v + 1..=t {
            let Some(b) = bead_of(v, w) else { break };
            cur.push(Step::Move(b, v - joints[b], w - joints[b]));
            go(w, t, left - 1, joints, bead_of, cur, out);
            cur.pop();
        }
    }
    go(0, t, bound, &joints, &bead_of, &mut Vec::new(), &mut out);
    let spine_like = |p: &Vec<Step>| {
        p.len() == t && p.iter().all(|s| matches!(s, Step::Move(_, a, b) if b - a == 1))
    };
    out.retain(|p| !spine_like(p));
    out
}

/// Streaming `π₀` of the slice truncated at `T <= bound`.
pub fn slice_components(x: &TruncatedSSet, from: usize, to: usize, bound: usize, filter: SliceFilter) -> SliceComponents {
    let starts = Starts::new(x);
    let (kept, omitted) = shapes(bound, x.trunc_level(), filter);
    let mut interned: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut words: Vec<Vec<u32>> = Vec::new();
    let mut uf = UnionFind::new(0);
    let mut intern = |w: Vec<u32>, uf: &mut UnionFind, words: &mut Vec<Vec<u32>>| -> usize {
        *interned.entry(w).or_insert_with_key(|k| {
            words.push(k.clone());
            uf.push()
        })
    };
    let mut objects = 0u64;
    let degen_at: Vec<u32> = (0..x.len(0)).map(|v| x.degen(0, 0, v) as u32).collect();
    for shape in kept {
        if shape.is_point() {
            if from == to {
                objects += 1;
                let spine = intern(Vec::new(), &mut uf, &mut words);
                for r in 1..=bound {
                    let w = intern(vec![degen_at[from]; r], &mut uf, &mut words);
                    uf.union(spine, w);
                }
            }
            continue;
        }
        let paths = restriction_paths(&shape, bound);
        let beads = shape.beads().to_vec();
        let joints = shape.joints();
        for_each_anchor(&starts, &beads, from, to, &mut |simplices| {
            objects += 1;
            let edge = |b: usize, i: usize, j: usize| x.edge(beads[b], simplices[b], i, j) as u32;
            let vertex_at = |v: usize| {
                let b = joints.iter().rposition(|&j| j <= v).unwrap().min(beads.len() - 1);
                x.vertex(beads[b], simplices[b], v - joints[b])
            };
            let spine_word: Vec<u32> = (0..beads.len())
                .flat_map(|b| (0..beads[b]).map(move |i| (b, i)))
                .map(|(b, i)| edge(b, i, i + 1))
                .collect();
            let spine = intern(spine_word, &mut uf, &mut words);
            for p in &paths {
                let w: Vec<u32> = p
                    .iter()
                    .map(|s| match *s {
                        Step::Stay(v) => degen_at[vertex_at(v)],
                        Step::Move(b, i, j) => edge(b, i, j),
                    })
                    .collect();
                let id = intern(w, &mut uf, &mut words);
                uf.union(spine, id);
            }
        });
    }
    let labels = uf.labels();
    SliceComponents { bound, filter, omitted_shapes: omitted, objects, components: uf.set_count(), words, labels }
}

/// Connectivity of the necklaces over `realize(A) × realize(B)` from the
/// pair of minima to the pair of maxima.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SiftedReport {
    pub a: Necklace,
    pub b: Necklace,
    pub bound: usize,
    pub filter: SliceFilter,
    pub components: usize,
    pub objects: u64,
}

impl SiftedReport {
    pub fn connected(&self) -> bool {
        self.components == 1
    }

    pub fn verdict(&self) -> String {
        if self.connected() {
            format!("connected at bound {}", self.bound)
        } else {
            format!("inconclusive: {} components at bound {}", self.components, self.bound)
        }
    }
}

/// Thin necklaces suffice for a positive witness, since every link they
/// provide is a morphism of the full slice.
pub fn sifted_witness(a: &Necklace, b: &Necklace, bound: usize) -> Result<SiftedReport, NecklaceError> {
    sifted_witness_with(a, b, bound, SliceFilter::Thin)
}

pub fn sifted_witness_with(a: &Necklace, b: &Necklace, bound: usize, filter: SliceFilter) -> Result<SiftedReport, NecklaceError> {
    let ra = realize(a, 3)?;
    let rb = realize(b, 3)?;
    let p = product(&ra.sset, &rb.sset)?;
    let nb = rb.sset.len(0);
    let (from, to) = (ra.min * nb + rb.min, ra.max * nb + rb.max);
    debug_assert_eq!(p.name(0, from), format!("({},{})", sequence_name(&[0]), sequence_name(&[0])));
    let c = slice_components(&p, from, to, bound, filter);
    Ok(SiftedReport { a: a.clone(), b: b.clone(), bound, filter, components: c.components, objects: c.objects })
}
