//! Right fibrations of truncated simplicial sets and the discrete
//! Grothendieck construction over nerves.
//!
//! Orientation: `d0` of an edge is its target, so a right fibration lifts
//! a simplex uniquely once its *last* vertex is fixed. Presheaves act
//! contravariantly, an arrow `a: c' -> c` giving `F(c) -> F(c')`, and the
//! element attached to a simplex of the unstraightening lives over its last
//! vertex.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::category::{Arrow, CategoryError, ExplicitFinCategory, Functor};
use crate::sset::{composable_chains, escape_name, is_bijection, nerve_of_category, SSetMap, SsetError, TruncatedSSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FibrationError {
    #[error(transparent)]
    Sset(#[from] SsetError),
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error("invalid presheaf: {0}")]
    Presheaf(String),
    #[error("not a right fibration (n={0})")]
    NotAFibration(usize),
    #[error("target is not the nerve of a category: {0}")]
    NotANerve(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// Set-valued presheaf on a finite category.
///
/// `action[a][x]` is the image of `x ∈ F(target a)` in `F(source a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presheaf {
    base: ExplicitFinCategory,
    values: Vec<Vec<String>>,
    action: Vec<Vec<usize>>,
}

impl Presheaf {
    pub fn new(
        base: ExplicitFinCategory,
        values: Vec<Vec<String>>,
        action: Vec<Vec<usize>>,
    ) -> Result<Self, FibrationError> {
        let p = Presheaf { base, values, action };
        p.validate()?;
        Ok(p)
    }

    /// Presheaf with one element everywhere.
    pub fn terminal(base: ExplicitFinCategory) -> Self {
        let values = vec![vec!["*".to_string()]; base.object_count()];
        let action = vec![vec![0]; base.arrow_count()];
        Presheaf { base, values, action }
    }

    /// Exhaustive check of shapes, identities and composites.
    pub fn validate(&self) -> Result<(), FibrationError> {
        let c = &self.base;
        let bad = |m: String| Err(FibrationError::Presheaf(m));
        if self.values.len() != c.object_count() {
            return bad(format!("{} value sets for {} objects", self.values.len(), c.object_count()));
        }
        for (o, vals) in self.values.iter().enumerate() {
            let mut seen = std::collections::HashSet::new();
            if let Some(dup) = vals.iter().find(|v| !seen.insert(v.as_str())) {
                return bad(format!("duplicate element `{dup}` at `{}`", c.object_name(o)));
            }
        }
        if self.action.len() != c.arrow_count() {
            return bad(format!("{} action tables for {} arrows", self.action.len(), c.arrow_count()));
        }
        for (a, table) in self.action.iter().enumerate() {
            let (s, t) = (c.source(a), c.target(a));
            if table.len() != self.values[t].len() || table.iter().any(|&x| x >= self.values[s].len()) {
                return bad(format!("action table of `{}` has the wrong shape", c.arrow_name(a)));
            }
        }
        for o in 0..c.object_count() {
            let id = &self.action[c.identity(o)];
            if id.iter().enumerate().any(|(i, &x)| i != x) {
                return bad(format!("identity of `{}` acts nontrivially", c.object_name(o)));
            }
        }
        for (f, g, h) in c.triples() {
            // F(g∘f) = F(f)∘F(g)
            if (0..self.values[c.target(g)].len()).any(|x| self.action[h][x] != self.action[f][self.action[g][x]]) {
                return bad(format!("composite of `{}` then `{}` is not preserved", c.arrow_name(f), c.arrow_name(g)));
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &ExplicitFinCategory {
        &self.base
    }

    pub fn values(&self, o: usize) -> &[String] {
        &self.values[o]
    }

    pub fn all_values(&self) -> &[Vec<String>] {
        &self.values
    }

    pub fn action(&self, a: usize) -> &[usize] {
        &self.action[a]
    }

    pub fn act(&self, a: usize, x: usize) -> usize {
        self.action[a][x]
    }
}

/// Natural transformation between presheaves on the same category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NaturalTransformation {
    pub components: Vec<Vec<usize>>,
}

impl NaturalTransformation {
    pub fn check(&self, f: &Presheaf, g: &Presheaf) -> Result<(), FibrationError> {
        let c = &f.base;
        if c != &g.base {
            return Err(FibrationError::Precondition("presheaves over different categories".into()));
        }
        let bad = |m: String| Err(FibrationError::Presheaf(m));
        if self.components.len() != c.object_count() {
            return bad("one component per object required".into());
        }
        for (o, comp) in self.components.iter().enumerate() {
            if comp.len() != f.values[o].len() || comp.iter().any(|&y| y >= g.values[o].len()) {
                return bad(format!("component at `{}` has the wrong shape", c.object_name(o)));
            }
        }
        for a in 0..c.arrow_count() {
            let (s, t) = (c.source(a), c.target(a));
            for x in 0..f.values[t].len() {
                if g.act(a, self.components[t][x]) != self.components[s][f.act(a, x)] {
                    return bad(format!("naturality fails at `{}`", c.arrow_name(a)));
                }
            }
        }
        Ok(())
    }

    pub fn is_isomorphism(&self, f: &Presheaf, g: &Presheaf) -> bool {
        self.check(f, g).is_ok()
            && self.components.iter().enumerate().all(|(o, comp)| is_bijection(comp, g.values[o].len()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FailureKind {
    /// Several cells share their `d0` face and their image.
    NotInjective { cells: Vec<String> },
    /// A compatible pair (face, base simplex) has no lift.
    NotSurjective { face: String, base: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibrationFailure {
    pub level: usize,
    pub kind: FailureKind,
}

impl fmt::Display for FibrationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            FailureKind::NotInjective { cells } => {
                write!(f, "n={}: cells {} have the same d0 face and image", self.level, cells.join(", "))
            }
            FailureKind::NotSurjective { face, base } => {
                write!(f, "n={}: no lift of `{base}` with d0 face `{face}`", self.level)
            }
        }
    }
}

/// Sizes of the two sides of `(d0, p): X_n -> X_{n-1} ×_{Y_{n-1}} Y_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LevelCount {
    pub level: usize,
    pub cells: usize,
    pub pullback: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibrationReport {
    pub is_right_fibration: bool,
    pub failures: Vec<FibrationFailure>,
    pub levels_checked: usize,
    pub counts: Vec<LevelCount>,
}

impl FibrationReport {
    pub fn first_failing_level(&self) -> Option<usize> {
        self.failures.iter().map(|f| f.level).min()
    }
}

impl fmt::Display for FibrationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.first_failing_level() {
            None => write!(f, "right fibration (verified up to level {})", self.levels_checked)?,
            Some(n) => write!(f, "NOT a right fibration (n={n})")?,
        }
        for c in &self.counts {
            write!(f, "\n  n={}: {} cells, {} compatible pairs", c.level, c.cells, c.pullback)?;
        }
        for fail in &self.failures {
            write!(f, "\n  {fail}")?;
        }
        Ok(())
    }
}

/// Checks that `(d0, p_n)` is a bijection onto the pullback for every
/// `1 <= n <= L` by comparing the tables exhaustively.
pub fn is_right_fibration(p: &SSetMap) -> FibrationReport {
    let (x, y) = (&**p.source(), &**p.target());
    let top = x.trunc_level();
    let mut failures = Vec::new();
    let mut counts = Vec::new();
    for n in 1..=top {
        let mut lifts: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for c in 0..x.len(n) {
            lifts.entry((x.face(n, 0, c), p.apply(n, c))).or_default().push(c);
        }
        let mut over: Vec<Vec<usize>> = vec![Vec::new(); y.len(n - 1)];
        for c in 0..x.len(n - 1) {
            over[p.apply(n - 1, c)].push(c);
        }
        let mut pullback = 0;
        for b in 0..y.len(n) {
            for &face in &over[y.face(n, 0, b)] {
                pullback += 1;
                match lifts.get(&(face, b)) {
                    None => failures.push(FibrationFailure {
                        level: n,
                        kind: FailureKind::NotSurjective {
                            face: x.name(n - 1, face).to_string(),
                            base: y.name(n, b).to_string(),
                        },
                    }),
                    Some(cells) if cells.len() > 1 => failures.push(FibrationFailure {
                        level: n,
                        kind: FailureKind::NotInjective {
                            cells: cells.iter().map(|&c| x.name(n, c).to_string()).collect(),
                        },
                    }),
                    Some(_) => {}
                }
            }
        }
        counts.push(LevelCount { level: n, cells: x.len(n), pullback });
    }
    FibrationReport { is_right_fibration: failures.is_empty(), failures, levels_checked: top, counts }
}

/// Outcome of comparing `f_0` with `f` for a map of right fibrations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct F0Report {
    pub level0_bijective: bool,
    pub levelwise_bijective: bool,
    /// Each `f_n` agrees with the base change of `f_0` along the iterated
    /// `d0` identification `X_n ≅ X_0 ×_{Y_0} Y_n`.
    pub reconstruction_agrees: bool,
    pub levels_checked: usize,
}

impl F0Report {
    pub fn consistent(&self) -> bool {
        self.reconstruction_agrees && self.level0_bijective == self.levelwise_bijective
    }
}

impl fmt::Display for F0Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "f0 bijective: {}; f bijective up to level {}: {}; reconstruction from f0: {}; {}",
            self.level0_bijective,
            self.levels_checked,
            self.levelwise_bijective,
            if self.reconstruction_agrees { "agrees" } else { "differs" },
            if self.consistent() { "consistent" } else { "INCONSISTENT" }
        )
    }
}

/// Cells of a right fibration addressed by (last vertex, image).
fn last_vertex_index(p: &SSetMap, n: usize) -> HashMap<(usize, usize), usize> {
    let x = &**p.source();
    (0..x.len(n)).map(|c| ((x.vertex(n, c, n), p.apply(n, c)), c)).collect()
}

/// Compares `f_0` with `f` for `f: X -> Z` over `Y`, where `p: X -> Y` and
/// `q: Z -> Y` are right fibrations.
pub fn f0_criterion(p: &SSetMap, q: &SSetMap, f: &SSetMap) -> Result<F0Report, FibrationError> {
    let pre = |m: &str| Err(FibrationError::Precondition(m.into()));
    if p.target() != q.target() {
        return pre("p and q have different targets");
    }
    if f.source() != p.source() || f.target() != q.source() {
        return pre("f does not go from the source of p to the source of q");
    }
    if !f.check().ok {
        return pre("f is not a simplicial map");
    }
    if f.then(q)?.levels() != p.levels() {
        return pre("f does not commute with the projections");
    }
    for (name, m) in [("p", p), ("q", q)] {
        let r = is_right_fibration(m);
        if !r.is_right_fibration {
            return Err(FibrationError::Precondition(format!("{name} is {r}")));
        }
    }
    let x = &**p.source();
    let top = x.trunc_level();
    let mut agrees = true;
    for n in 1..=top {
        let lift = last_vertex_index(q, n);
        for c in 0..x.len(n) {
            let v = x.vertex(n, c, n);
            if lift.get(&(f.apply(0, v), p.apply(n, c))) != Some(&f.apply(n, c)) {
                agrees = false;
            }
        }
    }
    Ok(F0Report {
        level0_bijective: is_bijection(&f.levels()[0], q.source().len(0)),
        levelwise_bijective: f.is_levelwise_bijective(),
        reconstruction_agrees: agrees,
        levels_checked: top,
    })
}

/// Nerve of a functor as a map of nerves.
pub fn nerve_of_functor(
    src: &ExplicitFinCategory,
    tgt: &ExplicitFinCategory,
    functor: &Functor,
    trunc_level: usize,
) -> Result<SSetMap, FibrationError> {
    functor.check(src, tgt)?;
    let x = Arc::new(nerve_of_category(src, trunc_level)?);
    let y = Arc::new(nerve_of_category(tgt, trunc_level)?);
    let mut levels = vec![functor.object_map.clone()];
    for n in 1..=trunc_level {
        let index: HashMap<Vec<usize>, usize> =
            composable_chains(tgt, n).into_iter().enumerate().map(|(i, ch)| (ch, i)).collect();
        levels.push(
            composable_chains(src, n)
                .iter()
                .map(|ch| index[&ch.iter().map(|&a| functor.arrow_map[a]).collect::<Vec<_>>()])
                .collect(),
        );
    }
    Ok(SSetMap::new(x, y, levels)?)
}

/// Total space of the discrete Grothendieck construction with its
/// projection to the nerve.
#[derive(Clone, Debug)]
pub struct Unstraightening {
    pub projection: SSetMap,
    /// `vertices[c][x]` is the vertex of the total space over `c` labelled
    /// by `x ∈ F(c)`.
    pub vertices: Vec<Vec<usize>>,
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Chain {
    Object(usize),
    Arrows(Vec<usize>),
}

/// Discrete Grothendieck construction: `n`-cells are pairs of a chain
/// `c_0 -> ... -> c_n` and an element of `F(c_n)`. The face `d_n` drops
/// the last arrow and transports the element along it; the other faces and
/// all degeneracies keep it.
pub fn unstraighten(f: &Presheaf, trunc_level: usize) -> Result<Unstraightening, FibrationError> {
    f.validate()?;
    let c = &f.base;
    let last = |ch: &Chain| match ch {
        Chain::Object(o) => *o,
        Chain::Arrows(a) => c.target(*a.last().unwrap()),
    };
    let mut cells: Vec<Vec<(Chain, usize)>> = Vec::with_capacity(trunc_level + 1);
    cells.push((0..c.object_count()).flat_map(|o| (0..f.values[o].len()).map(move |x| (Chain::Object(o), x))).collect());
    for n in 1..=trunc_level {
        let mut level = Vec::new();
        for ch in composable_chains(c, n) {
            let end = c.target(*ch.last().unwrap());
            for x in 0..f.values[end].len() {
                level.push((Chain::Arrows(ch.clone()), x));
            }
        }
        cells.push(level);
    }
    let vertex_key: Vec<Vec<usize>> = {
        let mut next = 0;
        (0..c.object_count())
            .map(|o| {
                (0..f.values[o].len())
                    .map(|_| {
                        next += 1;
                        next - 1
                    })
                    .collect()
            })
            .collect()
    };
    let total = TruncatedSSet::from_keyed(
        trunc_level,
        cells.clone(),
        |_, (ch, x)| {
            let base = match ch {
                Chain::Object(o) => escape_name(c.object_name(*o)),
                Chain::Arrows(a) => a.iter().map(|&g| escape_name(c.arrow_name(g))).collect::<Vec<_>>().join(";"),
            };
            format!("{base}|{}", escape_name(&f.values[last(ch)][*x]))
        },
        |n, i, (ch, x)| {
            let Chain::Arrows(a) = ch else { unreachable!() };
            if n == 1 {
                return if i == 0 {
                    (Chain::Object(c.target(a[0])), *x)
                } else {
                    (Chain::Object(c.source(a[0])), f.act(a[0], *x))
                };
            }
            let mut out = a.clone();
            let mut y = *x;
            if i == 0 {
                out.remove(0);
            } else if i == n {
                y = f.act(out.pop().unwrap(), *x);
            } else {
                let composite = c.compose(a[i - 1], a[i]).expect("chain is composable");
                out.splice(i - 1..=i, [composite]);
            }
            (Chain::Arrows(out), y)
        },
        |_, i, (ch, x)| match ch {
            Chain::Object(o) => (Chain::Arrows(vec![c.identity(*o)]), *x),
            Chain::Arrows(a) => {
                let obj = if i == 0 { c.source(a[0]) } else { c.target(a[i - 1]) };
                let mut out = a.clone();
                out.insert(i, c.identity(obj));
                (Chain::Arrows(out), *x)
            }
        },
    )?;
    let nerve = Arc::new(nerve_of_category(c, trunc_level)?);
    let mut levels = vec![cells[0].iter().map(|(ch, _)| last(ch)).collect::<Vec<_>>()];
    for (n, level) in cells.iter().enumerate().skip(1) {
        let index: HashMap<Vec<usize>, usize> =
            composable_chains(c, n).into_iter().enumerate().map(|(i, ch)| (ch, i)).collect();
        levels.push(
            level
                .iter()
                .map(|(ch, _)| match ch {
                    Chain::Arrows(a) => index[a],
                    Chain::Object(_) => unreachable!(),
                })
                .collect(),
        );
    }
    let projection = SSetMap::new(Arc::new(total), nerve, levels)?;
    Ok(Unstraightening { projection, vertices: vertex_key })
}

/// Same as [`unstraighten`], returning only the projection.
pub fn unstraighten_map(f: &Presheaf, trunc_level: usize) -> Result<SSetMap, FibrationError> {
    Ok(unstraighten(f, trunc_level)?.projection)
}

/// Map of unstraightenings over `N(C)` induced by `η: F -> G`, sending
/// `(chain, x)` to `(chain, η(x))`.
pub fn unstraighten_transformation(
    f: &Presheaf,
    g: &Presheaf,
    eta: &NaturalTransformation,
    trunc_level: usize,
) -> Result<(SSetMap, SSetMap, SSetMap), FibrationError> {
    eta.check(f, g)?;
    let (uf, ug) = (unstraighten_map(f, trunc_level)?, unstraighten_map(g, trunc_level)?);
    let c = &f.base;
    // Cells of an unstraightening are listed chain by chain, each followed
    // by the elements over its last object.
    let mut levels = Vec::with_capacity(trunc_level + 1);
    for n in 0..=trunc_level {
        let ends: Vec<usize> = if n == 0 {
            (0..c.object_count()).collect()
        } else {
            composable_chains(c, n).iter().map(|ch| c.target(*ch.last().unwrap())).collect()
        };
        let mut level = Vec::new();
        let mut offset = 0;
        for &o in &ends {
            level.extend(eta.components[o].iter().map(|&y| offset + y));
            offset += g.values[o].len();
        }
        levels.push(level);
    }
    let ug = SSetMap::new(ug.source().clone(), uf.target().clone(), ug.levels().to_vec())?;
    let map = SSetMap::new(uf.source().clone(), ug.source().clone(), levels)?;
    Ok((uf, ug, map))
}

/// A category `C` recognized from a simplicial set `Y` together with the
/// isomorphism `Y -> N(C)`. Objects and arrows of `C` are the vertices and
/// edges of `Y` in their stored order.
#[derive(Clone, Debug)]
pub struct RecognizedNerve {
    pub category: ExplicitFinCategory,
    pub iso: SSetMap,
}

/// Recovers `C` from `Y ≅ N(C)`: identities are degenerate edges, the
/// composite of `f` then `g` is `d1` of the unique 2-cell with `d2 = f` and
/// `d0 = g`, and every higher cell must be determined by its spine.
pub fn recognize_nerve(y: &Arc<TruncatedSSet>) -> Result<RecognizedNerve, FibrationError> {
    let top = y.trunc_level();
    let objects: Vec<String> = y.names(0).to_vec();
    let arrows: Vec<Arrow> = (0..y.len(1))
        .map(|e| Arrow { name: y.name(1, e).to_string(), source: y.edge_source(e), target: y.edge_target(e) })
        .collect();
    let identities: Vec<usize> = (0..y.len(0)).map(|v| y.degen(0, 0, v)).collect();
    let mut fillers: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for t in 0..y.len(2) {
        fillers.entry((y.face(2, 2, t), y.face(2, 0, t))).or_default().push(y.face(2, 1, t));
    }
    for (&(f, g), hs) in &fillers {
        if hs.len() > 1 {
            return Err(FibrationError::NotANerve(format!(
                "{} 2-cells over `{}` then `{}`",
                hs.len(),
                y.name(1, f),
                y.name(1, g)
            )));
        }
    }
    let category = ExplicitFinCategory::new(objects, arrows, identities, |f, g| {
        fillers.get(&(f, g)).map(|hs| hs[0])
    })
    .map_err(|e| FibrationError::NotANerve(e.to_string()))?;
    let nerve = Arc::new(nerve_of_category(&category, top)?);
    let mut levels = vec![(0..y.len(0)).collect::<Vec<_>>(), (0..y.len(1)).collect()];
    for n in 2..=top {
        let index: HashMap<Vec<usize>, usize> =
            composable_chains(&category, n).into_iter().enumerate().map(|(i, ch)| (ch, i)).collect();
        levels.push((0..y.len(n)).map(|c| index[&(0..n).map(|i| y.edge(n, c, i, i + 1)).collect::<Vec<_>>()]).collect());
    }
    let iso = SSetMap::new(y.clone(), nerve, levels)?;
    if !iso.is_isomorphism() {
        return Err(FibrationError::NotANerve("higher cells are not determined by their spines".into()));
    }
    Ok(RecognizedNerve { category, iso })
}

/// Presheaf classified by a right fibration over a nerve.
#[derive(Clone, Debug)]
pub struct Straightening {
    pub presheaf: Presheaf,
    /// `fibers[c][x]` is the vertex of the total space named by `x ∈ F(c)`.
    pub fibers: Vec<Vec<usize>>,
    pub base: RecognizedNerve,
}

/// `F(c)` is the fiber of `X_0` over `c`; an arrow `a: c' -> c` sends
/// `x ∈ F(c)` to the source of the unique edge over `a` ending at `x`.
/// Functoriality is then re-checked on the result.
pub fn straighten(p: &SSetMap) -> Result<Straightening, FibrationError> {
    let report = is_right_fibration(p);
    if let Some(n) = report.first_failing_level() {
        return Err(FibrationError::NotAFibration(n));
    }
    let base = recognize_nerve(p.target())?;
    let x = &**p.source();
    let cat = &base.category;
    let mut fibers = vec![Vec::new(); cat.object_count()];
    let mut position = vec![0; x.len(0)];
    for v in 0..x.len(0) {
        let o = p.apply(0, v);
        position[v] = fibers[o].len();
        fibers[o].push(v);
    }
    let lift = last_vertex_index(p, 1);
    let action: Vec<Vec<usize>> = (0..cat.arrow_count())
        .map(|a| fibers[cat.target(a)].iter().map(|&v| position[x.edge_source(lift[&(v, a)])]).collect())
        .collect();
    let values = fibers.iter().map(|fib| fib.iter().map(|&v| x.name(0, v).to_string()).collect()).collect();
    let presheaf = Presheaf::new(cat.clone(), values, action)?;
    Ok(Straightening { presheaf, fibers, base })
}

/// Explicit natural isomorphism `F ≅ straighten(unstraighten(F))`.
pub fn presheaf_round_trip(f: &Presheaf, trunc_level: usize) -> Result<NaturalTransformation, FibrationError> {
    let un = unstraighten(f, trunc_level)?;
    let st = straighten(&un.projection)?;
    if st.presheaf.base != f.base {
        return Err(FibrationError::Precondition("recognized category differs from the base".into()));
    }
    let mut position = HashMap::new();
    for fib in &st.fibers {
        for (i, &v) in fib.iter().enumerate() {
            position.insert(v, i);
        }
    }
    let eta = NaturalTransformation {
        components: un.vertices.iter().map(|vs| vs.iter().map(|v| position[v]).collect()).collect(),
    };
    if !eta.is_isomorphism(f, &st.presheaf) {
        return Err(FibrationError::Presheaf("round trip is not a natural isomorphism".into()));
    }
    Ok(eta)
}

/// Explicit isomorphism `X ≅ unstraighten(straighten(p))` over the base:
/// a cell goes to its image chain paired with its last vertex.
#[derive(Clone, Debug)]
pub struct FibrationRoundTrip {
    pub iso: SSetMap,
    pub unstraightened: SSetMap,
}

pub fn fibration_round_trip(p: &SSetMap) -> Result<FibrationRoundTrip, FibrationError> {
    let st = straighten(p)?;
    let top = p.source().trunc_level();
    let un = unstraighten(&st.presheaf, top)?;
    let total = un.projection.source().clone();
    let x = p.source().clone();
    let mut by_key: Vec<HashMap<(usize, usize), usize>> = Vec::with_capacity(top + 1);
    for n in 0..=top {
        by_key.push(
            (0..total.len(n))
                .map(|c| ((un.projection.apply(n, c), total.vertex(n, c, n)), c))
                .collect(),
        );
    }
    let mut position = vec![(0, 0); x.len(0)];
    for (o, fib) in st.fibers.iter().enumerate() {
        for (i, &v) in fib.iter().enumerate() {
            position[v] = (o, i);
        }
    }
    let iso = SSetMap::from_fn(x.clone(), total, |n, c| {
        let (o, i) = position[x.vertex(n, c, n)];
        by_key[n][&(st.base.iso.apply(n, p.apply(n, c)), un.vertices[o][i])]
    })?;
    if !iso.is_isomorphism() {
        return Err(FibrationError::Precondition("round trip is not an isomorphism".into()));
    }
    if iso.then(&un.projection)?.levels() != p.then(&st.base.iso)?.levels() {
        return Err(FibrationError::Precondition("round trip does not commute with the projections".into()));
    }
    Ok(FibrationRoundTrip { iso, unstraightened: un.projection })
}
