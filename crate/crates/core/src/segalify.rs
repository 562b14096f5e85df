//! The homotopy category `h₁` of a finite simplicial set, computed two ways.
//!
//! Morphisms `x -> y` are composable edge words modulo the equivalence
//! generated by replacing two consecutive edges by the long edge of a
//! 2-simplex with that spine, and by deleting degenerate edges.
//!
//! * [`h1_necklace`] saturates a bounded set of words with a union-find.
//! * [`h1_rewrite`] completes the same relations to a rewriting system.
//!
//! Edge source is `d₁`, target is `d₀`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::category::{CategoryError, ExplicitFinCategory, Functor};
use crate::rewrite::{Budget, Generator, Letter, Materialized, PathWord, PresentationError, PresentedCategory};
use crate::sset::{nerve_of_category, product, SsetError, TruncatedSSet};
use crate::union_find::UnionFind;

/// Word bound used when the edge graph has a cycle.
pub const CYCLIC_MAX_WORD: usize = 8;

/// Refuse to saturate word spaces larger than this.
pub const MAX_WORDS: usize = 4_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SegalifyError {
    #[error("truncation level {0} is below 2")]
    TruncationTooLow(usize),
    #[error("edges do not compose: {0}")]
    NotComposable(String),
    #[error("words are not parallel")]
    NotParallel,
    #[error("unknown vertex or edge {0}")]
    Unknown(String),
    #[error("h1 is not materializable: {0}")]
    NotMaterializable(String),
    #[error("word space too large ({0} words); lower the bound")]
    TooManyWords(usize),
    #[error(transparent)]
    Sset(#[from] SsetError),
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

/// A composable word of edges. The start vertex is kept for the empty word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeWord {
    pub start: usize,
    pub edges: Vec<usize>,
}

impl EdgeWord {
    pub fn empty(vertex: usize) -> Self {
        EdgeWord { start: vertex, edges: Vec::new() }
    }

    pub fn new(x: &TruncatedSSet, start: usize, edges: Vec<usize>) -> Result<Self, SegalifyError> {
        if start >= x.len(0) {
            return Err(SegalifyError::Unknown(format!("vertex {start}")));
        }
        let mut at = start;
        for &e in &edges {
            if e >= x.len(1) {
                return Err(SegalifyError::Unknown(format!("edge {e}")));
            }
            if x.edge_source(e) != at {
                return Err(SegalifyError::NotComposable(format!(
                    "`{}` does not start at `{}`",
                    x.name(1, e),
                    x.name(0, at)
                )));
            }
            at = x.edge_target(e);
        }
        Ok(EdgeWord { start, edges })
    }

    /// A nonempty word; the start is read off the first edge.
    pub fn from_edges(x: &TruncatedSSet, edges: Vec<usize>) -> Result<Self, SegalifyError> {
        let first = *edges.first().ok_or_else(|| SegalifyError::NotComposable("empty edge list".into()))?;
        if first >= x.len(1) {
            return Err(SegalifyError::Unknown(format!("edge {first}")));
        }
        Self::new(x, x.edge_source(first), edges)
    }

    /// Parses edge names separated by commas, or `@v` for the empty word at `v`.
    pub fn parse(x: &TruncatedSSet, s: &str) -> Result<Self, SegalifyError> {
        let s = s.trim();
        if let Some(v) = s.strip_prefix('@') {
            let start = x.cell(0, v).ok_or_else(|| SegalifyError::Unknown(v.to_string()))?;
            return Ok(Self::empty(start));
        }
        let edges = s
            .split(',')
            .map(|e| x.cell(1, e.trim()).ok_or_else(|| SegalifyError::Unknown(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_edges(x, edges)
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn end(&self, x: &TruncatedSSet) -> usize {
        self.edges.last().map_or(self.start, |&e| x.edge_target(e))
    }

    /// Drops degenerate edges.
    pub fn reduced(&self, x: &TruncatedSSet) -> EdgeWord {
        EdgeWord { start: self.start, edges: self.edges.iter().copied().filter(|&e| !x.is_degenerate(1, e)).collect() }
    }

    pub fn concat(&self, other: &EdgeWord) -> EdgeWord {
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        EdgeWord { start: self.start, edges }
    }

    pub fn display<'a>(&'a self, x: &'a TruncatedSSet) -> WordDisplay<'a> {
        WordDisplay { word: self, sset: x }
    }
}

pub struct WordDisplay<'a> {
    word: &'a EdgeWord,
    sset: &'a TruncatedSSet,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.edges.is_empty() {
            return write!(f, "@{}", self.sset.name(0, self.word.start));
        }
        let names: Vec<&str> = self.word.edges.iter().map(|&e| self.sset.name(1, e)).collect();
        write!(f, "{}", names.join(","))
    }
}

/// Which identifications drive the saturation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Saturation {
    /// One 2-simplex move or one degenerate deletion at a time.
    #[default]
    Thin,
    /// Every necklace through the word at once: any grouping of consecutive
    /// edges into spines of simplices of dimension up to the truncation,
    /// each group replaced by any sub-path of its simplex, together with
    /// deletions of degenerate single edges.
    Unrestricted,
}

/// Effective word bound: exact when the edge graph is acyclic.
///
/// The longest path `P` plus one: a 2-simplex with a degenerate face relates
/// a single edge `f` to `g` only through the length-two word `(f, s₀y)`.
pub fn default_max_word(x: &TruncatedSSet) -> (usize, bool) {
    match x.longest_nondegenerate_path() {
        Some(p) => (p + 1, true),
        None => (CYCLIC_MAX_WORD, false),
    }
}

/// Bounded word set with union-find classes.
#[derive(Clone, Debug)]
pub struct H1Necklace {
    sset: Arc<TruncatedSSet>,
    max_word: usize,
    exact: bool,
    saturation: Saturation,
    words: Vec<EdgeWord>,
    index: HashMap<EdgeWord, usize>,
    labels: Vec<usize>,
    class_count: usize,
    words_visited: u64,
}

pub fn h1_necklace(x: &TruncatedSSet, max_word: Option<usize>) -> Result<H1Necklace, SegalifyError> {
    h1_necklace_with(x, max_word, Saturation::Thin)
}

pub fn h1_necklace_with(
    x: &TruncatedSSet,
    max_word: Option<usize>,
    saturation: Saturation,
) -> Result<H1Necklace, SegalifyError> {
    if x.trunc_level() < 2 {
        return Err(SegalifyError::TruncationTooLow(x.trunc_level()));
    }
    let (default, acyclic) = default_max_word(x);
    let max_word = max_word.unwrap_or(default);
    let exact = acyclic && max_word >= default;
    let words = enumerate_words(x, max_word)?;
    let index: HashMap<EdgeWord, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let spines = SpineIndex::new(x, if saturation == Saturation::Thin { 2 } else { x.trunc_level() });
    let mut uf = UnionFind::new(words.len());
    let mut visited = 0u64;
    for (i, w) in words.iter().enumerate() {
        let mut visit = |v: EdgeWord| {
            visited += 1;
            uf.union(i, index[&v]);
        };
        match saturation {
            Saturation::Thin => thin_moves(x, &spines, w, &mut visit),
            Saturation::Unrestricted => necklace_moves(x, &spines, w, &mut visit),
        }
    }
    let labels = uf.labels();
    let class_count = uf.set_count();
    Ok(H1Necklace {
        sset: Arc::new(x.clone()),
        max_word,
        exact,
        saturation,
        words,
        index,
        labels,
        class_count,
        words_visited: visited,
    })
}

/// All composable words of length at most `bound`, ordered by length, then
/// start vertex, then edge indices.
fn enumerate_words(x: &TruncatedSSet, bound: usize) -> Result<Vec<EdgeWord>, SegalifyError> {
    let mut out_edges = vec![Vec::new(); x.len(0)];
    for e in 0..x.len(1) {
        out_edges[x.edge_source(e)].push(e);
    }
    let mut words: Vec<EdgeWord> = (0..x.len(0)).map(EdgeWord::empty).collect();
    let mut level_start = 0;
    for _ in 0..bound {
        let level_end = words.len();
        for i in level_start..level_end {
            let end = words[i].end(x);
            for &e in &out_edges[end] {
                let mut w = words[i].clone();
                w.edges.push(e);
                words.push(w);
            }
            if words.len() > MAX_WORDS {
                return Err(SegalifyError::TooManyWords(words.len()));
            }
        }
        level_start = level_end;
    }
    Ok(words)
}

/// Simplices of dimension `2..=max_dim` keyed by their spine.
struct SpineIndex {
    by_spine: HashMap<Vec<usize>, Vec<(usize, usize)>>,
}

impl SpineIndex {
    fn new(x: &TruncatedSSet, max_dim: usize) -> Self {
        let mut by_spine: HashMap<Vec<usize>, Vec<(usize, usize)>> = HashMap::new();
        for n in 2..=max_dim.min(x.trunc_level()) {
            for c in 0..x.len(n) {
                let spine: Vec<usize> = (0..n).map(|j| x.edge(n, c, j, j + 1)).collect();
                by_spine.entry(spine).or_default().push((n, c));
            }
        }
        SpineIndex { by_spine }
    }

    fn get(&self, spine: &[usize]) -> &[(usize, usize)] {
        self.by_spine.get(spine).map_or(&[], Vec::as_slice)
    }
}

fn thin_moves(x: &TruncatedSSet, spines: &SpineIndex, w: &EdgeWord, visit: &mut impl FnMut(EdgeWord)) {
    let e = &w.edges;
    for p in 0..e.len() {
        if x.is_degenerate(1, e[p]) {
            let mut v = w.clone();
            v.edges.remove(p);
            visit(v);
        }
        if p + 1 < e.len() {
            for &(_, s) in spines.get(&e[p..p + 2]) {
                let mut v = w.clone();
                v.edges.splice(p..p + 2, [x.face(2, 1, s)]);
                visit(v);
            }
        }
    }
}

/// Replacements for a group of consecutive edges: sub-paths of any simplex
/// with that spine, or deletion of a single degenerate edge. The group
/// itself is excluded.
fn group_alternatives(x: &TruncatedSSet, spines: &SpineIndex, group: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if group.len() == 1 {
        if x.is_degenerate(1, group[0]) {
            out.push(Vec::new());
        }
        return out;
    }
    let k = group.len();
    for &(n, c) in spines.get(group) {
        // Vertex subsets of [k] containing 0 and k, as bitmasks of the interior.
        for mask in 0u32..(1 << (k - 1)) {
            if mask == (1 << (k - 1)) - 1 {
                continue;
            }
            let mut path = vec![0];
            path.extend((1..k).filter(|&j| mask & (1 << (j - 1)) != 0));
            path.push(k);
            out.push(path.windows(2).map(|p| x.edge(n, c, p[0], p[1])).collect());
        }
    }
    out
}

fn necklace_moves(x: &TruncatedSSet, spines: &SpineIndex, w: &EdgeWord, visit: &mut impl FnMut(EdgeWord)) {
    let e = &w.edges;
    let max_bead = x.trunc_level();
    let mut cur: Vec<usize> = Vec::with_capacity(e.len());
    fn go(
        x: &TruncatedSSet,
        spines: &SpineIndex,
        w: &EdgeWord,
        p: usize,
        changed: bool,
        max_bead: usize,
        cur: &mut Vec<usize>,
        visit: &mut impl FnMut(EdgeWord),
    ) {
        let e = &w.edges;
        if p == e.len() {
            if changed {
                visit(EdgeWord { start: w.start, edges: cur.clone() });
            }
            return;
        }
        // Keep edge p as a bead of its own.
        cur.push(e[p]);
        go(x, spines, w, p + 1, changed, max_bead, cur, visit);
        cur.pop();
        for len in 1..=max_bead.min(e.len() - p) {
            for alt in group_alternatives(x, spines, &e[p..p + len]) {
                let keep = cur.len();
                cur.extend_from_slice(&alt);
                go(x, spines, w, p + len, true, max_bead, cur, visit);
                cur.truncate(keep);
            }
        }
    }
    go(x, spines, w, 0, false, max_bead, &mut cur, visit);
}

impl H1Necklace {
    pub fn sset(&self) -> &Arc<TruncatedSSet> {
        &self.sset
    }

    pub fn max_word(&self) -> usize {
        self.max_word
    }

    /// Whether the word bound is known to suffice.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn saturation(&self) -> Saturation {
        self.saturation
    }

    pub fn words(&self) -> &[EdgeWord] {
        &self.words
    }

    /// Class label of each word, numbered by first occurrence.
    pub fn partition(&self) -> &[usize] {
        &self.labels
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    /// Number of neighbouring words generated during saturation.
    pub fn words_visited(&self) -> u64 {
        self.words_visited
    }

    pub fn class_of(&self, w: &EdgeWord) -> Option<usize> {
        self.index.get(w).map(|&i| self.labels[i])
    }

    /// Distinct classes of words `x -> y`, in order of first occurrence.
    pub fn classes(&self, x: usize, y: usize) -> Vec<usize> {
        let mut seen = Vec::new();
        for (i, w) in self.words.iter().enumerate() {
            if w.start == x && w.end(&self.sset) == y && !seen.contains(&self.labels[i]) {
                seen.push(self.labels[i]);
            }
        }
        seen
    }

    /// The first word of a class, which is a shortest one.
    pub fn representative(&self, class: usize) -> &EdgeWord {
        let i = self.labels.iter().position(|&l| l == class).expect("class label in range");
        &self.words[i]
    }

    /// Decides equality of parallel words within the bound.
    pub fn decide(&self, a: &EdgeWord, b: &EdgeWord) -> Result<Decision, SegalifyError> {
        check_parallel(&self.sset, a, b)?;
        let (ra, rb) = (a.reduced(&self.sset), b.reduced(&self.sset));
        match (self.class_of(&ra), self.class_of(&rb)) {
            (Some(x), Some(y)) if x == y => Ok(Decision::Yes),
            (Some(_), Some(_)) if self.exact => Ok(Decision::No),
            _ => Ok(Decision::Unknown),
        }
    }

    pub fn materialize(&self) -> Result<H1Category, SegalifyError> {
        if !self.exact {
            return Err(SegalifyError::NotMaterializable(format!(
                "edge graph has a cycle; classes are only bounded by words of length {}",
                self.max_word
            )));
        }
        let x = &*self.sset;
        let mut class_arrow = vec![usize::MAX; self.class_count];
        let mut reps = Vec::new();
        for (i, w) in self.words.iter().enumerate() {
            if class_arrow[self.labels[i]] == usize::MAX {
                class_arrow[self.labels[i]] = reps.len();
                reps.push(w.clone());
            }
        }
        let by_word: HashMap<EdgeWord, usize> =
            self.words.iter().enumerate().map(|(i, w)| (w.clone(), class_arrow[self.labels[i]])).collect();
        let category = category_from_representatives(x, &reps, |w| by_word.get(&w.reduced(x)).copied())?;
        Ok(H1Category { sset: self.sset.clone(), category, representatives: reps, classifier: Classifier::Words(by_word) })
    }
}

fn check_parallel(x: &TruncatedSSet, a: &EdgeWord, b: &EdgeWord) -> Result<(), SegalifyError> {
    EdgeWord::new(x, a.start, a.edges.clone())?;
    EdgeWord::new(x, b.start, b.edges.clone())?;
    if a.start != b.start || a.end(x) != b.end(x) {
        return Err(SegalifyError::NotParallel);
    }
    Ok(())
}

fn category_from_representatives(
    x: &TruncatedSSet,
    reps: &[EdgeWord],
    classify: impl Fn(&EdgeWord) -> Option<usize>,
) -> Result<ExplicitFinCategory, SegalifyError> {
    let objects = x.names(0).to_vec();
    let arrows = reps
        .iter()
        .map(|w| crate::category::Arrow { name: w.display(x).to_string(), source: w.start, target: w.end(x) })
        .collect();
    let identities = (0..x.len(0))
        .map(|v| classify(&EdgeWord::empty(v)).ok_or_else(|| SegalifyError::NotMaterializable("missing identity".into())))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ExplicitFinCategory::new(objects, arrows, identities, |f, g| classify(&reps[f].concat(&reps[g])))?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Decision {
    Yes,
    No,
    Unknown,
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decision::Yes => "yes",
            Decision::No => "no",
            Decision::Unknown => "unknown",
        })
    }
}

/// The presentation of `h₁` by edges, with its completed engine.
#[derive(Clone, Debug)]
pub struct H1Rewrite {
    sset: Arc<TruncatedSSet>,
    presented: PresentedCategory,
}

/// Generators are all edges (letter = edge index, so the letter order is the
/// canonical edge order); a degenerate edge rewrites to the empty word and
/// each 2-simplex relates its spine to its long edge.
pub fn h1_rewrite(x: &TruncatedSSet, budget: Budget) -> Result<H1Rewrite, SegalifyError> {
    if x.trunc_level() < 2 {
        return Err(SegalifyError::TruncationTooLow(x.trunc_level()));
    }
    let generators = (0..x.len(1))
        .map(|e| Generator { name: x.name(1, e).to_string(), source: x.edge_source(e), target: x.edge_target(e) })
        .collect();
    let mut relations = Vec::new();
    for e in 0..x.len(1) {
        if x.is_degenerate(1, e) {
            let v = x.edge_source(e);
            relations.push((PathWord { start: v, letters: vec![e as Letter] }, PathWord { start: v, letters: vec![] }));
        }
    }
    for s in 0..x.len(2) {
        let (f, g, h) = (x.face(2, 2, s), x.face(2, 0, s), x.face(2, 1, s));
        let start = x.edge_source(f);
        relations.push((
            PathWord { start, letters: vec![f as Letter, g as Letter] },
            PathWord { start, letters: vec![h as Letter] },
        ));
    }
    let presented = PresentedCategory::new(x.names(0).to_vec(), generators, relations, budget)?;
    Ok(H1Rewrite { sset: Arc::new(x.clone()), presented })
}

impl H1Rewrite {
    pub fn sset(&self) -> &Arc<TruncatedSSet> {
        &self.sset
    }

    pub fn presented(&self) -> &PresentedCategory {
        &self.presented
    }

    pub fn is_complete(&self) -> bool {
        self.presented.is_complete()
    }

    pub fn dump(&self) -> String {
        self.presented.engine().dump(|c| self.sset.name(1, c as usize).to_string())
    }

    pub fn normal_form(&self, w: &EdgeWord) -> EdgeWord {
        let nf = self.presented.normal_form(&to_path(w));
        EdgeWord { start: w.start, edges: nf.letters.iter().map(|&c| c as usize).collect() }
    }

    /// Normal forms `x -> y`, or `None` when there are infinitely many.
    pub fn normal_forms(&self, x: usize, y: usize) -> Option<Vec<EdgeWord>> {
        let groups = self.presented.irreducible_from(x)?;
        Some(
            groups[y]
                .iter()
                .map(|p| EdgeWord { start: p.start, edges: p.letters.iter().map(|&c| c as usize).collect() })
                .collect(),
        )
    }

    pub fn materialize(&self) -> Result<H1Category, SegalifyError> {
        let m = self.presented.materialize().map_err(|e| SegalifyError::NotMaterializable(e.to_string()))?;
        let reps = m
            .normal_forms
            .iter()
            .map(|p| EdgeWord { start: p.start, edges: p.letters.iter().map(|&c| c as usize).collect() })
            .collect();
        Ok(H1Category {
            sset: self.sset.clone(),
            category: m.category.clone(),
            representatives: reps,
            classifier: Classifier::Rewrite(Box::new((self.presented.clone(), m))),
        })
    }
}

fn to_path(w: &EdgeWord) -> PathWord {
    PathWord { start: w.start, letters: w.edges.iter().map(|&e| e as Letter).collect() }
}

/// Equality of parallel words by normal forms.
pub fn mor_equal(x: &TruncatedSSet, a: &EdgeWord, b: &EdgeWord, engine: &H1Rewrite) -> Result<Decision, SegalifyError> {
    check_parallel(x, a, b)?;
    if engine.normal_form(a) == engine.normal_form(b) {
        Ok(Decision::Yes)
    } else if engine.is_complete() {
        Ok(Decision::No)
    } else {
        Ok(Decision::Unknown)
    }
}

#[derive(Clone, Debug)]
enum Classifier {
    Words(HashMap<EdgeWord, usize>),
    Rewrite(Box<(PresentedCategory, Materialized)>),
}

/// A materialized `h₁` whose arrows carry representative words.
#[derive(Clone, Debug)]
pub struct H1Category {
    sset: Arc<TruncatedSSet>,
    pub category: ExplicitFinCategory,
    pub representatives: Vec<EdgeWord>,
    classifier: Classifier,
}

impl H1Category {
    pub fn sset(&self) -> &Arc<TruncatedSSet> {
        &self.sset
    }

    /// The arrow represented by a composable word.
    pub fn classify(&self, w: &EdgeWord) -> Option<usize> {
        match &self.classifier {
            Classifier::Words(m) => m.get(&w.reduced(&self.sset)).copied(),
            Classifier::Rewrite(b) => b.1.arrow_of(&b.0.normal_form(&to_path(w))),
        }
    }

    pub fn hom_count(&self, x: usize, y: usize) -> usize {
        self.category.hom(x, y).len()
    }
}

/// The identity-on-objects functor sending each arrow of `a` to the class
/// of its representative in `b`, checked to be an isomorphism.
pub fn compare_by_words(a: &H1Category, b: &H1Category) -> Result<Functor, SegalifyError> {
    if a.category.object_count() != b.category.object_count() {
        return Err(SegalifyError::NotMaterializable("object sets differ".into()));
    }
    let arrow_map = a
        .representatives
        .iter()
        .map(|w| b.classify(w).ok_or_else(|| SegalifyError::NotMaterializable(format!("unclassified word {w:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let f = Functor { object_map: (0..a.category.object_count()).collect(), arrow_map };
    f.check_isomorphism(&a.category, &b.category)?;
    Ok(f)
}

/// Nerve of the materialized `h₁`, truncated at level 3.
pub fn nerve_of_h1(x: &TruncatedSSet) -> Result<TruncatedSSet, SegalifyError> {
    let h = h1_necklace(x, None)?.materialize()?;
    Ok(nerve_of_category(&h.category, 3)?)
}

/// Representatives of `hom(x, y)` in `h₁`.
pub fn mapping_set(x: &TruncatedSSet, from: usize, to: usize) -> Result<Vec<EdgeWord>, SegalifyError> {
    let h = h1_necklace(x, None)?;
    if !h.is_exact() {
        return Err(SegalifyError::NotMaterializable("edge graph has a cycle".into()));
    }
    Ok(h.classes(from, to).into_iter().map(|c| h.representative(c).clone()).collect())
}

/// The functor `C -> h₁(N C)` sending an arrow to its one-letter word,
/// checked to be an isomorphism. Nerves with loops go through rewriting
/// since bounded saturation is only exact on acyclic edge graphs.
pub fn nerve_round_trip(c: &ExplicitFinCategory) -> Result<Functor, SegalifyError> {
    let nerve = nerve_of_category(c, 2)?;
    let h = if nerve.is_acyclic() {
        h1_necklace(&nerve, None)?.materialize()?
    } else {
        h1_rewrite(&nerve, Budget::default())?.materialize()?
    };
    let arrow_map = (0..c.arrow_count())
        .map(|f| {
            let w = EdgeWord::from_edges(&nerve, vec![f])?;
            h.classify(&w).ok_or_else(|| SegalifyError::NotMaterializable("unclassified edge".into()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let object_map = (0..c.object_count()).collect();
    let f = Functor { object_map, arrow_map };
    f.check_isomorphism(c, &h.category)?;
    Ok(f)
}

/// The comparison functor `h₁(X×Y) -> h₁(X)×h₁(Y)` induced by the two
/// projections, checked to be an isomorphism.
pub fn product_comparison(x: &TruncatedSSet, y: &TruncatedSSet) -> Result<Functor, SegalifyError> {
    let xy = product(x, y)?;
    let hx = h1_necklace(x, None)?.materialize()?;
    let hy = h1_necklace(y, None)?.materialize()?;
    let hxy = h1_necklace(&xy, None)?.materialize()?;
    let target = ExplicitFinCategory::product(&hx.category, &hy.category);
    let (ny0, ny1) = (y.len(0), y.len(1));
    let nd = hy.category.arrow_count();
    let arrow_map = hxy
        .representatives
        .iter()
        .map(|w| {
            let wx = EdgeWord { start: w.start / ny0, edges: w.edges.iter().map(|&e| e / ny1).collect() };
            let wy = EdgeWord { start: w.start % ny0, edges: w.edges.iter().map(|&e| e % ny1).collect() };
            let err = || SegalifyError::NotMaterializable("unclassified projection".into());
            Ok(hx.classify(&wx).ok_or_else(err)? * nd + hy.classify(&wy).ok_or_else(err)?)
        })
        .collect::<Result<Vec<_>, SegalifyError>>()?;
    let f = Functor { object_map: (0..xy.len(0)).collect(), arrow_map };
    f.check_isomorphism(&hxy.category, &target)?;
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::{boundary, circle, horn, spine, standard_simplex};

    fn word(x: &TruncatedSSet, s: &str) -> EdgeWord {
        EdgeWord::parse(x, s).unwrap()
    }

    fn hom02(x: &TruncatedSSet) -> usize {
        let h = h1_necklace(x, None).unwrap();
        h.classes(x.cell(0, "0").unwrap(), x.cell(0, "2").unwrap()).len()
    }

    #[test]
    fn golden_homs() {
        assert_eq!(hom02(&standard_simplex(2, 2).unwrap()), 1);
        assert_eq!(hom02(&boundary(2, 2).unwrap()), 2);
        let l = horn(2, 1, 2).unwrap();
        assert_eq!(hom02(&l), 1);
        let h = h1_necklace(&l, None).unwrap();
        let (a, b) = (l.cell(0, "0").unwrap(), l.cell(0, "2").unwrap());
        assert!(h.words().iter().all(|w| !(w.len() == 1 && w.start == a && w.end(&l) == b)));
        let s = spine(3, 3).unwrap();
        let h = h1_necklace(&s, None).unwrap();
        let classes = h.classes(s.cell(0, "0").unwrap(), s.cell(0, "3").unwrap());
        assert_eq!(classes.len(), 1);
        assert_eq!(h.representative(classes[0]).display(&s).to_string(), "01,12,23");
    }

    #[test]
    fn rewrite_engine_on_simplex() {
        let x = standard_simplex(2, 2).unwrap();
        let r = h1_rewrite(&x, Budget::default()).unwrap();
        assert_eq!(r.dump(), "00 -> ε\n11 -> ε\n22 -> ε\n01 12 -> 02\ncomplete\n");
        assert_eq!(r.normal_forms(0, 2).unwrap(), vec![word(&x, "02")]);
        assert_eq!(mor_equal(&x, &word(&x, "01,12"), &word(&x, "02"), &r).unwrap(), Decision::Yes);
        let b = boundary(2, 2).unwrap();
        let rb = h1_rewrite(&b, Budget::default()).unwrap();
        assert_eq!(rb.normal_forms(0, 2).unwrap().len(), 2);
        assert_eq!(mor_equal(&b, &word(&b, "01,12"), &word(&b, "02"), &rb).unwrap(), Decision::No);
        assert!(mor_equal(&b, &word(&b, "01"), &word(&b, "02"), &rb).is_err());
    }

    #[test]
    fn circle_has_infinite_homs() {
        let c = circle(2).unwrap();
        let r = h1_rewrite(&c, Budget::default()).unwrap();
        assert!(r.is_complete());
        assert!(r.normal_forms(0, 0).is_none());
        assert!(matches!(r.materialize(), Err(SegalifyError::NotMaterializable(_))));
        let h = h1_necklace(&c, None).unwrap();
        assert!(!h.is_exact());
        assert_eq!(h.max_word(), CYCLIC_MAX_WORD);
        // t^0 .. t^8 stay distinct within the bound.
        assert_eq!(h.classes(0, 0).len(), CYCLIC_MAX_WORD + 1);
    }

    #[test]
    fn degenerate_edges_are_identities() {
        let x = standard_simplex(2, 2).unwrap();
        let r = h1_rewrite(&x, Budget::default()).unwrap();
        let h = h1_necklace(&x, None).unwrap();
        for v in 0..3 {
            let s0 = EdgeWord::from_edges(&x, vec![x.degen(0, 0, v)]).unwrap();
            assert_eq!(mor_equal(&x, &s0, &EdgeWord::empty(v), &r).unwrap(), Decision::Yes);
            assert_eq!(h.decide(&s0, &EdgeWord::empty(v)).unwrap(), Decision::Yes);
        }
    }

    #[test]
    fn backends_agree_on_small_examples() {
        for x in [
            standard_simplex(2, 2).unwrap(),
            boundary(2, 2).unwrap(),
            horn(3, 1, 3).unwrap(),
            boundary(3, 3).unwrap(),
            spine(4, 2).unwrap(),
            standard_simplex(3, 3).unwrap(),
        ] {
            let a = h1_necklace(&x, None).unwrap().materialize().unwrap();
            let b = h1_rewrite(&x, Budget::default()).unwrap().materialize().unwrap();
            compare_by_words(&a, &b).unwrap();
            compare_by_words(&b, &a).unwrap();
        }
    }

    #[test]
    fn thin_and_unrestricted_partitions_agree() {
        for x in [standard_simplex(3, 3).unwrap(), boundary(3, 3).unwrap(), spine(3, 3).unwrap()] {
            let a = h1_necklace_with(&x, None, Saturation::Thin).unwrap();
            let b = h1_necklace_with(&x, None, Saturation::Unrestricted).unwrap();
            assert_eq!(a.partition(), b.partition());
            assert!(a.words_visited() < b.words_visited());
        }
    }

    #[test]
    fn nerves_and_mapping_sets() {
        let n = nerve_of_h1(&spine(2, 2).unwrap()).unwrap();
        assert_eq!((n.len(0), n.len(1), n.nondegenerate(1).count()), (3, 6, 3));
        assert_eq!(n.nondegenerate(2).count(), 1);
        let b = boundary(2, 2).unwrap();
        assert_eq!(mapping_set(&b, 0, 2).unwrap().len(), 2);
        assert_eq!(mapping_set(&standard_simplex(2, 2).unwrap(), 0, 2).unwrap().len(), 1);
        assert!(mapping_set(&standard_simplex(1, 2).unwrap(), 1, 0).unwrap().is_empty());
        // Nerve of h1 of the boundary: composable chains of its category.
        let nb = nerve_of_h1(&b).unwrap();
        assert_eq!(nb.nondegenerate(1).count(), 4);
        assert_eq!(nb.nondegenerate(2).count(), 1);
    }

    #[test]
    fn round_trips_and_products() {
        nerve_round_trip(&ExplicitFinCategory::linear_order(3)).unwrap();
        nerve_round_trip(&ExplicitFinCategory::discrete(2)).unwrap();
        product_comparison(&standard_simplex(1, 2).unwrap(), &boundary(2, 2).unwrap()).unwrap();
    }
}
