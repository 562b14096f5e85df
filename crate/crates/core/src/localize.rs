//! The category of simplices, its last-vertex marking, and localization.
//!
//! Arrows `x -> y` are monotone maps `α: [n] -> [m]` with `α*y = x`; an
//! arrow is marked when `α(n) = m`. The localization inverts marked arrows
//! and is presented by composition triangles plus `w·w̄ = id = w̄·w`, then
//! completed with the same budgeted engine as [`crate::segalify`].
//!
//! Restricting objects to nondegenerate simplices loses relations when a
//! nondegenerate simplex has a degenerate face: for a 2-simplex with
//! `d₀σ = s₀v` the two vertex arrows `v -> σ` are only identified through
//! the degeneracy `s₀v -> v`. The default object set is therefore closed
//! under faces.

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::rewrite::{Budget, Generator, Letter, PathWord, PresentationError, PresentedCategory};
use crate::segalify::{h1_necklace, EdgeWord, H1Category, SegalifyError};
use crate::sset::{monotone_sequences, sequence_name, TruncatedSSet};
use crate::union_find::UnionFind;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LocalizeError {
    #[error(transparent)]
    Segalify(#[from] SegalifyError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error("dimension cap {0} exceeds the truncation level")]
    Cap(usize),
}

/// Which simplices become objects.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum ObjectMode {
    /// Nondegenerate simplices and all of their faces.
    #[default]
    FaceClosed,
    /// Nondegenerate simplices only.
    Nondegenerate,
    /// Every simplex of dimension at most the cap.
    AllUpTo(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SimplexArrow {
    pub source: usize,
    pub target: usize,
    pub alpha: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct SimplexCategory {
    /// `(dimension, cell)`.
    pub objects: Vec<(usize, usize)>,
    pub names: Vec<String>,
    pub arrows: Vec<SimplexArrow>,
    index: HashMap<(usize, usize, Vec<usize>), usize>,
    identities: Vec<usize>,
    out: Vec<Vec<usize>>,
}

impl SimplexCategory {
    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn identity(&self, o: usize) -> usize {
        self.identities[o]
    }

    pub fn is_identity(&self, a: usize) -> bool {
        self.identities[self.arrows[a].source] == a
    }

    pub fn is_marked(&self, a: usize) -> bool {
        let ar = &self.arrows[a];
        *ar.alpha.last().unwrap() == self.objects[ar.target].0
    }

    pub fn arrows_from(&self, o: usize) -> &[usize] {
        &self.out[o]
    }

    /// `g ∘ f`.
    pub fn compose(&self, f: usize, g: usize) -> Option<usize> {
        let (af, ag) = (&self.arrows[f], &self.arrows[g]);
        if af.target != ag.source {
            return None;
        }
        let alpha: Vec<usize> = af.alpha.iter().map(|&i| ag.alpha[i]).collect();
        self.index.get(&(af.source, ag.target, alpha)).copied()
    }

    pub fn arrow_name(&self, a: usize) -> String {
        let ar = &self.arrows[a];
        format!("{}:{}->{}", sequence_name(&ar.alpha), self.names[ar.source], self.names[ar.target])
    }

    /// Indices of 0-simplex objects.
    pub fn vertex_objects(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.objects.len()).filter(|&o| self.objects[o].0 == 0)
    }
}

pub fn simplex_category(x: &TruncatedSSet) -> SimplexCategory {
    simplex_category_with(x, ObjectMode::FaceClosed).expect("default mode has no cap")
}

pub fn simplex_category_with(x: &TruncatedSSet, mode: ObjectMode) -> Result<SimplexCategory, LocalizeError> {
    let l = x.trunc_level();
    let mut objects: Vec<(usize, usize)> = Vec::new();
    match mode {
        ObjectMode::Nondegenerate | ObjectMode::FaceClosed => {
            let mut seen = HashSet::new();
            for n in 0..=l {
                for c in x.nondegenerate(n) {
                    seen.insert((n, c));
                }
            }
            if mode == ObjectMode::FaceClosed {
                let mut stack: Vec<(usize, usize)> = seen.iter().copied().collect();
                while let Some((n, c)) = stack.pop() {
                    if n == 0 {
                        continue;
                    }
                    for i in 0..=n {
                        let f = (n - 1, x.face(n, i, c));
                        if seen.insert(f) {
                            stack.push(f);
                        }
                    }
                }
            }
            objects.extend(seen);
        }
        ObjectMode::AllUpTo(cap) => {
            if cap > l {
                return Err(LocalizeError::Cap(cap));
            }
            for n in 0..=cap {
                objects.extend((0..x.len(n)).map(|c| (n, c)));
            }
        }
    }
    objects.sort();
    let obj_index: HashMap<(usize, usize), usize> = objects.iter().enumerate().map(|(i, &o)| (o, i)).collect();
    let max_dim = objects.iter().map(|o| o.0).max().unwrap_or(0);
    let mut names: Vec<String> = objects.iter().map(|&(n, c)| x.name(n, c).to_string()).collect();
    let mut counts: HashMap<String, usize> = HashMap::new();
    for nm in &names {
        *counts.entry(nm.clone()).or_default() += 1;
    }
    for (nm, &(n, _)) in names.iter_mut().zip(&objects) {
        if counts[nm.as_str()] > 1 {
            *nm = format!("{nm}#{n}");
        }
    }
    let mut arrows = Vec::new();
    let mut index = HashMap::new();
    let mut identities = vec![usize::MAX; objects.len()];
    for (t, &(m, y)) in objects.iter().enumerate() {
        for n in 0..=max_dim {
            for alpha in monotone_sequences(n, m) {
                let xcell = x.pullback(m, y, &alpha);
                if let Some(&s) = obj_index.get(&(n, xcell)) {
                    if n == m && alpha.iter().enumerate().all(|(i, &a)| a == i) {
                        identities[t] = arrows.len();
                    }
                    index.insert((s, t, alpha.clone()), arrows.len());
                    arrows.push(SimplexArrow { source: s, target: t, alpha });
                }
            }
        }
    }
    let mut out = vec![Vec::new(); objects.len()];
    for (i, a) in arrows.iter().enumerate() {
        out[a.source].push(i);
    }
    Ok(SimplexCategory { objects, names, arrows, index, identities, out })
}

/// The localization at the marked arrows, as a presented category.
#[derive(Clone, Debug)]
pub struct Localization {
    pub presented: PresentedCategory,
    /// Generator -> arrow of the simplex category, and whether it is a reversal.
    pub letters: Vec<(usize, bool)>,
}

pub fn localize(c: &SimplexCategory, budget: Budget) -> Result<Localization, LocalizeError> {
    let mut letters: Vec<(usize, bool)> = Vec::new();
    let mut letter_of = vec![None; c.arrows.len()];
    let mut reversal_of = vec![None; c.arrows.len()];
    for a in 0..c.arrows.len() {
        if !c.is_identity(a) {
            letter_of[a] = Some(letters.len() as Letter);
            letters.push((a, false));
        }
    }
    // Reversals come last so the order prefers words without them.
    for a in 0..c.arrows.len() {
        if !c.is_identity(a) && c.is_marked(a) {
            reversal_of[a] = Some(letters.len() as Letter);
            letters.push((a, true));
        }
    }
    let generators = letters
        .iter()
        .map(|&(a, rev)| {
            let ar = &c.arrows[a];
            if rev {
                Generator { name: format!("~{}", c.arrow_name(a)), source: ar.target, target: ar.source }
            } else {
                Generator { name: c.arrow_name(a), source: ar.source, target: ar.target }
            }
        })
        .collect();
    let word = |a: usize| letter_of[a].map_or_else(Vec::new, |l| vec![l]);
    let mut relations = Vec::new();
    for f in 0..c.arrows.len() {
        if c.is_identity(f) {
            continue;
        }
        for &g in c.arrows_from(c.arrows[f].target) {
            if c.is_identity(g) {
                continue;
            }
            let h = c.compose(f, g).expect("simplex maps compose");
            let start = c.arrows[f].source;
            relations.push((
                PathWord { start, letters: vec![letter_of[f].unwrap(), letter_of[g].unwrap()] },
                PathWord { start, letters: word(h) },
            ));
        }
        if let Some(r) = reversal_of[f] {
            let (s, t) = (c.arrows[f].source, c.arrows[f].target);
            relations.push((PathWord { start: s, letters: vec![letter_of[f].unwrap(), r] }, PathWord { start: s, letters: vec![] }));
            relations.push((PathWord { start: t, letters: vec![r, letter_of[f].unwrap()] }, PathWord { start: t, letters: vec![] }));
        }
    }
    let presented = PresentedCategory::new(c.names.clone(), generators, relations, budget)?;
    Ok(Localization { presented, letters })
}

/// The functor `e: Δ/X -> h₁` on the simplex category.
#[derive(Clone, Debug)]
pub struct LastVertexFunctor {
    /// Object -> vertex of `X`.
    pub object_map: Vec<usize>,
    /// Arrow -> arrow of the materialized `h₁`.
    pub arrow_map: Vec<usize>,
}

/// `x ↦ x(n)`; `α: x -> y` goes to the edge of `y` from `α(n)` to `m`.
pub fn last_vertex_functor(x: &TruncatedSSet, c: &SimplexCategory, h1: &H1Category) -> Result<LastVertexFunctor, LocalizeError> {
    let object_map = c.objects.iter().map(|&(n, s)| x.vertex(n, s, n)).collect();
    let arrow_map = c
        .arrows
        .iter()
        .map(|a| {
            let (m, y) = c.objects[a.target];
            let e = x.edge(m, y, *a.alpha.last().unwrap(), m);
            let w = EdgeWord::from_edges(x, vec![e])?;
            h1.classify(&w).ok_or_else(|| SegalifyError::NotMaterializable(format!("edge `{}` has no class", x.name(1, e))).into())
        })
        .collect::<Result<Vec<_>, LocalizeError>>()?;
    Ok(LastVertexFunctor { object_map, arrow_map })
}

impl LastVertexFunctor {
    /// Composable pairs whose images do not compose correctly.
    pub fn composition_failures(&self, c: &SimplexCategory, h1: &H1Category) -> Vec<(usize, usize)> {
        let mut bad = Vec::new();
        for f in 0..c.arrows.len() {
            for &g in c.arrows_from(c.arrows[f].target) {
                let h = c.compose(f, g).unwrap();
                if h1.category.compose(self.arrow_map[f], self.arrow_map[g]) != Some(self.arrow_map[h]) {
                    bad.push((f, g));
                }
            }
        }
        bad
    }

    /// Marked arrows not sent to identities.
    pub fn marked_failures(&self, c: &SimplexCategory, h1: &H1Category) -> Vec<usize> {
        (0..c.arrows.len())
            .filter(|&a| c.is_marked(a) && !h1.category.is_identity(self.arrow_map[a]))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairRow {
    pub source: String,
    pub target: String,
    pub source_is_vertex: bool,
    pub target_is_vertex: bool,
    pub loc_classes: usize,
    pub h1_classes: usize,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Equivalence,
    Failed(Vec<String>),
    Inconclusive(String),
}

#[derive(Clone, Debug)]
pub struct LocalizationReport {
    pub mode: ObjectMode,
    pub budget: Budget,
    pub objects: usize,
    pub arrows: usize,
    pub engine_status: String,
    pub rows: Vec<PairRow>,
    pub verdict: Verdict,
}

impl LocalizationReport {
    pub fn certified(&self) -> bool {
        self.verdict == Verdict::Equivalence
    }

    pub fn vertex_rows(&self) -> impl Iterator<Item = &PairRow> {
        self.rows.iter().filter(|r| r.source_is_vertex && r.target_is_vertex)
    }
}

impl fmt::Display for LocalizationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.verdict {
            Verdict::Equivalence => writeln!(f, "verdict: equivalence certified")?,
            Verdict::Failed(v) => writeln!(f, "verdict: FAILED ({})", v.join("; "))?,
            Verdict::Inconclusive(s) => writeln!(f, "verdict: inconclusive ({s})")?,
        }
        writeln!(
            f,
            "objects: {}, arrows: {}, engine: {}, budget: max_rules={} max_lhs={}",
            self.objects, self.arrows, self.engine_status, self.budget.max_rules, self.budget.max_lhs
        )?;
        writeln!(f, "pair, loc_classes, h1_classes, match?")?;
        for r in self.vertex_rows() {
            writeln!(
                f,
                "({},{}), {}, {}, {}",
                r.source,
                r.target,
                r.loc_classes,
                r.h1_classes,
                if r.matches { "yes" } else { "no" }
            )?;
        }
        Ok(())
    }
}

/// Compares the localization with `h₁` through the last-vertex functor.
pub fn compare_localization(x: &TruncatedSSet, mode: ObjectMode, budget: Budget) -> Result<LocalizationReport, LocalizeError> {
    let h1 = h1_necklace(x, None)?.materialize()?;
    let c = simplex_category_with(x, mode)?;
    let loc = localize(&c, budget)?;
    let e = last_vertex_functor(x, &c, &h1)?;
    let mut report = LocalizationReport {
        mode,
        budget,
        objects: c.object_count(),
        arrows: c.arrows.len(),
        engine_status: loc.presented.engine().status_line(),
        rows: Vec::new(),
        verdict: Verdict::Equivalence,
    };
    let mut failures = Vec::new();

    // Every object reaches a vertex through marked arrows.
    let mut uf = UnionFind::new(c.object_count());
    for (a, ar) in c.arrows.iter().enumerate() {
        if c.is_marked(a) {
            uf.union(ar.source, ar.target);
        }
    }
    let vertex_roots: HashSet<usize> = c.vertex_objects().map(|v| uf.find(v)).collect();
    for o in 0..c.object_count() {
        if !vertex_roots.contains(&uf.find(o)) {
            failures.push(format!("object {} has no marked zigzag to a vertex", c.names[o]));
        }
    }
    for (f, g) in e.composition_failures(&c, &h1) {
        failures.push(format!("last vertex functor breaks {} then {}", c.arrow_name(f), c.arrow_name(g)));
    }
    for a in e.marked_failures(&c, &h1) {
        failures.push(format!("marked arrow {} not sent to an identity", c.arrow_name(a)));
    }
    if !loc.presented.is_complete() {
        report.verdict = Verdict::Inconclusive(report.engine_status.clone());
        if !failures.is_empty() {
            report.verdict = Verdict::Failed(failures);
        }
        return Ok(report);
    }

    let image = |w: &PathWord| -> usize {
        let mut cur = h1.category.identity(e.object_map[w.start]);
        for &l in &w.letters {
            let (a, rev) = loc.letters[l as usize];
            // Reversals of marked arrows go to identities.
            let step = if rev { h1.category.identity(e.object_map[c.arrows[a].source]) } else { e.arrow_map[a] };
            cur = h1.category.compose(cur, step).expect("images compose");
        }
        cur
    };
    for o in 0..c.object_count() {
        // The engine is complete here, so infinitely many normal forms is exact.
        let Some(groups) = loc.presented.irreducible_from(o) else {
            failures.push(format!("infinitely many normal forms from {}", c.names[o]));
            report.verdict = Verdict::Failed(failures);
            return Ok(report);
        };
        for (t, forms) in groups.iter().enumerate() {
            let h = h1.category.hom(e.object_map[o], e.object_map[t]);
            let mut hit: Vec<usize> = forms.iter().map(&image).collect();
            hit.sort();
            let injective = hit.windows(2).all(|w| w[0] != w[1]);
            let matches = injective && hit.len() == h.len();
            if !matches {
                failures.push(format!("hom({},{}) has {} classes against {}", c.names[o], c.names[t], forms.len(), h.len()));
            }
            report.rows.push(PairRow {
                source: c.names[o].clone(),
                target: c.names[t].clone(),
                source_is_vertex: c.objects[o].0 == 0,
                target_is_vertex: c.objects[t].0 == 0,
                loc_classes: forms.len(),
                h1_classes: h.len(),
                matches,
            });
        }
    }
    if !failures.is_empty() {
        report.verdict = Verdict::Failed(failures);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::{boundary, discrete, spine, standard_simplex, FaceRef, NondegenerateBuilder};

    #[test]
    fn simplex_category_of_interval() {
        let x = standard_simplex(1, 2).unwrap();
        let c = simplex_category(&x);
        assert_eq!(c.object_count(), 3);
        assert_eq!(c.arrows.len(), 5);
        let marked: Vec<String> =
            (0..c.arrows.len()).filter(|&a| c.is_marked(a) && !c.is_identity(a)).map(|a| c.arrow_name(a)).collect();
        assert_eq!(marked, ["1:1->01"]);
        let p = simplex_category(&standard_simplex(0, 2).unwrap());
        assert_eq!((p.object_count(), p.arrows.len()), (1, 1));
        let b = simplex_category(&boundary(2, 2).unwrap());
        assert_eq!(b.object_count(), 6);
        assert_eq!((0..b.arrows.len()).filter(|&a| !b.is_identity(a)).count(), 6);
    }

    #[test]
    fn marked_arrows_form_a_subcategory() {
        let c = simplex_category(&standard_simplex(3, 3).unwrap());
        for f in 0..c.arrows.len() {
            for &g in c.arrows_from(c.arrows[f].target) {
                if c.is_marked(f) && c.is_marked(g) {
                    assert!(c.is_marked(c.compose(f, g).unwrap()));
                }
            }
        }
    }

    #[test]
    fn localizations_of_small_examples() {
        let budget = Budget::default();
        for (x, counts) in [
            (standard_simplex(0, 2).unwrap(), vec![1]),
            (standard_simplex(1, 2).unwrap(), vec![1, 1, 0, 1]),
            (spine(2, 2).unwrap(), vec![1, 1, 1, 0, 1, 1, 0, 0, 1]),
            (discrete(2, 2).unwrap(), vec![1, 0, 0, 1]),
        ] {
            let r = compare_localization(&x, ObjectMode::FaceClosed, budget).unwrap();
            assert!(r.certified(), "{r}");
            let got: Vec<usize> = r.vertex_rows().map(|row| row.loc_classes).collect();
            assert_eq!(got, counts);
        }
        let r = compare_localization(&boundary(2, 2).unwrap(), ObjectMode::FaceClosed, budget).unwrap();
        assert!(r.certified());
        let row = r.vertex_rows().find(|row| row.source == "0" && row.target == "2").unwrap();
        assert_eq!((row.loc_classes, row.h1_classes), (2, 2));
        assert!(compare_localization(&standard_simplex(2, 2).unwrap(), ObjectMode::AllUpTo(2), budget).unwrap().certified());
    }

    #[test]
    fn last_vertex_images() {
        let x = standard_simplex(2, 2).unwrap();
        let h1 = h1_necklace(&x, None).unwrap().materialize().unwrap();
        let c = simplex_category(&x);
        let e = last_vertex_functor(&x, &c, &h1).unwrap();
        let (o01, o012) = (
            c.names.iter().position(|n| n == "01").unwrap(),
            c.names.iter().position(|n| n == "012").unwrap(),
        );
        let d2 = c.arrows.iter().position(|a| a.source == o01 && a.target == o012).unwrap();
        assert!(!c.is_marked(d2));
        assert_eq!(h1.representatives[e.arrow_map[d2]].display(&x).to_string(), "12");
        assert!(e.composition_failures(&c, &h1).is_empty());
        assert!(e.marked_failures(&c, &h1).is_empty());
    }

    /// Two parallel edges `f, g: u -> v` and a 2-simplex with faces
    /// `(s₀v, g, f)`.
    fn collapsed() -> TruncatedSSet {
        let mut b = NondegenerateBuilder::new(2);
        let u = b.vertex("u");
        let v = b.vertex("v");
        let f = b.simplex("f", vec![FaceRef::nondegenerate(0, v), FaceRef::nondegenerate(0, u)]).unwrap();
        let g = b.simplex("g", vec![FaceRef::nondegenerate(0, v), FaceRef::nondegenerate(0, u)]).unwrap();
        b.simplex(
            "s",
            vec![FaceRef::degenerate(0, v, vec![0, 0]), FaceRef::nondegenerate(1, g), FaceRef::nondegenerate(1, f)],
        )
        .unwrap();
        b.build().unwrap()
    }

    #[test]
    fn degenerate_faces_are_needed() {
        let x = collapsed();
        let budget = Budget::default();
        assert!(compare_localization(&x, ObjectMode::FaceClosed, budget).unwrap().certified());
        assert!(compare_localization(&x, ObjectMode::AllUpTo(2), budget).unwrap().certified());
        // Without s₀v the arrow f -> s becomes an endomorphism of v after
        // inverting the marked arrows.
        let r = compare_localization(&x, ObjectMode::Nondegenerate, budget).unwrap();
        assert!(matches!(&r.verdict, Verdict::Failed(v) if v[0].starts_with("infinitely many")));
    }
}
