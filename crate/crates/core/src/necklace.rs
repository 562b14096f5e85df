//! The necklace category.
//!
//! A necklace `Δ^{n₁} ∨ … ∨ Δ^{n_k}` is a chain of standard simplices glued
//! last vertex to first vertex. Its vertices are numbered `0..=T` with
//! `T = Σ nᵢ`; the beads occupy the intervals between consecutive joints.
//! Morphisms are bipointed simplicial maps, which are determined by their
//! effect on vertices: a monotone map preserving `0` and `T` under which
//! every bead lands inside a single bead of the target.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::sset::{monotone_sequences, sequence_name, SSetMap, SsetError, TruncatedSSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NecklaceError {
    #[error("bead sizes must be at least 1")]
    EmptyBead,
    #[error("cannot parse necklace literal `{0}`")]
    Parse(String),
    #[error("necklace is too large")]
    Overflow,
    #[error("vertex map is not a necklace morphism: {0}")]
    NotAMorphism(String),
    #[error("maps are not composable")]
    NotComposable,
    #[error("joining requires at least one necklace")]
    EmptyJoin,
    #[error("invalid interval map: {0}")]
    BadAnchor(String),
    #[error(transparent)]
    Sset(#[from] SsetError),
}

/// Wedge of simplices; the empty bead list is `Δ⁰`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Necklace {
    beads: Vec<usize>,
}

impl Necklace {
    pub fn new(beads: Vec<usize>) -> Result<Self, NecklaceError> {
        if beads.contains(&0) {
            return Err(NecklaceError::EmptyBead);
        }
        beads.iter().try_fold(0usize, |acc, &b| acc.checked_add(b)).ok_or(NecklaceError::Overflow)?;
        Ok(Necklace { beads })
    }

    pub fn point() -> Self {
        Necklace { beads: Vec::new() }
    }

    pub fn simplex(n: usize) -> Self {
        if n == 0 {
            Self::point()
        } else {
            Necklace { beads: vec![n] }
        }
    }

    pub fn very_thin(k: usize) -> Self {
        Necklace { beads: vec![1; k] }
    }

    pub fn beads(&self) -> &[usize] {
        &self.beads
    }

    pub fn is_point(&self) -> bool {
        self.beads.is_empty()
    }

    /// Total bead sum `T`; the maximal vertex.
    pub fn total(&self) -> usize {
        self.beads.iter().sum()
    }

    /// Partial sums `0, n₁, n₁+n₂, …, T`.
    pub fn joints(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.beads.len() + 1);
        let mut acc = 0;
        out.push(0);
        for &b in &self.beads {
            acc += b;
            out.push(acc);
        }
        out
    }

    /// Vertex intervals `[start, end]` of the beads.
    pub fn bead_intervals(&self) -> Vec<(usize, usize)> {
        self.joints().windows(2).map(|w| (w[0], w[1])).collect()
    }

    pub fn concat(&self, other: &Necklace) -> Necklace {
        let mut beads = self.beads.clone();
        beads.extend_from_slice(&other.beads);
        Necklace { beads }
    }

    pub fn is_very_thin(&self) -> bool {
        self.beads.iter().all(|&b| b == 1)
    }

    pub fn is_thin(&self) -> bool {
        self.beads.iter().all(|&b| b <= 2) && self.beads.iter().filter(|&&b| b == 2).count() <= 1
    }

    /// Index of some bead whose closed interval contains `[lo, hi]`.
    pub fn bead_containing(&self, lo: usize, hi: usize) -> Option<usize> {
        let mut start = 0;
        for (i, &b) in self.beads.iter().enumerate() {
            let end = start + b;
            if start <= lo && hi <= end {
                return Some(i);
            }
            if lo < end {
                return None;
            }
            start = end;
        }
        None
    }
}

impl fmt::Display for Necklace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.beads.is_empty() {
            return f.write_str("0");
        }
        for (i, b) in self.beads.iter().enumerate() {
            if i > 0 {
                f.write_str("v")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for Necklace {
    type Err = NecklaceError;

    /// Parses `2v2v1v1`; `0` is `Δ⁰`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "0" {
            return Ok(Necklace::point());
        }
        let beads = s
            .split('v')
            .map(|part| {
                if part.is_empty() || !part.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(NecklaceError::Parse(s.to_string()));
                }
                part.parse::<usize>().map_err(|_| NecklaceError::Overflow)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Necklace::new(beads)
    }
}

/// `L(N) = Δ^T`.
pub fn segalify_necklace(n: &Necklace) -> usize {
    n.total()
}

/// Morphism of necklaces, stored as its vertex map.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NecklaceMap {
    source: Necklace,
    target: Necklace,
    vertex_map: Vec<usize>,
}

impl NecklaceMap {
    pub fn new(source: Necklace, target: Necklace, vertex_map: Vec<usize>) -> Result<Self, NecklaceError> {
        check_vertex_map(&source, &target, &vertex_map)?;
        Ok(NecklaceMap { source, target, vertex_map })
    }

    pub fn identity(n: &Necklace) -> Self {
        NecklaceMap { source: n.clone(), target: n.clone(), vertex_map: (0..=n.total()).collect() }
    }

    pub fn source(&self) -> &Necklace {
        &self.source
    }

    pub fn target(&self) -> &Necklace {
        &self.target
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.vertex_map
    }

    /// `self ∘ f`.
    pub fn compose(&self, f: &NecklaceMap) -> Result<NecklaceMap, NecklaceError> {
        if f.target != self.source {
            return Err(NecklaceError::NotComposable);
        }
        let vertex_map = f.vertex_map.iter().map(|&v| self.vertex_map[v]).collect();
        NecklaceMap::new(f.source.clone(), self.target.clone(), vertex_map)
    }

    /// The induced map of realizations.
    pub fn to_sset_map(&self, trunc_level: usize) -> Result<SSetMap, NecklaceError> {
        let src = Arc::new(realize(&self.source, trunc_level)?.sset);
        let tgt = Arc::new(realize(&self.target, trunc_level)?.sset);
        let map = induced_cell_map(&src, &tgt, &self.vertex_map)
            .ok_or_else(|| NecklaceError::NotAMorphism("image is not a simplex".into()))?;
        Ok(SSetMap::new(src, tgt, map)?)
    }
}

/// Level tables of the map of realizations induced by a vertex map, if every
/// simplex lands on a simplex.
pub(crate) fn induced_cell_map(
    src: &TruncatedSSet,
    tgt: &TruncatedSSet,
    vertex_map: &[usize],
) -> Option<Vec<Vec<usize>>> {
    (0..=src.trunc_level())
        .map(|n| {
            (0..src.len(n))
                .map(|c| {
                    let seq: Vec<usize> = src.vertices(n, c).iter().map(|&v| vertex_map[v]).collect();
                    tgt.cell(n, &sequence_name(&seq))
                })
                .collect::<Option<Vec<_>>>()
        })
        .collect()
}

fn check_vertex_map(source: &Necklace, target: &Necklace, f: &[usize]) -> Result<(), NecklaceError> {
    let (ts, tt) = (source.total(), target.total());
    if f.len() != ts + 1 {
        return Err(NecklaceError::NotAMorphism(format!("expected {} vertex images", ts + 1)));
    }
    if f.windows(2).any(|w| w[0] > w[1]) {
        return Err(NecklaceError::NotAMorphism("not monotone".into()));
    }
    if f[0] != 0 || f[ts] != tt {
        return Err(NecklaceError::NotAMorphism("endpoints not preserved".into()));
    }
    for (a, b) in source.bead_intervals() {
        if f[a] != f[b] && target.bead_containing(f[a], f[b]).is_none() {
            return Err(NecklaceError::NotAMorphism(format!("bead [{a},{b}] straddles a joint")));
        }
    }
    Ok(())
}

/// All morphisms `n -> m`, in lexicographic order of vertex maps.
pub fn hom_set(n: &Necklace, m: &Necklace) -> Vec<NecklaceMap> {
    let (ts, tt) = (n.total(), m.total());
    let intervals = n.bead_intervals();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(ts + 1);
    #[allow(clippy::too_many_arguments)]
    fn go(
        v: usize,
        ts: usize,
        tt: usize,
        n: &Necklace,
        m: &Necklace,
        intervals: &[(usize, usize)],
        cur: &mut Vec<usize>,
        out: &mut Vec<NecklaceMap>,
    ) {
        if v > ts {
            if cur[ts] == tt {
                out.push(NecklaceMap { source: n.clone(), target: m.clone(), vertex_map: cur.clone() });
            }
            return;
        }
        let lo = if v == 0 { 0 } else { cur[v - 1] };
        let hi = if v == 0 { 0 } else { tt };
        for w in lo..=hi {
            if v == ts && w != tt {
                continue;
            }
            cur.push(w);
            // Check the bead ending at v, if any.
            let ok = intervals
                .iter()
                .find(|&&(_, b)| b == v)
                .is_none_or(|&(a, _)| cur[a] == w || m.bead_containing(cur[a], w).is_some());
            if ok {
                go(v + 1, ts, tt, n, m, intervals, cur, out);
            }
            cur.pop();
        }
    }
    go(0, ts, tt, n, m, &intervals, &mut cur, &mut out);
    out
}

/// Bipointed simplicial set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipointed {
    pub sset: TruncatedSSet,
    pub min: usize,
    pub max: usize,
}

/// The wedge of standard simplices underlying a necklace.
pub fn realize(n: &Necklace, trunc_level: usize) -> Result<Bipointed, NecklaceError> {
    let total = n.total();
    let cells: Vec<Vec<Vec<usize>>> = (0..=trunc_level)
        .map(|k| {
            monotone_sequences(k, total)
                .into_iter()
                .filter(|s| s[0] == s[k] || n.bead_containing(s[0], s[k]).is_some())
                .collect()
        })
        .collect();
    let sset = TruncatedSSet::from_keyed(
        trunc_level,
        cells,
        |_, s| sequence_name(s),
        |_, i, s| {
            let mut v = s.clone();
            v.remove(i);
            v
        },
        |_, i, s| {
            let mut v = s.clone();
            v.insert(i, s[i]);
            v
        },
    )?;
    let min = sset.cell(0, &sequence_name(&[0])).expect("vertex 0");
    let max = sset.cell(0, &sequence_name(&[total])).expect("last vertex");
    Ok(Bipointed { sset, min, max })
}

/// The inclusion `N -> Δ^T` exhibiting `L(N)`.
pub fn segalify_inclusion(n: &Necklace, trunc_level: usize) -> Result<SSetMap, NecklaceError> {
    let src = Arc::new(realize(n, trunc_level)?.sset);
    let tgt = Arc::new(crate::sset::standard_simplex(n.total(), trunc_level)?);
    let id: Vec<usize> = (0..=n.total()).collect();
    let levels = induced_cell_map(&src, &tgt, &id).expect("a wedge sits inside its simplex");
    Ok(SSetMap::new(src, tgt, levels)?)
}

/// Joins necklaces end to start and records the joints as a map
/// `[n] -> [T]`.
pub fn join(parts: &[Necklace]) -> Result<(Necklace, Vec<usize>), NecklaceError> {
    if parts.is_empty() {
        return Err(NecklaceError::EmptyJoin);
    }
    let mut beads = Vec::new();
    let mut alpha = vec![0];
    for p in parts {
        beads.extend_from_slice(&p.beads);
        alpha.push(alpha.last().unwrap() + p.total());
    }
    Ok((Necklace { beads }, alpha))
}

/// `N ∩ Δ^{[lo, hi]}` as a necklace.
pub fn restrict_interval(n: &Necklace, lo: usize, hi: usize) -> Necklace {
    let beads = n
        .bead_intervals()
        .into_iter()
        .filter_map(|(a, b)| {
            let (s, e) = (a.max(lo), b.min(hi));
            (s < e).then(|| e - s)
        })
        .collect();
    Necklace { beads }
}

/// Right adjoint of [`join`]: cuts `n` at the vertices `alpha(0..)`.
pub fn join_right_adjoint(n: &Necklace, alpha: &[usize]) -> Result<Vec<Necklace>, NecklaceError> {
    if alpha.len() < 2 {
        return Err(NecklaceError::BadAnchor("need at least two points".into()));
    }
    if alpha[0] != 0 || *alpha.last().unwrap() != n.total() {
        return Err(NecklaceError::BadAnchor("endpoints not preserved".into()));
    }
    if alpha.windows(2).any(|w| w[0] > w[1]) {
        return Err(NecklaceError::BadAnchor("not monotone".into()));
    }
    Ok(alpha.windows(2).map(|w| restrict_interval(n, w[0], w[1])).collect())
}

/// All necklaces with total at most `bound` (bead sizes unrestricted),
/// ordered by total and then lexicographically.
pub fn necklaces_up_to(bound: usize) -> Vec<Necklace> {
    let mut out = Vec::new();
    for t in 0..=bound {
        out.extend(compositions(t, usize::MAX).into_iter().map(|beads| Necklace { beads }));
    }
    out
}

/// Compositions of `t` into parts of size at most `max_part`.
pub(crate) fn compositions(t: usize, max_part: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max_part: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for p in 1..=rest.min(max_part) {
            cur.push(p);
            go(rest - p, max_part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(t, max_part, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nk(s: &str) -> Necklace {
        s.parse().unwrap()
    }

    #[test]
    fn literal_syntax() {
        assert_eq!(nk("2v2v1v1").beads(), &[2, 2, 1, 1]);
        assert_eq!(nk("0"), Necklace::point());
        assert_eq!(nk("1v3v2").to_string(), "1v3v2");
        for bad in ["", "v", "1v", "0v1", "2vv1", "a", "-1", "1v0"] {
            assert!(bad.parse::<Necklace>().is_err(), "{bad}");
        }
        assert!(matches!("99999999999999999999".parse::<Necklace>(), Err(NecklaceError::Overflow)));
    }

    #[test]
    fn concat_and_totals() {
        assert_eq!(nk("2v2").concat(&nk("1v1")), nk("2v2v1v1"));
        assert_eq!(Necklace::point().concat(&nk("3")), nk("3"));
        assert_eq!(nk("1").concat(&nk("2")).concat(&nk("1")), nk("1").concat(&nk("2").concat(&nk("1"))));
        assert_eq!(segalify_necklace(&nk("1v3v2")), 6);
        assert_eq!(segalify_necklace(&nk("2v2v1v1")), 6);
        assert_eq!(segalify_necklace(&Necklace::point()), 0);
        assert_eq!(nk("1v2v3").joints(), vec![0, 1, 3, 6]);
    }

    #[test]
    fn small_hom_sets() {
        let maps: Vec<Vec<usize>> =
            hom_set(&nk("1v1"), &nk("2")).iter().map(|f| f.vertex_map().to_vec()).collect();
        assert_eq!(maps, vec![vec![0, 0, 2], vec![0, 1, 2], vec![0, 2, 2]]);
        assert!(hom_set(&nk("2"), &nk("1v1")).is_empty());
        assert!(hom_set(&nk("1"), &nk("1v1")).is_empty());
        assert_eq!(hom_set(&nk("1v1"), &nk("1")).len(), 2);
        assert_eq!(hom_set(&nk("3"), &Necklace::point()).len(), 1);
        assert!(hom_set(&Necklace::point(), &nk("1")).is_empty());
    }

    #[test]
    fn collapsing_the_first_edge() {
        // Collapse the first edge of 2v2v1v1 and include the rest into 1v3v2.
        let f = NecklaceMap::new(nk("2v2v1v1"), nk("1v3v2"), vec![0, 0, 1, 3, 4, 5, 6]).unwrap();
        assert_eq!(f.source().total(), 6);
        assert!(NecklaceMap::new(nk("2v2v1v1"), nk("1v3v2"), vec![0, 1, 2, 3, 4, 5, 6]).is_err());
    }

    #[test]
    fn composition_with_identity() {
        for f in hom_set(&nk("1v1"), &nk("2")) {
            assert_eq!(NecklaceMap::identity(&nk("2")).compose(&f).unwrap(), f);
            assert_eq!(f.compose(&NecklaceMap::identity(&nk("1v1"))).unwrap(), f);
        }
        let [a, b] = &hom_set(&nk("1v1"), &nk("1"))[..] else { panic!() };
        let id = NecklaceMap::identity(&nk("1"));
        assert_eq!(&id.compose(a).unwrap(), a);
        assert_eq!(&id.compose(b).unwrap(), b);
        assert!(a.compose(&id).is_err());
    }

    #[test]
    fn realizations() {
        let r = realize(&nk("1v1"), 2).unwrap();
        assert_eq!(r.sset.len(0), 3);
        assert_eq!(r.sset.nondegenerate(1).count(), 2);
        assert!(r.sset.validate().ok);
        let r2 = realize(&nk("2"), 2).unwrap();
        assert_eq!(r2.sset, crate::sset::standard_simplex(2, 2).unwrap());
        assert_eq!((r2.sset.name(0, r2.min), r2.sset.name(0, r2.max)), ("0", "2"));
        let p = realize(&Necklace::point(), 2).unwrap();
        assert_eq!((p.sset.len(0), p.sset.len(1), p.sset.len(2)), (1, 1, 1));
        let inc = segalify_inclusion(&nk("1v2"), 3).unwrap();
        assert!(inc.check().ok);
    }

    #[test]
    fn thinness() {
        assert!(nk("1v1v1").is_thin() && nk("1v1v1").is_very_thin());
        assert!(nk("1v2v1").is_thin() && !nk("1v2v1").is_very_thin());
        assert!(!nk("2v2").is_thin());
        assert!(!nk("3").is_thin());
    }

    #[test]
    fn join_and_cut() {
        assert_eq!(join(&[nk("2"), nk("1")]).unwrap(), (nk("2v1"), vec![0, 2, 3]));
        assert_eq!(join(&[nk("1")]).unwrap(), (nk("1"), vec![0, 1]));
        assert_eq!(join(&[nk("1v1"), nk("2")]).unwrap(), (nk("1v1v2"), vec![0, 2, 4]));
        assert!(matches!(join(&[]), Err(NecklaceError::EmptyJoin)));
        assert_eq!(join_right_adjoint(&nk("2v1"), &[0, 2, 3]).unwrap(), vec![nk("2"), nk("1")]);
        assert_eq!(join_right_adjoint(&nk("3"), &[0, 1, 3]).unwrap(), vec![nk("1"), nk("2")]);
        let n = nk("2v1v3");
        assert_eq!(join_right_adjoint(&n, &[0, 6]).unwrap(), vec![n.clone()]);
        assert_eq!(join_right_adjoint(&n, &[0, 0, 6]).unwrap(), vec![Necklace::point(), n.clone()]);
        assert!(join_right_adjoint(&n, &[0, 4, 2, 6]).is_err());
        assert!(join_right_adjoint(&n, &[0, 5]).is_err());
    }

    #[test]
    fn containment_matches_simplicial_maps() {
        // Every monotone endpoint-preserving vertex map underlies a map of
        // realizations exactly when it satisfies bead containment.
        let shapes = necklaces_up_to(4);
        for n in &shapes {
            for m in &shapes {
                let src = realize(n, 3).unwrap().sset;
                let tgt = realize(m, 3).unwrap().sset;
                let homs: Vec<Vec<usize>> = hom_set(n, m).iter().map(|f| f.vertex_map().to_vec()).collect();
                for f in monotone_sequences(n.total(), m.total()) {
                    if f[0] != 0 || f[n.total()] != m.total() {
                        continue;
                    }
                    let induced = induced_cell_map(&src, &tgt, &f);
                    assert_eq!(induced.is_some(), homs.contains(&f), "{n} -> {m} via {f:?}");
                }
            }
        }
    }
}
