//! Finite truncated simplicial sets.
//!
//! A [`TruncatedSSet`] stores the cells of dimensions `0..=L` together with
//! every face and degeneracy map between them. Degenerate cells are stored
//! explicitly so that products, pullbacks and fibration checks are plain
//! table lookups. Cells are addressed by their position in the per-level
//! ordering; the opaque string names only matter for I/O.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use thiserror::Error;

use crate::category::ExplicitFinCategory;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SsetError {
    #[error("truncation level {0} is below the minimum of 2")]
    TruncationTooLow(usize),
    #[error("mismatched truncation levels {left} and {right}")]
    MismatchedTruncation { left: usize, right: usize },
    #[error("duplicate cell `{name}` in dimension {dim}")]
    DuplicateCell { dim: usize, name: String },
    #[error("unknown cell `{name}` in dimension {dim}")]
    UnknownCell { dim: usize, name: String },
    #[error("map table {kind}[{dim}:{index}] is missing or has the wrong length")]
    BadTable { kind: &'static str, dim: usize, index: usize },
    #[error("cell index {index} out of range in dimension {dim}")]
    IndexOutOfRange { dim: usize, index: usize },
    #[error("inconsistent degeneracy data: {0}")]
    Inconsistent(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// Finite simplicial set truncated at an explicit level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSSet {
    trunc_level: usize,
    names: Vec<Vec<String>>,
    lookup: Vec<HashMap<String, usize>>,
    /// `face[n][i][c]` for `1 <= n <= L`; `face[0]` is empty.
    face: Vec<Vec<Vec<usize>>>,
    /// `degen[n][i][c]` for `0 <= n < L`; `degen[L]` is empty.
    degen: Vec<Vec<Vec<usize>>>,
    degenerate: Vec<Vec<bool>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub identity: String,
    pub dimension: usize,
    pub simplex: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails on {}-cell `{}`", self.identity, self.dimension, self.simplex)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    fn from_violations(violations: Vec<Violation>) -> Self {
        ValidationReport { ok: violations.is_empty(), violations }
    }
}

/// Eilenberg-Zilber decomposition `cell = epi^*(core)`.
///
/// `epi` is a monotone surjection `[n] -> [core_dim]` written as its value
/// sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EzDecomposition {
    pub epi: Vec<usize>,
    pub core_dim: usize,
    pub core: usize,
}

impl TruncatedSSet {
    /// Builds a simplicial set from explicit tables, checking only their
    /// shape. The simplicial identities are checked by [`validate`].
    ///
    /// [`validate`]: TruncatedSSet::validate
    pub fn from_tables(
        trunc_level: usize,
        names: Vec<Vec<String>>,
        face: Vec<Vec<Vec<usize>>>,
        degen: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self, SsetError> {
        if trunc_level < 2 {
            return Err(SsetError::TruncationTooLow(trunc_level));
        }
        let levels = trunc_level + 1;
        if names.len() != levels || face.len() != levels || degen.len() != levels {
            return Err(SsetError::InvalidArgument(format!(
                "expected tables for dimensions 0..={trunc_level}"
            )));
        }
        let mut lookup = Vec::with_capacity(levels);
        for (dim, level) in names.iter().enumerate() {
            let mut map = HashMap::with_capacity(level.len());
            for (idx, name) in level.iter().enumerate() {
                if map.insert(name.clone(), idx).is_some() {
                    return Err(SsetError::DuplicateCell { dim, name: name.clone() });
                }
            }
            lookup.push(map);
        }
        for n in 0..levels {
            let want_faces = if n == 0 { 0 } else { n + 1 };
            if face[n].len() != want_faces {
                return Err(SsetError::BadTable { kind: "face", dim: n, index: face[n].len() });
            }
            for (i, table) in face[n].iter().enumerate() {
                if table.len() != names[n].len() {
                    return Err(SsetError::BadTable { kind: "face", dim: n, index: i });
                }
                if let Some(&bad) = table.iter().find(|&&t| t >= names[n - 1].len()) {
                    return Err(SsetError::IndexOutOfRange { dim: n - 1, index: bad });
                }
            }
            let want_degens = if n == trunc_level { 0 } else { n + 1 };
            if degen[n].len() != want_degens {
                return Err(SsetError::BadTable { kind: "degen", dim: n, index: degen[n].len() });
            }
            for (i, table) in degen[n].iter().enumerate() {
                if table.len() != names[n].len() {
                    return Err(SsetError::BadTable { kind: "degen", dim: n, index: i });
                }
                if let Some(&bad) = table.iter().find(|&&t| t >= names[n + 1].len()) {
                    return Err(SsetError::IndexOutOfRange { dim: n + 1, index: bad });
                }
            }
        }
        let mut degenerate: Vec<Vec<bool>> = names.iter().map(|l| vec![false; l.len()]).collect();
        for n in 0..trunc_level {
            for table in &degen[n] {
                for &t in table {
                    degenerate[n + 1][t] = true;
                }
            }
        }
        Ok(TruncatedSSet { trunc_level, names, lookup, face, degen, degenerate })
    }

    /// Builds a simplicial set whose cells are keyed by arbitrary values,
    /// computing every table by evaluating `face`/`degen` on keys.
    pub(crate) fn from_keyed<K, N, F, D>(
        trunc_level: usize,
        cells: Vec<Vec<K>>,
        name: N,
        face: F,
        degen: D,
    ) -> Result<Self, SsetError>
    where
        K: Clone + Eq + Hash,
        N: Fn(usize, &K) -> String,
        F: Fn(usize, usize, &K) -> K,
        D: Fn(usize, usize, &K) -> K,
    {
        if trunc_level < 2 {
            return Err(SsetError::TruncationTooLow(trunc_level));
        }
        if cells.len() != trunc_level + 1 {
            return Err(SsetError::InvalidArgument("one cell list per dimension required".into()));
        }
        let index: Vec<HashMap<&K, usize>> = cells
            .iter()
            .map(|level| level.iter().enumerate().map(|(i, k)| (k, i)).collect())
            .collect();
        let find = |dim: usize, key: &K| -> Result<usize, SsetError> {
            index[dim].get(key).copied().ok_or_else(|| SsetError::UnknownCell {
                dim,
                name: format!("<computed {dim}-cell>"),
            })
        };
        let mut faces = vec![Vec::new()];
        for n in 1..=trunc_level {
            let mut level = Vec::with_capacity(n + 1);
            for i in 0..=n {
                let table = cells[n]
                    .iter()
                    .map(|k| find(n - 1, &face(n, i, k)))
                    .collect::<Result<Vec<_>, _>>()?;
                level.push(table);
            }
            faces.push(level);
        }
        let mut degens = Vec::with_capacity(trunc_level + 1);
        for n in 0..trunc_level {
            let mut level = Vec::with_capacity(n + 1);
            for i in 0..=n {
                let table = cells[n]
                    .iter()
                    .map(|k| find(n + 1, &degen(n, i, k)))
                    .collect::<Result<Vec<_>, _>>()?;
                level.push(table);
            }
            degens.push(level);
        }
        degens.push(Vec::new());
        let names = cells
            .iter()
            .enumerate()
            .map(|(dim, level)| level.iter().map(|k| name(dim, k)).collect())
            .collect();
        Self::from_tables(trunc_level, names, faces, degens)
    }

    pub fn trunc_level(&self) -> usize {
        self.trunc_level
    }

    /// Number of cells in dimension `n`.
    pub fn len(&self, n: usize) -> usize {
        self.names[n].len()
    }

    pub fn names(&self, n: usize) -> &[String] {
        &self.names[n]
    }

    pub fn name(&self, n: usize, cell: usize) -> &str {
        &self.names[n][cell]
    }

    pub fn cell(&self, n: usize, name: &str) -> Option<usize> {
        self.lookup.get(n)?.get(name).copied()
    }

    #[inline]
    pub fn face(&self, n: usize, i: usize, cell: usize) -> usize {
        self.face[n][i][cell]
    }

    #[inline]
    pub fn degen(&self, n: usize, i: usize, cell: usize) -> usize {
        self.degen[n][i][cell]
    }

    pub fn is_degenerate(&self, n: usize, cell: usize) -> bool {
        self.degenerate[n][cell]
    }

    pub fn nondegenerate(&self, n: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len(n)).filter(move |&c| !self.degenerate[n][c])
    }

    pub fn nondegenerate_count(&self) -> usize {
        (0..=self.trunc_level).map(|n| self.nondegenerate(n).count()).sum()
    }

    /// Pulls an `n`-cell back along the monotone map `[alpha.len()-1] -> [n]`
    /// given by its value sequence.
    pub fn pullback(&self, n: usize, cell: usize, alpha: &[usize]) -> usize {
        debug_assert!(alpha.windows(2).all(|w| w[0] <= w[1]));
        debug_assert!(alpha.iter().all(|&a| a <= n));
        // Injective part: drop the vertices outside the image, largest first.
        let mut image: Vec<usize> = alpha.to_vec();
        image.dedup();
        let mut cur = cell;
        let mut dim = n;
        for j in (0..=n).rev() {
            if image.binary_search(&j).is_err() {
                cur = self.face(dim, j, cur);
                dim -= 1;
            }
        }
        // Surjective part: repeat vertices, left to right.
        for j in 0..alpha.len().saturating_sub(1) {
            if alpha[j] == alpha[j + 1] {
                cur = self.degen(dim, j, cur);
                dim += 1;
            }
        }
        cur
    }

    /// The `j`-th vertex of an `n`-cell.
    pub fn vertex(&self, n: usize, cell: usize, j: usize) -> usize {
        self.pullback(n, cell, &[j])
    }

    pub fn vertices(&self, n: usize, cell: usize) -> Vec<usize> {
        (0..=n).map(|j| self.vertex(n, cell, j)).collect()
    }

    /// The edge of an `n`-cell spanned by its vertices `i <= j`.
    pub fn edge(&self, n: usize, cell: usize, i: usize, j: usize) -> usize {
        self.pullback(n, cell, &[i, j])
    }

    /// Source (`d1`) of an edge.
    pub fn edge_source(&self, edge: usize) -> usize {
        self.face(1, 1, edge)
    }

    /// Target (`d0`) of an edge.
    pub fn edge_target(&self, edge: usize) -> usize {
        self.face(1, 0, edge)
    }

    /// Checks every simplicial identity that is defined within the
    /// truncation and lists each failing instance.
    pub fn validate(&self) -> ValidationReport {
        let mut out = Vec::new();
        let l = self.trunc_level;
        let mut push = |identity: String, dimension: usize, cell: usize| {
            out.push(Violation { identity, dimension, simplex: self.names[dimension][cell].clone() });
        };
        for n in 2..=l {
            for c in 0..self.len(n) {
                for j in 1..=n {
                    for i in 0..j {
                        let lhs = self.face(n - 1, i, self.face(n, j, c));
                        let rhs = self.face(n - 1, j - 1, self.face(n, i, c));
                        if lhs != rhs {
                            push(format!("d{i}d{j}=d{}d{i}", j - 1), n, c);
                        }
                    }
                }
            }
        }
        for n in 0..l.saturating_sub(1) {
            for c in 0..self.len(n) {
                for j in 0..=n {
                    for i in 0..=j {
                        let lhs = self.degen(n + 1, i, self.degen(n, j, c));
                        let rhs = self.degen(n + 1, j + 1, self.degen(n, i, c));
                        if lhs != rhs {
                            push(format!("s{i}s{j}=s{}s{i}", j + 1), n, c);
                        }
                    }
                }
            }
        }
        for n in 0..l {
            for c in 0..self.len(n) {
                for j in 0..=n {
                    let up = self.degen(n, j, c);
                    for i in 0..=n + 1 {
                        let lhs = self.face(n + 1, i, up);
                        let (rhs, name) = if i == j || i == j + 1 {
                            (c, format!("d{i}s{j}=id"))
                        } else if i < j {
                            (self.degen(n - 1, j - 1, self.face(n, i, c)), format!("d{i}s{j}=s{}d{i}", j - 1))
                        } else {
                            (self.degen(n - 1, j, self.face(n, i - 1, c)), format!("d{i}s{j}=s{j}d{}", i - 1))
                        };
                        if lhs != rhs {
                            push(name, n, c);
                        }
                    }
                }
            }
        }
        ValidationReport::from_violations(out)
    }

    /// Eilenberg-Zilber decomposition of an `n`-cell.
    pub fn ez_core(&self, n: usize, cell: usize) -> Result<EzDecomposition, SsetError> {
        if n > self.trunc_level || cell >= self.len(n) {
            return Err(SsetError::IndexOutOfRange { dim: n, index: cell });
        }
        if !self.degenerate[n][cell] {
            return Ok(EzDecomposition { epi: (0..=n).collect(), core_dim: n, core: cell });
        }
        let mut result: Option<EzDecomposition> = None;
        for i in 0..n {
            let lower = self.face(n, i, cell);
            if self.degen(n - 1, i, lower) != cell {
                continue;
            }
            let below = self.ez_core(n - 1, lower)?;
            // cell = s_i(lower); precompose the lower epi with sigma^i.
            let epi: Vec<usize> =
                (0..=n).map(|t| below.epi[if t <= i { t } else { t - 1 }]).collect();
            let candidate = EzDecomposition { epi, ..below };
            match &result {
                None => result = Some(candidate),
                Some(prev) if *prev != candidate => {
                    return Err(SsetError::Inconsistent(format!(
                        "{n}-cell `{}` has two distinct Eilenberg-Zilber decompositions",
                        self.names[n][cell]
                    )))
                }
                Some(_) => {}
            }
        }
        result.ok_or_else(|| {
            SsetError::Inconsistent(format!(
                "{n}-cell `{}` is flagged degenerate but is not s_i d_i of itself for any i",
                self.names[n][cell]
            ))
        })
    }

    /// Nondegenerate edges as `(edge, source, target)`.
    pub fn nondegenerate_edges(&self) -> Vec<(usize, usize, usize)> {
        self.nondegenerate(1).map(|e| (e, self.edge_source(e), self.edge_target(e))).collect()
    }

    /// Longest path in the graph of nondegenerate edges, or `None` when the
    /// graph has a directed cycle.
    pub fn longest_nondegenerate_path(&self) -> Option<usize> {
        let nv = self.len(0);
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); nv];
        let mut indeg = vec![0usize; nv];
        for (_, s, t) in self.nondegenerate_edges() {
            out[s].push(t);
            indeg[t] += 1;
        }
        let mut order: Vec<usize> = (0..nv).filter(|&v| indeg[v] == 0).collect();
        let mut head = 0;
        let mut longest = vec![0usize; nv];
        while head < order.len() {
            let v = order[head];
            head += 1;
            for &w in &out[v] {
                longest[w] = longest[w].max(longest[v] + 1);
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    order.push(w);
                }
            }
        }
        (order.len() == nv).then(|| longest.into_iter().max().unwrap_or(0))
    }

    pub fn is_acyclic(&self) -> bool {
        self.longest_nondegenerate_path().is_some()
    }
}

/// Level-wise map of truncated simplicial sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SSetMap {
    source: Arc<TruncatedSSet>,
    target: Arc<TruncatedSSet>,
    levels: Vec<Vec<usize>>,
}

impl SSetMap {
    pub fn new(
        source: Arc<TruncatedSSet>,
        target: Arc<TruncatedSSet>,
        levels: Vec<Vec<usize>>,
    ) -> Result<Self, SsetError> {
        if source.trunc_level != target.trunc_level {
            return Err(SsetError::MismatchedTruncation {
                left: source.trunc_level,
                right: target.trunc_level,
            });
        }
        if levels.len() != source.trunc_level + 1 {
            return Err(SsetError::InvalidArgument("one level map per dimension required".into()));
        }
        for (n, level) in levels.iter().enumerate() {
            if level.len() != source.len(n) {
                return Err(SsetError::BadTable { kind: "level", dim: n, index: level.len() });
            }
            if let Some(&bad) = level.iter().find(|&&t| t >= target.len(n)) {
                return Err(SsetError::IndexOutOfRange { dim: n, index: bad });
            }
        }
        Ok(SSetMap { source, target, levels })
    }

    /// Builds a map from a function on cells; the result still needs
    /// [`check`](SSetMap::check) when the function is not known to commute.
    pub fn from_fn(
        source: Arc<TruncatedSSet>,
        target: Arc<TruncatedSSet>,
        f: impl Fn(usize, usize) -> usize,
    ) -> Result<Self, SsetError> {
        let levels =
            (0..=source.trunc_level).map(|n| (0..source.len(n)).map(|c| f(n, c)).collect()).collect();
        Self::new(source, target, levels)
    }

    pub fn identity(x: Arc<TruncatedSSet>) -> Self {
        let levels = (0..=x.trunc_level).map(|n| (0..x.len(n)).collect()).collect();
        SSetMap { source: x.clone(), target: x, levels }
    }

    pub fn source(&self) -> &Arc<TruncatedSSet> {
        &self.source
    }

    pub fn target(&self) -> &Arc<TruncatedSSet> {
        &self.target
    }

    pub fn levels(&self) -> &[Vec<usize>] {
        &self.levels
    }

    #[inline]
    pub fn apply(&self, n: usize, cell: usize) -> usize {
        self.levels[n][cell]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &SSetMap) -> Result<SSetMap, SsetError> {
        if self.target != other.source {
            return Err(SsetError::InvalidArgument("maps are not composable".into()));
        }
        let levels = self
            .levels
            .iter()
            .enumerate()
            .map(|(n, level)| level.iter().map(|&c| other.levels[n][c]).collect())
            .collect();
        Ok(SSetMap { source: self.source.clone(), target: other.target.clone(), levels })
    }

    /// Checks commutation with every stored face and degeneracy.
    pub fn check(&self) -> ValidationReport {
        let (s, t) = (&*self.source, &*self.target);
        let mut out = Vec::new();
        for n in 0..=s.trunc_level {
            for c in 0..s.len(n) {
                let fc = self.levels[n][c];
                if n > 0 {
                    for i in 0..=n {
                        if self.levels[n - 1][s.face(n, i, c)] != t.face(n, i, fc) {
                            out.push(Violation {
                                identity: format!("f d{i} = d{i} f"),
                                dimension: n,
                                simplex: s.names[n][c].clone(),
                            });
                        }
                    }
                }
                if n < s.trunc_level {
                    for i in 0..=n {
                        if self.levels[n + 1][s.degen(n, i, c)] != t.degen(n, i, fc) {
                            out.push(Violation {
                                identity: format!("f s{i} = s{i} f"),
                                dimension: n,
                                simplex: s.names[n][c].clone(),
                            });
                        }
                    }
                }
            }
        }
        ValidationReport::from_violations(out)
    }

    pub fn is_levelwise_bijective(&self) -> bool {
        self.levels.iter().enumerate().all(|(n, level)| is_bijection(level, self.target.len(n)))
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_levelwise_bijective() && self.check().ok
    }
}

pub(crate) fn is_bijection(map: &[usize], codomain: usize) -> bool {
    if map.len() != codomain {
        return false;
    }
    let mut seen = vec![false; codomain];
    for &m in map {
        if m >= codomain || std::mem::replace(&mut seen[m], true) {
            return false;
        }
    }
    true
}

/// Opaque name of a vertex sequence, e.g. `012`.
pub(crate) fn sequence_name(seq: &[usize]) -> String {
    if seq.iter().all(|&v| v < 10) {
        seq.iter().map(|&v| char::from(b'0' + v as u8)).collect()
    } else {
        seq.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(".")
    }
}

/// Monotone sequences of length `k+1` with values in `0..=n`.
pub(crate) fn monotone_sequences(k: usize, n: usize) -> Vec<Vec<usize>> {
    fn go(k: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k + 1 {
            out.push(cur.clone());
            return;
        }
        let lo = cur.last().copied().unwrap_or(0);
        for v in lo..=n {
            cur.push(v);
            go(k, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(k, n, &mut Vec::new(), &mut out);
    out
}

fn delete_at(seq: &[usize], i: usize) -> Vec<usize> {
    let mut v = seq.to_vec();
    v.remove(i);
    v
}

fn repeat_at(seq: &[usize], i: usize) -> Vec<usize> {
    let mut v = seq.to_vec();
    v.insert(i, seq[i]);
    v
}

/// Simplicial set whose `k`-cells are the monotone sequences satisfying
/// `keep`; `keep` must be closed under subsequences and repetitions.
fn sequence_sset(
    n: usize,
    trunc_level: usize,
    keep: impl Fn(&[usize]) -> bool,
) -> Result<TruncatedSSet, SsetError> {
    let cells: Vec<Vec<Vec<usize>>> = (0..=trunc_level)
        .map(|k| monotone_sequences(k, n).into_iter().filter(|s| keep(s)).collect())
        .collect();
    TruncatedSSet::from_keyed(
        trunc_level,
        cells,
        |_, s| sequence_name(s),
        |_, i, s| delete_at(s, i),
        |_, i, s| repeat_at(s, i),
    )
}

/// The standard simplex `Δⁿ`.
pub fn standard_simplex(n: usize, trunc_level: usize) -> Result<TruncatedSSet, SsetError> {
    sequence_sset(n, trunc_level, |_| true)
}

fn image_size(seq: &[usize]) -> usize {
    let mut v = seq.to_vec();
    v.dedup();
    v.len()
}

pub fn boundary(n: usize, trunc_level: usize) -> Result<TruncatedSSet, SsetError> {
    if n == 0 {
        return Err(SsetError::InvalidArgument("boundary requires n >= 1".into()));
    }
    sequence_sset(n, trunc_level, |s| image_size(s) < n + 1)
}

pub fn horn(n: usize, k: usize, trunc_level: usize) -> Result<TruncatedSSet, SsetError> {
    if n == 0 || k > n {
        return Err(SsetError::InvalidArgument(format!("horn({n},{k}) requires 0 <= k <= n, n >= 1")));
    }
    sequence_sset(n, trunc_level, |s| {
        let covered = (0..=n).filter(|&v| v != k && s.contains(&v)).count();
        covered < n
    })
}

pub fn spine(n: usize, trunc_level: usize) -> Result<TruncatedSSet, SsetError> {
    if n == 0 {
        return Err(SsetError::InvalidArgument("spine requires n >= 1".into()));
    }
    sequence_sset(n, trunc_level, |s| s[s.len() - 1] - s[0] <= 1)
}

/// Disjoint union of `count` points.
pub fn discrete(count: usize, trunc_level: usize) -> Result<TruncatedSSet, SsetError> {
    let cells = (0..=trunc_level).map(|_| (0..count).collect::<Vec<_>>()).collect();
    TruncatedSSet::from_keyed(trunc_level, cells, |_, &p| format!("p{p}"), |_, _, &p| p, |_, _, &p| p)
}

/// Chains of `n >= 1` composable arrows in the order used by
/// [`nerve_of_category`].
pub fn composable_chains(cat: &ExplicitFinCategory, n: usize) -> Vec<Vec<usize>> {
    let mut chains: Vec<Vec<usize>> = (0..cat.arrow_count()).map(|a| vec![a]).collect();
    for _ in 1..n {
        let mut next = Vec::new();
        for ch in &chains {
            for &g in cat.arrows_from(cat.target(*ch.last().unwrap())) {
                let mut c = ch.clone();
                c.push(g);
                next.push(c);
            }
        }
        chains = next;
    }
    chains
}

/// Escapes the separators `;` and `|` and the escape `\` itself.
pub(crate) fn escape_name(name: &str) -> String {
    let mut out = String::with_capacity(name.len());
    for ch in name.chars() {
        if matches!(ch, ';' | '|' | '\\') {
            out.push('\\');
        }
        out.push(ch);
    }
    out
}

/// The name of a chain of arrows. A single arrow keeps its own name,
/// longer chains join escaped names by `;`, so distinct chains of one
/// length never share a name.
pub(crate) fn chain_name<'a>(names: impl IntoIterator<Item = &'a str>) -> String {
    let names: Vec<&str> = names.into_iter().collect();
    if let [one] = names[..] {
        return one.to_string();
    }
    names.iter().map(|n| escape_name(n)).collect::<Vec<_>>().join(";")
}

/// Nerve of a finite category: `n`-cells are composable chains of `n`
/// arrows, vertex 0 being the source of the first arrow.
pub fn nerve_of_category(
    cat: &ExplicitFinCategory,
    trunc_level: usize,
) -> Result<TruncatedSSet, SsetError> {
    #[derive(Clone, PartialEq, Eq, Hash)]
    enum Chain {
        Object(usize),
        Arrows(Vec<usize>),
    }
    let mut cells: Vec<Vec<Chain>> = vec![(0..cat.object_count()).map(Chain::Object).collect()];
    for n in 1..=trunc_level {
        cells.push(composable_chains(cat, n).into_iter().map(Chain::Arrows).collect());
    }
    let arrows = |c: &Chain| match c {
        Chain::Arrows(a) => a.clone(),
        Chain::Object(_) => unreachable!(),
    };
    TruncatedSSet::from_keyed(
        trunc_level,
        cells,
        |_, c| match c {
            Chain::Object(o) => cat.object_name(*o).to_string(),
            Chain::Arrows(a) => chain_name(a.iter().map(|&f| cat.arrow_name(f))),
        },
        |n, i, c| {
            let a = arrows(c);
            if n == 1 {
                return Chain::Object(if i == 0 { cat.target(a[0]) } else { cat.source(a[0]) });
            }
            let mut out = a.clone();
            if i == 0 {
                out.remove(0);
            } else if i == n {
                out.pop();
            } else {
                let composite = cat.compose(a[i - 1], a[i]).expect("chain is composable");
                out.splice(i - 1..=i, [composite]);
            }
            Chain::Arrows(out)
        },
        |n, i, c| match c {
            Chain::Object(o) => Chain::Arrows(vec![cat.identity(*o)]),
            Chain::Arrows(a) => {
                let obj = if i == 0 { cat.source(a[0]) } else { cat.target(a[i - 1]) };
                let _ = n;
                let mut out = a.clone();
                out.insert(i, cat.identity(obj));
                Chain::Arrows(out)
            }
        },
    )
}

/// Level-wise product.
pub fn product(x: &TruncatedSSet, y: &TruncatedSSet) -> Result<TruncatedSSet, SsetError> {
    if x.trunc_level != y.trunc_level {
        return Err(SsetError::MismatchedTruncation { left: x.trunc_level, right: y.trunc_level });
    }
    let cells = (0..=x.trunc_level)
        .map(|n| {
            (0..x.len(n)).flat_map(|a| (0..y.len(n)).map(move |b| (a, b))).collect::<Vec<_>>()
        })
        .collect();
    TruncatedSSet::from_keyed(
        x.trunc_level,
        cells,
        |n, &(a, b)| format!("({},{})", x.name(n, a), y.name(n, b)),
        |n, i, &(a, b)| (x.face(n, i, a), y.face(n, i, b)),
        |n, i, &(a, b)| (x.degen(n, i, a), y.degen(n, i, b)),
    )
}

/// Projection of a product onto its first or second factor.
pub fn product_projection(
    x: &Arc<TruncatedSSet>,
    y: &Arc<TruncatedSSet>,
    prod: &Arc<TruncatedSSet>,
    first: bool,
) -> Result<SSetMap, SsetError> {
    let target = if first { x.clone() } else { y.clone() };
    SSetMap::from_fn(prod.clone(), target, |n, c| if first { c / y.len(n) } else { c % y.len(n) })
}

/// Reference to a lower cell used as a face: the cell `epi^*(core)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceRef {
    pub core_dim: usize,
    pub core: usize,
    pub epi: Vec<usize>,
}

impl FaceRef {
    pub fn nondegenerate(dim: usize, core: usize) -> Self {
        FaceRef { core_dim: dim, core, epi: (0..=dim).collect() }
    }

    pub fn degenerate(core_dim: usize, core: usize, epi: Vec<usize>) -> Self {
        FaceRef { core_dim, core, epi }
    }
}

/// Builds a simplicial set from its nondegenerate simplices and their faces;
/// degenerate cells are generated freely up to the truncation level.
#[derive(Clone, Debug)]
pub struct NondegenerateBuilder {
    trunc_level: usize,
    simplices: Vec<Vec<(String, Vec<FaceRef>)>>,
}

impl NondegenerateBuilder {
    pub fn new(trunc_level: usize) -> Self {
        NondegenerateBuilder { trunc_level, simplices: vec![Vec::new(); trunc_level + 1] }
    }

    pub fn vertex(&mut self, name: impl Into<String>) -> usize {
        self.simplices[0].push((name.into(), Vec::new()));
        self.simplices[0].len() - 1
    }

    /// Adds a nondegenerate simplex of dimension `faces.len() - 1`.
    pub fn simplex(&mut self, name: impl Into<String>, faces: Vec<FaceRef>) -> Result<usize, SsetError> {
        let m = faces.len().checked_sub(1).filter(|&m| m >= 1).ok_or_else(|| {
            SsetError::InvalidArgument("a positive-dimensional simplex needs at least two faces".into())
        })?;
        if m > self.trunc_level {
            return Err(SsetError::InvalidArgument(format!("dimension {m} exceeds truncation")));
        }
        for f in &faces {
            let surjective = f.epi.len() == m
                && f.epi.first() == Some(&0)
                && f.epi.windows(2).all(|w| w[1] == w[0] || w[1] == w[0] + 1)
                && f.epi.last() == Some(&f.core_dim);
            if !surjective || f.core >= self.simplices.get(f.core_dim).map_or(0, |l| l.len()) {
                return Err(SsetError::InvalidArgument(format!("bad face reference {f:?}")));
            }
        }
        self.simplices[m].push((name.into(), faces));
        Ok(self.simplices[m].len() - 1)
    }

    pub fn build(&self) -> Result<TruncatedSSet, SsetError> {
        // Key: (epi [k] ->> [m], m, nondegenerate index).
        type Key = (Vec<usize>, usize, usize);
        let l = self.trunc_level;
        let mut cells: Vec<Vec<Key>> = Vec::with_capacity(l + 1);
        for k in 0..=l {
            let mut level = Vec::new();
            for m in 0..=k {
                for epi in monotone_sequences(k, m) {
                    if image_size(&epi) != m + 1 {
                        continue;
                    }
                    for idx in 0..self.simplices[m].len() {
                        level.push((epi.clone(), m, idx));
                    }
                }
            }
            cells.push(level);
        }
        let face = |_n: usize, i: usize, key: &Key| -> Key {
            let (epi, m, idx) = key;
            let seq = delete_at(epi, i);
            let missing = (0..=*m).find(|v| !seq.contains(v));
            match missing {
                None => (seq, *m, *idx),
                Some(j) => {
                    let lowered: Vec<usize> = seq.iter().map(|&v| if v > j { v - 1 } else { v }).collect();
                    let f = &self.simplices[*m][*idx].1[j];
                    let composed = lowered.iter().map(|&v| f.epi[v]).collect();
                    (composed, f.core_dim, f.core)
                }
            }
        };
        TruncatedSSet::from_keyed(
            l,
            cells,
            |_, (epi, m, idx)| {
                let name = &self.simplices[*m][*idx].0;
                if epi.len() == m + 1 {
                    name.clone()
                } else {
                    format!("{name}[{}]", sequence_name(epi))
                }
            },
            face,
            |_, i, (epi, m, idx)| (repeat_at(epi, i), *m, *idx),
        )
    }
}

/// The circle: one vertex, one nondegenerate loop.
pub fn circle(trunc_level: usize) -> Result<TruncatedSSet, SsetError> {
    let mut b = NondegenerateBuilder::new(trunc_level);
    let v = b.vertex("*");
    b.simplex("t", vec![FaceRef::nondegenerate(0, v), FaceRef::nondegenerate(0, v)])?;
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_names_are_injective() {
        assert_ne!(chain_name(["f;g", "h"]), chain_name(["f", "g;h"]));
        assert_ne!(chain_name(["f\\", "g"]), chain_name(["f", "\\g"]));
        assert_eq!(chain_name(["f", "g"]), "f;g");
        assert_eq!(chain_name(["f;g"]), "f;g");
        let c = crate::io::category_from_str(
            r#"{"objects": ["0", "1", "2", "3"],
                "arrows": [{"name": "f", "source": "0", "target": "1"}, {"name": "g", "source": "1", "target": "2"},
                           {"name": "h", "source": "2", "target": "3"}, {"name": "f;g", "source": "0", "target": "2"},
                           {"name": "g;h", "source": "1", "target": "3"}, {"name": "fgh", "source": "0", "target": "3"}],
                "compose": [["f", "g", "f;g"], ["g", "h", "g;h"], ["f;g", "h", "fgh"], ["f", "g;h", "fgh"]]}"#,
        );
        let n = nerve_of_category(&c.unwrap(), 2).unwrap();
        assert!(n.validate().ok);
    }

    #[test]
    fn standard_simplex_counts() {
        let d1 = standard_simplex(1, 2).unwrap();
        assert_eq!((d1.len(0), d1.len(1), d1.len(2)), (2, 3, 4));
        let d0 = standard_simplex(0, 2).unwrap();
        assert_eq!((d0.len(0), d0.len(1), d0.len(2)), (1, 1, 1));
        assert!(d0.is_degenerate(1, 0) && d0.is_degenerate(2, 0));
        let d2 = standard_simplex(2, 2).unwrap();
        assert_eq!(d2.len(2), 10);
        assert!(d2.validate().ok);
    }

    #[test]
    fn swapped_long_edge_faces_are_reported() {
        let d2 = standard_simplex(2, 2).unwrap();
        let (names, mut face, degen) = (d2.names.clone(), d2.face.clone(), d2.degen.clone());
        let long = d2.cell(1, "02").unwrap();
        let (a, b) = (face[1][0][long], face[1][1][long]);
        face[1][0][long] = b;
        face[1][1][long] = a;
        let bad = TruncatedSSet::from_tables(2, names, face, degen).unwrap();
        let report = bad.validate();
        assert!(!report.ok);
        let on_top: Vec<&str> = report
            .violations
            .iter()
            .filter(|v| v.simplex == "012")
            .map(|v| v.identity.as_str())
            .collect();
        assert_eq!(on_top, vec!["d0d1=d0d0", "d1d2=d1d1"]);
    }

    #[test]
    fn subsets_of_the_simplex() {
        let b2 = boundary(2, 2).unwrap();
        assert_eq!(b2.nondegenerate(2).count(), 0);
        assert_eq!(b2.nondegenerate(1).count(), 3);
        let h = horn(2, 1, 2).unwrap();
        let edges: Vec<&str> = h.nondegenerate(1).map(|e| h.name(1, e)).collect();
        assert_eq!(edges, vec!["01", "12"]);
        let s = spine(3, 3).unwrap();
        assert_eq!(s.len(0), 4);
        let edges: Vec<&str> = s.nondegenerate(1).map(|e| s.name(1, e)).collect();
        assert_eq!(edges, vec!["01", "12", "23"]);
        for x in [b2, h, s] {
            assert!(x.validate().ok);
        }
        assert!(horn(2, 3, 2).is_err());
        assert!(boundary(0, 2).is_err());
    }

    #[test]
    fn ez_examples() {
        let d0 = standard_simplex(0, 2).unwrap();
        let v = 0;
        let s0v = d0.degen(0, 0, v);
        assert_eq!(d0.ez_core(1, s0v).unwrap(), EzDecomposition { epi: vec![0, 0], core_dim: 0, core: v });
        let s1s0v = d0.degen(1, 1, s0v);
        assert_eq!(d0.ez_core(2, s1s0v).unwrap().epi, vec![0, 0, 0]);
        let d2 = standard_simplex(2, 3).unwrap();
        let top = d2.cell(2, "012").unwrap();
        assert_eq!(d2.ez_core(2, top).unwrap().core, top);
        let c = d2.cell(3, "0112").unwrap();
        let ez = d2.ez_core(3, c).unwrap();
        assert_eq!((ez.epi, ez.core_dim, ez.core), (vec![0, 1, 1, 2], 2, top));
    }

    #[test]
    fn product_of_intervals() {
        let d1 = standard_simplex(1, 2).unwrap();
        let p = product(&d1, &d1).unwrap();
        assert_eq!(p.len(0), 4);
        assert_eq!(p.len(1), 9);
        assert_eq!(p.nondegenerate(1).count(), 5);
        assert!(p.validate().ok);
        assert!(product(&d1, &standard_simplex(1, 3).unwrap()).is_err());
    }

    #[test]
    fn builder_with_collapsed_edge() {
        // Δ² with its last edge collapsed to a point.
        let mut b = NondegenerateBuilder::new(3);
        let x = b.vertex("x");
        let y = b.vertex("y");
        let f = b.simplex("f", vec![FaceRef::nondegenerate(0, y), FaceRef::nondegenerate(0, x)]).unwrap();
        let g = b.simplex("g", vec![FaceRef::nondegenerate(0, y), FaceRef::nondegenerate(0, x)]).unwrap();
        b.simplex(
            "s",
            vec![
                FaceRef::degenerate(0, y, vec![0, 0]),
                FaceRef::nondegenerate(1, g),
                FaceRef::nondegenerate(1, f),
            ],
        )
        .unwrap();
        let s = b.build().unwrap();
        assert!(s.validate().ok, "{:?}", s.validate());
        assert_eq!(s.nondegenerate_count(), 5);
        let c = circle(3).unwrap();
        assert!(c.validate().ok);
        assert_eq!(c.longest_nondegenerate_path(), None);
    }
}
