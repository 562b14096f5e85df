//! JSON file formats and builtin input specs.
//!
//! Simplicial sets come in two shapes. The full form lists every cell:
//!
//! ```json
//! {"trunc_level": 2,
//!  "cells": {"0": ["a", "b"], "1": ["aa", "ab", "bb"], "2": ["aaa", "aab", "abb", "bbb"]},
//!  "face":  {"1:0": {"aa": "a", "ab": "b", "bb": "b"}, "...": {}},
//!  "degen": {"0:0": {"a": "aa", "b": "bb"}, "...": {}}}
//! ```
//!
//! The compact form lists nondegenerate simplices with their faces in
//! `d0, d1, ...` order; `v[00]` names the degeneracy of `v` along the
//! surjection with value sequence `00`:
//!
//! ```json
//! {"trunc_level": 2,
//!  "nondegenerate": {"0": ["u", "v"], "1": {"f": ["v", "u"], "g": ["v", "u"]},
//!                    "2": {"s": ["v[00]", "g", "f"]}}}
//! ```
//!
//! Builtins such as `std:boundary:2` stand in for any simplicial set and
//! `cat:linear:2` for any category.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::category::{CategoryError, ExplicitFinCategory};
use crate::fibration::{FibrationError, Presheaf};
use crate::necklace::{realize, Necklace, NecklaceError};
use crate::sset::{
    boundary, circle, discrete, horn, nerve_of_category, spine, standard_simplex, FaceRef, NondegenerateBuilder,
    SSetMap, SsetError, TruncatedSSet,
};

/// Largest truncation level accepted from files and specs.
pub const MAX_TRUNC: usize = 8;
/// Largest simplex dimension accepted in builtin specs.
pub const MAX_BUILTIN_DIM: usize = 10;
/// Largest category size accepted in builtin specs.
pub const MAX_BUILTIN_OBJECTS: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("unknown builtin `{0}`")]
    Builtin(String),
    #[error(transparent)]
    Sset(#[from] SsetError),
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error(transparent)]
    Fibration(#[from] FibrationError),
    #[error(transparent)]
    Necklace(#[from] NecklaceError),
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        IoError::Json(e.to_string())
    }
}

fn schema<T>(msg: impl Into<String>) -> Result<T, IoError> {
    Err(IoError::Schema(msg.into()))
}

fn check_trunc(l: usize) -> Result<(), IoError> {
    if l > MAX_TRUNC {
        return schema(format!("trunc_level {l} exceeds the limit of {MAX_TRUNC}"));
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FullSSet {
    trunc_level: usize,
    cells: BTreeMap<String, Vec<String>>,
    face: BTreeMap<String, BTreeMap<String, String>>,
    degen: BTreeMap<String, BTreeMap<String, String>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CompactLevel {
    Vertices(Vec<String>),
    Simplices(BTreeMap<String, Vec<String>>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CompactSSet {
    trunc_level: usize,
    nondegenerate: BTreeMap<String, CompactLevel>,
}

fn dim_key(k: &str) -> Result<usize, IoError> {
    k.parse().or_else(|_| schema(format!("`{k}` is not a dimension")))
}

fn face_key(k: &str) -> Result<(usize, usize), IoError> {
    let bad = || IoError::Schema(format!("`{k}` is not of the form n:i"));
    let (n, i) = k.split_once(':').ok_or_else(bad)?;
    Ok((n.parse().map_err(|_| bad())?, i.parse().map_err(|_| bad())?))
}

/// Parses either simplicial-set form. The simplicial identities are not
/// checked here; see [`TruncatedSSet::validate`].
pub fn sset_from_value(v: &Value) -> Result<TruncatedSSet, IoError> {
    if v.get("nondegenerate").is_some() {
        compact_sset(serde_json::from_value(v.clone())?)
    } else {
        full_sset(serde_json::from_value(v.clone())?)
    }
}

pub fn sset_from_str(s: &str) -> Result<TruncatedSSet, IoError> {
    sset_from_value(&serde_json::from_str(s)?)
}

fn full_sset(f: FullSSet) -> Result<TruncatedSSet, IoError> {
    let l = f.trunc_level;
    check_trunc(l)?;
    let mut names = vec![Vec::new(); l + 1];
    for (k, cells) in f.cells {
        let n = dim_key(&k)?;
        if n > l {
            return schema(format!("cells listed in dimension {n} above trunc_level {l}"));
        }
        names[n] = cells;
    }
    let index: Vec<HashMap<&str, usize>> =
        names.iter().map(|lv| lv.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect()).collect();
    let table = |kind: &'static str,
                 raw: &BTreeMap<String, BTreeMap<String, String>>,
                 n: usize,
                 i: usize,
                 from: usize,
                 to: usize|
     -> Result<Vec<usize>, IoError> {
        let key = format!("{n}:{i}");
        let Some(m) = raw.get(&key) else {
            return schema(format!("missing {kind} table {key}"));
        };
        let mut out = vec![usize::MAX; names[from].len()];
        for (a, b) in m {
            let Some(&ai) = index[from].get(a.as_str()) else {
                return Err(SsetError::UnknownCell { dim: from, name: a.clone() }.into());
            };
            let Some(&bi) = index[to].get(b.as_str()) else {
                return Err(SsetError::UnknownCell { dim: to, name: b.clone() }.into());
            };
            out[ai] = bi;
        }
        if let Some(c) = out.iter().position(|&x| x == usize::MAX) {
            return schema(format!("{kind} table {key} has no entry for `{}`", names[from][c]));
        }
        Ok(out)
    };
    for key in f.face.keys().chain(f.degen.keys()) {
        face_key(key)?;
    }
    let mut face = vec![Vec::new(); l + 1];
    let mut degen = vec![Vec::new(); l + 1];
    for n in 0..=l {
        if n > 0 {
            for i in 0..=n {
                face[n].push(table("face", &f.face, n, i, n, n - 1)?);
            }
        }
        if n < l {
            for i in 0..=n {
                degen[n].push(table("degen", &f.degen, n, i, n, n + 1)?);
            }
        }
    }
    let expected = (1..=l).map(|n| n + 1).sum::<usize>();
    if f.face.len() != expected {
        return schema("face tables outside 1 <= n <= trunc_level, 0 <= i <= n");
    }
    if f.degen.len() != (0..l).map(|n| n + 1).sum::<usize>() {
        return schema("degen tables outside 0 <= n < trunc_level, 0 <= i <= n");
    }
    Ok(TruncatedSSet::from_tables(l, names, face, degen)?)
}

/// Parses `name` or `name[seq]` into a face reference.
fn face_ref(
    s: &str,
    expected_dim: usize,
    index: &[HashMap<String, usize>],
) -> Result<FaceRef, IoError> {
    let (core, epi) = match s.strip_suffix(']').and_then(|t| t.split_once('[')) {
        None => (s, None),
        Some((core, seq)) => {
            let vals: Option<Vec<usize>> = if seq.contains('.') {
                seq.split('.').map(|p| p.parse().ok()).collect()
            } else {
                seq.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect()
            };
            let Some(vals) = vals else { return schema(format!("bad degeneracy sequence in `{s}`")) };
            (core, Some(vals))
        }
    };
    let core_dim = match &epi {
        None => expected_dim,
        Some(e) => match e.last() {
            Some(&d) if e.len() == expected_dim + 1 && d <= expected_dim => d,
            _ => return schema(format!("`{s}` is not a face of dimension {expected_dim}")),
        },
    };
    let Some(&idx) = index.get(core_dim).and_then(|m| m.get(core)) else {
        return Err(SsetError::UnknownCell { dim: core_dim, name: core.to_string() }.into());
    };
    Ok(match epi {
        None => FaceRef::nondegenerate(core_dim, idx),
        Some(e) => FaceRef::degenerate(core_dim, idx, e),
    })
}

fn compact_sset(c: CompactSSet) -> Result<TruncatedSSet, IoError> {
    let l = c.trunc_level;
    check_trunc(l)?;
    let mut levels: Vec<Option<CompactLevel>> = (0..=l).map(|_| None).collect();
    for (k, lv) in c.nondegenerate {
        let n = dim_key(&k)?;
        if n > l {
            return schema(format!("simplices listed in dimension {n} above trunc_level {l}"));
        }
        levels[n] = Some(lv);
    }
    let mut b = NondegenerateBuilder::new(l);
    let mut index: Vec<HashMap<String, usize>> = vec![HashMap::new(); l + 1];
    for (n, lv) in levels.into_iter().enumerate() {
        match (n, lv) {
            (_, None) => {}
            (0, Some(CompactLevel::Vertices(vs))) => {
                for v in vs {
                    if index[0].contains_key(&v) {
                        return Err(SsetError::DuplicateCell { dim: 0, name: v }.into());
                    }
                    index[0].insert(v.clone(), b.vertex(v));
                }
            }
            (0, Some(CompactLevel::Simplices(_))) => return schema("vertices are given as a list"),
            (n, Some(CompactLevel::Simplices(m))) => {
                for (name, faces) in m {
                    if faces.len() != n + 1 {
                        return schema(format!("`{name}` needs {} faces", n + 1));
                    }
                    let refs = faces.iter().map(|f| face_ref(f, n - 1, &index)).collect::<Result<Vec<_>, _>>()?;
                    let idx = b.simplex(name.clone(), refs)?;
                    index[n].insert(name, idx);
                }
            }
            (_, Some(CompactLevel::Vertices(v))) if v.is_empty() => {}
            (n, Some(CompactLevel::Vertices(_))) => {
                return schema(format!("dimension {n} must map names to face lists"));
            }
        }
    }
    Ok(b.build()?)
}

/// Full-form JSON of a simplicial set.
pub fn sset_to_value(x: &TruncatedSSet) -> Value {
    let l = x.trunc_level();
    let mut cells = BTreeMap::new();
    let mut face = BTreeMap::new();
    let mut degen = BTreeMap::new();
    for n in 0..=l {
        cells.insert(n.to_string(), x.names(n).to_vec());
        if n > 0 {
            for i in 0..=n {
                let m = (0..x.len(n)).map(|c| (x.name(n, c).to_string(), x.name(n - 1, x.face(n, i, c)).to_string()));
                face.insert(format!("{n}:{i}"), m.collect::<BTreeMap<_, _>>());
            }
        }
        if n < l {
            for i in 0..=n {
                let m = (0..x.len(n)).map(|c| (x.name(n, c).to_string(), x.name(n + 1, x.degen(n, i, c)).to_string()));
                degen.insert(format!("{n}:{i}"), m.collect::<BTreeMap<_, _>>());
            }
        }
    }
    serde_json::to_value(FullSSet { trunc_level: l, cells, face, degen }).expect("serializable")
}

/// Resolves references to simplicial sets that appear as strings, such as
/// the `source` of a map file.
pub trait Resolver {
    fn resolve(&self, reference: &str) -> Result<TruncatedSSet, IoError>;
}

/// Resolver accepting only builtin specs.
pub struct BuiltinResolver {
    pub trunc_level: usize,
}

impl Resolver for BuiltinResolver {
    fn resolve(&self, reference: &str) -> Result<TruncatedSSet, IoError> {
        builtin_sset(reference, self.trunc_level)
    }
}

fn sset_field(v: &Value, field: &str, resolver: &dyn Resolver) -> Result<TruncatedSSet, IoError> {
    match v.get(field) {
        Some(Value::String(r)) => resolver.resolve(r),
        Some(inner @ Value::Object(_)) => sset_from_value(inner),
        _ => schema(format!("`{field}` must be an object or a reference string")),
    }
}

/// Parses a map file: `{"source": .., "target": .., "levels": {"0": {"a": "b"}}}`.
/// Commutation with faces and degeneracies is left to [`SSetMap::check`].
pub fn map_from_value(v: &Value, resolver: &dyn Resolver) -> Result<SSetMap, IoError> {
    let Some(obj) = v.as_object() else { return schema("a map must be an object") };
    if let Some(k) = obj.keys().find(|k| !matches!(k.as_str(), "source" | "target" | "levels")) {
        return schema(format!("unknown field `{k}`"));
    }
    let src = Arc::new(sset_field(v, "source", resolver)?);
    let tgt = Arc::new(sset_field(v, "target", resolver)?);
    let raw: BTreeMap<String, BTreeMap<String, String>> =
        serde_json::from_value(v.get("levels").cloned().unwrap_or(Value::Null))?;
    if src.trunc_level() != tgt.trunc_level() {
        return Err(SsetError::MismatchedTruncation { left: src.trunc_level(), right: tgt.trunc_level() }.into());
    }
    let mut levels = vec![Vec::new(); src.trunc_level() + 1];
    let mut given = vec![false; levels.len()];
    for (k, m) in &raw {
        let n = dim_key(k)?;
        if n >= levels.len() {
            return schema(format!("level {n} above trunc_level"));
        }
        let mut lv = vec![usize::MAX; src.len(n)];
        for (a, b) in m {
            let ai = src.cell(n, a).ok_or_else(|| SsetError::UnknownCell { dim: n, name: a.clone() })?;
            let bi = tgt.cell(n, b).ok_or_else(|| SsetError::UnknownCell { dim: n, name: b.clone() })?;
            lv[ai] = bi;
        }
        if let Some(c) = lv.iter().position(|&x| x == usize::MAX) {
            return schema(format!("level {n} has no entry for `{}`", src.name(n, c)));
        }
        levels[n] = lv;
        given[n] = true;
    }
    if let Some(n) = given.iter().position(|g| !g) {
        return schema(format!("missing level {n}"));
    }
    Ok(SSetMap::new(src, tgt, levels)?)
}

pub fn map_from_str(s: &str, resolver: &dyn Resolver) -> Result<SSetMap, IoError> {
    map_from_value(&serde_json::from_str(s)?, resolver)
}

/// Map with inline source and target.
pub fn map_to_value(f: &SSetMap) -> Value {
    let (s, t) = (f.source(), f.target());
    let levels: BTreeMap<String, BTreeMap<String, String>> = (0..=s.trunc_level())
        .map(|n| {
            let m = (0..s.len(n)).map(|c| (s.name(n, c).to_string(), t.name(n, f.apply(n, c)).to_string()));
            (n.to_string(), m.collect())
        })
        .collect();
    json!({"source": sset_to_value(s), "target": sset_to_value(t), "levels": levels})
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArrowSpec {
    name: String,
    source: String,
    target: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CategorySpec {
    objects: Vec<String>,
    arrows: Vec<ArrowSpec>,
    /// Missing identities are added as fresh arrows `id_<object>`.
    #[serde(default)]
    identities: BTreeMap<String, String>,
    /// `[first, second, composite]`; composites with identities may be
    /// omitted.
    #[serde(default)]
    compose: Vec<[String; 3]>,
}

/// Parses `{"objects": [..], "arrows": [{"name", "source", "target"}],
/// "identities": {obj: arrow}, "compose": [[first, second, composite]]}`
/// or a builtin string such as `cat:linear:2`.
pub fn category_from_value(v: &Value) -> Result<ExplicitFinCategory, IoError> {
    if let Value::String(s) = v {
        return builtin_category(s);
    }
    let spec: CategorySpec = serde_json::from_value(v.clone())?;
    let mut arrows: Vec<(String, String, String)> =
        spec.arrows.into_iter().map(|a| (a.name, a.source, a.target)).collect();
    let mut identities: Vec<(String, String)> = spec.identities.into_iter().collect();
    for o in &spec.objects {
        if !identities.iter().any(|(k, _)| k == o) {
            let name = format!("id_{o}");
            arrows.push((name.clone(), o.clone(), o.clone()));
            identities.push((o.clone(), name));
        }
    }
    let triples: Vec<(String, String, String)> =
        spec.compose.into_iter().map(|[f, g, h]| (f, g, h)).collect();
    Ok(ExplicitFinCategory::from_triples(spec.objects, arrows, identities, &triples)?)
}

pub fn category_from_str(s: &str) -> Result<ExplicitFinCategory, IoError> {
    category_from_value(&serde_json::from_str(s)?)
}

pub fn category_to_value(c: &ExplicitFinCategory) -> Value {
    let spec = CategorySpec {
        objects: c.objects().to_vec(),
        arrows: c
            .arrows()
            .iter()
            .map(|a| ArrowSpec {
                name: a.name.clone(),
                source: c.object_name(a.source).to_string(),
                target: c.object_name(a.target).to_string(),
            })
            .collect(),
        identities: (0..c.object_count())
            .map(|o| (c.object_name(o).to_string(), c.arrow_name(c.identity(o)).to_string()))
            .collect(),
        compose: c
            .triples()
            .filter(|&(f, g, _)| !c.is_identity(f) && !c.is_identity(g))
            .map(|(f, g, h)| [f, g, h].map(|a| c.arrow_name(a).to_string()))
            .collect(),
    };
    serde_json::to_value(spec).expect("serializable")
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PresheafSpec {
    category: Value,
    #[serde(default)]
    values: BTreeMap<String, Vec<String>>,
    /// `arrow -> {element of F(target) -> element of F(source)}`;
    /// identities may be omitted.
    #[serde(default)]
    action: BTreeMap<String, BTreeMap<String, String>>,
}

/// Parses `{"category": .., "values": {obj: [..]}, "action": {arrow: {x: y}}}`.
/// Objects without values get the empty set.
pub fn presheaf_from_value(v: &Value) -> Result<Presheaf, IoError> {
    let spec: PresheafSpec = serde_json::from_value(v.clone())?;
    let c = category_from_value(&spec.category)?;
    let mut values = vec![Vec::new(); c.object_count()];
    for (o, vals) in spec.values {
        let Some(i) = c.find_object(&o) else { return Err(CategoryError::UnknownObject(o).into()) };
        values[i] = vals;
    }
    let pos: Vec<HashMap<&str, usize>> =
        values.iter().map(|vs| vs.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect()).collect();
    let mut action: Vec<Option<Vec<usize>>> = vec![None; c.arrow_count()];
    for (a, m) in &spec.action {
        let Some(ai) = c.find_arrow(a) else { return Err(CategoryError::UnknownArrow(a.clone()).into()) };
        let (s, t) = (c.source(ai), c.target(ai));
        let mut table = vec![usize::MAX; values[t].len()];
        for (x, y) in m {
            match (pos[t].get(x.as_str()), pos[s].get(y.as_str())) {
                (Some(&xi), Some(&yi)) => table[xi] = yi,
                _ => return schema(format!("action of `{a}` mentions unknown element `{x}` or `{y}`")),
            }
        }
        if let Some(x) = table.iter().position(|&e| e == usize::MAX) {
            return schema(format!("action of `{a}` has no entry for `{}`", values[t][x]));
        }
        action[ai] = Some(table);
    }
    let action = action
        .into_iter()
        .enumerate()
        .map(|(a, t)| match t {
            Some(t) => Ok(t),
            None if c.is_identity(a) => Ok((0..values[c.target(a)].len()).collect()),
            None => schema(format!("missing action of `{}`", c.arrow_name(a))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Presheaf::new(c, values, action)?)
}

pub fn presheaf_from_str(s: &str) -> Result<Presheaf, IoError> {
    presheaf_from_value(&serde_json::from_str(s)?)
}

pub fn presheaf_to_value(f: &Presheaf) -> Value {
    let c = f.base();
    let values: BTreeMap<String, Vec<String>> =
        (0..c.object_count()).map(|o| (c.object_name(o).to_string(), f.values(o).to_vec())).collect();
    let action: BTreeMap<String, BTreeMap<String, String>> = (0..c.arrow_count())
        .filter(|&a| !c.is_identity(a))
        .map(|a| {
            let (s, t) = (c.source(a), c.target(a));
            let m = (0..f.values(t).len()).map(|x| (f.values(t)[x].clone(), f.values(s)[f.act(a, x)].clone()));
            (c.arrow_name(a).to_string(), m.collect())
        })
        .collect();
    json!({"category": category_to_value(c), "values": values, "action": action})
}

fn spec_number(spec: &str, part: Option<&str>, max: usize) -> Result<usize, IoError> {
    part.and_then(|p| p.parse::<usize>().ok())
        .filter(|&n| n <= max)
        .ok_or_else(|| IoError::Builtin(spec.to_string()))
}

/// Builtin categories: `cat:terminal`, `cat:linear:n`, `cat:discrete:n`,
/// `cat:cyclic:n`.
pub fn builtin_category(spec: &str) -> Result<ExplicitFinCategory, IoError> {
    let mut parts = spec.split(':');
    if parts.next() != Some("cat") {
        return Err(IoError::Builtin(spec.into()));
    }
    let kind = parts.next();
    let arg = parts.next();
    if parts.next().is_some() {
        return Err(IoError::Builtin(spec.into()));
    }
    Ok(match (kind, arg) {
        (Some("terminal"), None) => ExplicitFinCategory::terminal(),
        (Some("linear"), a) => ExplicitFinCategory::linear_order(spec_number(spec, a, MAX_BUILTIN_OBJECTS)?),
        (Some("discrete"), a) => ExplicitFinCategory::discrete(spec_number(spec, a, MAX_BUILTIN_OBJECTS)?),
        (Some("cyclic"), a) => {
            ExplicitFinCategory::cyclic_group(spec_number(spec, a, MAX_BUILTIN_OBJECTS)?.max(1))
        }
        _ => return Err(IoError::Builtin(spec.into())),
    })
}

/// Builtin simplicial sets: `std:simplex:n`, `std:boundary:n`,
/// `std:horn:n:k`, `std:spine:n`, `std:circle`, `std:point`,
/// `std:discrete:n`, `std:necklace:<literal>` and `std:nerve:<category>`.
pub fn builtin_sset(spec: &str, trunc_level: usize) -> Result<TruncatedSSet, IoError> {
    check_trunc(trunc_level)?;
    let Some(rest) = spec.strip_prefix("std:") else { return Err(IoError::Builtin(spec.into())) };
    if let Some(cat) = rest.strip_prefix("nerve:") {
        return Ok(nerve_of_category(&builtin_category(cat)?, trunc_level)?);
    }
    if let Some(lit) = rest.strip_prefix("necklace:") {
        let n: Necklace = lit.parse()?;
        if n.total() > MAX_BUILTIN_DIM {
            return Err(IoError::Builtin(spec.into()));
        }
        return Ok(realize(&n, trunc_level)?.sset);
    }
    let parts: Vec<&str> = rest.split(':').collect();
    let num = |i: usize| spec_number(spec, parts.get(i).copied(), MAX_BUILTIN_DIM);
    Ok(match (parts[0], parts.len()) {
        ("point", 1) => standard_simplex(0, trunc_level)?,
        ("circle", 1) => circle(trunc_level)?,
        ("simplex", 2) => standard_simplex(num(1)?, trunc_level)?,
        ("boundary", 2) => boundary(num(1)?, trunc_level)?,
        ("spine", 2) => spine(num(1)?, trunc_level)?,
        ("discrete", 2) => discrete(num(1)?, trunc_level)?,
        ("horn", 3) => {
            let (n, k) = (num(1)?, num(2)?);
            if k > n || n == 0 {
                return Err(IoError::Builtin(spec.into()));
            }
            horn(n, k, trunc_level)?
        }
        _ => return Err(IoError::Builtin(spec.into())),
    })
}
