//! Finite categories given by explicit composition tables.

use std::collections::HashMap;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CategoryError {
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("duplicate name `{0}`")]
    Duplicate(String),
    #[error("identity of `{0}` is not an endomorphism of it")]
    BadIdentity(String),
    #[error("no composite recorded for `{first}` then `{second}`")]
    MissingComposite { first: String, second: String },
    #[error("`{first}` then `{second}` is not composable")]
    NotComposable { first: String, second: String },
    #[error("composite of `{first}` then `{second}` has the wrong endpoints")]
    BadComposite { first: String, second: String },
    #[error("unit law fails for `{0}`")]
    Unit(String),
    #[error("associativity fails for `{0}`, `{1}`, `{2}`")]
    Associativity(String, String, String),
    #[error("functor check failed: {0}")]
    Functor(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// Finite category with every hom-set and composite materialized.
///
/// `compose(f, g)` is the composite "first `f`, then `g`", i.e. `g ∘ f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitFinCategory {
    objects: Vec<String>,
    arrows: Vec<Arrow>,
    identities: Vec<usize>,
    out: Vec<Vec<usize>>,
    into: Vec<Vec<usize>>,
    out_pos: Vec<usize>,
    comp: Vec<Vec<usize>>,
}

impl ExplicitFinCategory {
    /// Builds a category from a composition function. The result is
    /// validated (units and associativity are checked exhaustively).
    pub fn new(
        objects: Vec<String>,
        arrows: Vec<Arrow>,
        identities: Vec<usize>,
        mut compose: impl FnMut(usize, usize) -> Option<usize>,
    ) -> Result<Self, CategoryError> {
        let cat = Self::new_unchecked(objects, arrows, identities, &mut compose)?;
        cat.validate()?;
        Ok(cat)
    }

    fn new_unchecked(
        objects: Vec<String>,
        arrows: Vec<Arrow>,
        identities: Vec<usize>,
        compose: &mut impl FnMut(usize, usize) -> Option<usize>,
    ) -> Result<Self, CategoryError> {
        check_unique(objects.iter())?;
        check_unique(arrows.iter().map(|a| &a.name))?;
        let n_obj = objects.len();
        if identities.len() != n_obj {
            return Err(CategoryError::Functor("one identity per object required".into()));
        }
        let mut out = vec![Vec::new(); n_obj];
        let mut into = vec![Vec::new(); n_obj];
        let mut out_pos = vec![0; arrows.len()];
        for (i, a) in arrows.iter().enumerate() {
            if a.source >= n_obj || a.target >= n_obj {
                return Err(CategoryError::UnknownArrow(a.name.clone()));
            }
            out_pos[i] = out[a.source].len();
            out[a.source].push(i);
            into[a.target].push(i);
        }
        for (o, &id) in identities.iter().enumerate() {
            if id >= arrows.len() || arrows[id].source != o || arrows[id].target != o {
                return Err(CategoryError::BadIdentity(objects[o].clone()));
            }
        }
        let mut comp = Vec::with_capacity(arrows.len());
        for f in 0..arrows.len() {
            let mut row = Vec::with_capacity(out[arrows[f].target].len());
            for &g in &out[arrows[f].target] {
                let pair = || (arrows[f].name.clone(), arrows[g].name.clone());
                let h = compose(f, g).ok_or_else(|| {
                    let (first, second) = pair();
                    CategoryError::MissingComposite { first, second }
                })?;
                if h >= arrows.len()
                    || arrows[h].source != arrows[f].source
                    || arrows[h].target != arrows[g].target
                {
                    let (first, second) = pair();
                    return Err(CategoryError::BadComposite { first, second });
                }
                row.push(h);
            }
            comp.push(row);
        }
        Ok(ExplicitFinCategory { objects, arrows, identities, out, into, out_pos, comp })
    }

    /// Builds a category from composition triples `(first, second, composite)`
    /// given by name. Composites with identities may be omitted.
    pub fn from_triples(
        objects: Vec<String>,
        arrows: Vec<(String, String, String)>,
        identities: Vec<(String, String)>,
        triples: &[(String, String, String)],
    ) -> Result<Self, CategoryError> {
        let obj_idx: HashMap<&str, usize> =
            objects.iter().enumerate().map(|(i, o)| (o.as_str(), i)).collect();
        let obj = |name: &str| {
            obj_idx.get(name).copied().ok_or_else(|| CategoryError::UnknownObject(name.to_string()))
        };
        let mut arrow_list = Vec::with_capacity(arrows.len());
        for (name, s, t) in &arrows {
            arrow_list.push(Arrow { name: name.clone(), source: obj(s)?, target: obj(t)? });
        }
        let arrow_idx: HashMap<&str, usize> =
            arrows.iter().enumerate().map(|(i, a)| (a.0.as_str(), i)).collect();
        let arr = |name: &str| {
            arrow_idx.get(name).copied().ok_or_else(|| CategoryError::UnknownArrow(name.to_string()))
        };
        let mut ids = vec![usize::MAX; objects.len()];
        for (o, a) in &identities {
            ids[obj(o)?] = arr(a)?;
        }
        if let Some(o) = ids.iter().position(|&i| i == usize::MAX) {
            return Err(CategoryError::BadIdentity(objects[o].clone()));
        }
        let mut table = HashMap::new();
        for (f, g, h) in triples {
            table.insert((arr(f)?, arr(g)?), arr(h)?);
        }
        let is_id: Vec<bool> = {
            let mut v = vec![false; arrow_list.len()];
            for &i in &ids {
                v[i] = true;
            }
            v
        };
        Self::new(objects, arrow_list, ids, |f, g| {
            table.get(&(f, g)).copied().or(if is_id[f] {
                Some(g)
            } else if is_id[g] {
                Some(f)
            } else {
                None
            })
        })
    }

    /// Exhaustive check of units and associativity.
    pub fn validate(&self) -> Result<(), CategoryError> {
        for f in 0..self.arrows.len() {
            let a = &self.arrows[f];
            if self.compose(self.identities[a.source], f) != Some(f)
                || self.compose(f, self.identities[a.target]) != Some(f)
            {
                return Err(CategoryError::Unit(a.name.clone()));
            }
        }
        for f in 0..self.arrows.len() {
            for &g in &self.out[self.arrows[f].target] {
                let fg = self.comp[f][self.out_pos[g]];
                for &h in &self.out[self.arrows[g].target] {
                    let left = self.comp[fg][self.out_pos[h]];
                    let gh = self.comp[g][self.out_pos[h]];
                    let right = self.comp[f][self.out_pos[gh]];
                    if left != right {
                        return Err(CategoryError::Associativity(
                            self.arrows[f].name.clone(),
                            self.arrows[g].name.clone(),
                            self.arrows[h].name.clone(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn object_name(&self, o: usize) -> &str {
        &self.objects[o]
    }

    pub fn arrow_name(&self, a: usize) -> &str {
        &self.arrows[a].name
    }

    pub fn find_object(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn find_arrow(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    pub fn source(&self, a: usize) -> usize {
        self.arrows[a].source
    }

    pub fn target(&self, a: usize) -> usize {
        self.arrows[a].target
    }

    pub fn identity(&self, o: usize) -> usize {
        self.identities[o]
    }

    pub fn identities(&self) -> &[usize] {
        &self.identities
    }

    pub fn is_identity(&self, a: usize) -> bool {
        self.identities[self.arrows[a].source] == a
    }

    pub fn arrows_from(&self, o: usize) -> &[usize] {
        &self.out[o]
    }

    pub fn arrows_to(&self, o: usize) -> &[usize] {
        &self.into[o]
    }

    pub fn hom(&self, a: usize, b: usize) -> Vec<usize> {
        self.out[a].iter().copied().filter(|&f| self.arrows[f].target == b).collect()
    }

    /// `g ∘ f`, if composable.
    pub fn compose(&self, f: usize, g: usize) -> Option<usize> {
        (self.arrows[f].target == self.arrows[g].source).then(|| self.comp[f][self.out_pos[g]])
    }

    /// All composition triples `(first, second, composite)`.
    pub fn triples(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        (0..self.arrows.len()).flat_map(move |f| {
            self.out[self.arrows[f].target]
                .iter()
                .map(move |&g| (f, g, self.comp[f][self.out_pos[g]]))
        })
    }

    /// The poset `[n] = {0 < 1 < ... < n}`.
    pub fn linear_order(n: usize) -> Self {
        Self::poset((0..=n).map(|i| i.to_string()).collect(), |a, b| a <= b)
    }

    /// Poset on the given elements; `leq` must be a partial order.
    pub fn poset(elements: Vec<String>, leq: impl Fn(usize, usize) -> bool) -> Self {
        let n = elements.len();
        let mut arrows = Vec::new();
        let mut index = HashMap::new();
        let mut ids = vec![0; n];
        for a in 0..n {
            for b in 0..n {
                if leq(a, b) {
                    if a == b {
                        ids[a] = arrows.len();
                    }
                    index.insert((a, b), arrows.len());
                    arrows.push(Arrow {
                        name: format!("{}<={}", elements[a], elements[b]),
                        source: a,
                        target: b,
                    });
                }
            }
        }
        let sources: Vec<(usize, usize)> = arrows.iter().map(|a| (a.source, a.target)).collect();
        Self::new(elements, arrows, ids, |f, g| index.get(&(sources[f].0, sources[g].1)).copied())
            .expect("a partial order yields a category")
    }

    pub fn terminal() -> Self {
        Self::discrete(1)
    }

    pub fn discrete(n: usize) -> Self {
        let objects = (0..n).map(|i| format!("c{i}")).collect();
        let arrows = (0..n).map(|i| Arrow { name: format!("id_c{i}"), source: i, target: i }).collect();
        Self::new(objects, arrows, (0..n).collect(), |f, g| (f == g).then_some(f)).unwrap()
    }

    /// One-object category of the cyclic group of order `n`.
    pub fn cyclic_group(n: usize) -> Self {
        assert!(n >= 1);
        let arrows: Vec<Arrow> = (0..n)
            .map(|k| Arrow { name: if k == 0 { "e".into() } else { format!("g{k}") }, source: 0, target: 0 })
            .collect();
        Self::new(vec!["*".into()], arrows, vec![0], |f, g| Some((f + g) % n)).unwrap()
    }

    pub fn product(c: &Self, d: &Self) -> Self {
        let objects = c
            .objects
            .iter()
            .flat_map(|a| d.objects.iter().map(move |b| format!("({a},{b})")))
            .collect();
        let nd_obj = d.object_count();
        let nd = d.arrow_count();
        let mut arrows = Vec::with_capacity(c.arrow_count() * nd);
        for f in &c.arrows {
            for g in &d.arrows {
                arrows.push(Arrow {
                    name: format!("({},{})", f.name, g.name),
                    source: f.source * nd_obj + g.source,
                    target: f.target * nd_obj + g.target,
                });
            }
        }
        let ids = (0..c.object_count())
            .flat_map(|a| (0..nd_obj).map(move |b| (a, b)))
            .map(|(a, b)| c.identities[a] * nd + d.identities[b])
            .collect();
        Self::new(objects, arrows, ids, |x, y| {
            let h1 = c.compose(x / nd, y / nd)?;
            let h2 = d.compose(x % nd, y % nd)?;
            Some(h1 * nd + h2)
        })
        .expect("product of categories")
    }

    /// Slice category `C/c` with its projection functor to `C`.
    pub fn slice_over(&self, c: usize) -> (Self, Functor) {
        let objs: Vec<usize> = self.into[c].clone();
        let mut arrows = Vec::new();
        let mut arrow_map = Vec::new();
        let mut index = HashMap::new();
        for (si, &s) in objs.iter().enumerate() {
            for &f in &self.out[self.arrows[s].source] {
                for (ti, &t) in objs.iter().enumerate() {
                    if self.compose(f, t) == Some(s) {
                        index.insert((si, f, ti), arrows.len());
                        arrows.push(Arrow {
                            name: format!("{}:{}->{}", self.arrows[f].name, self.arrows[s].name, self.arrows[t].name),
                            source: si,
                            target: ti,
                        });
                        arrow_map.push(f);
                    }
                }
            }
        }
        let ids =
            objs.iter().enumerate().map(|(si, &s)| index[&(si, self.identities[self.arrows[s].source], si)]).collect();
        let objects = objs.iter().map(|&a| format!("{}/{}", self.arrows[a].name, self.objects[c])).collect();
        let slice = Self::new(objects, arrows.clone(), ids, |x, y| {
            let h = self.compose(arrow_map[x], arrow_map[y])?;
            index.get(&(arrows[x].source, h, arrows[y].target)).copied()
        })
        .expect("slice category");
        let proj = Functor {
            object_map: objs.iter().map(|&a| self.arrows[a].source).collect(),
            arrow_map,
        };
        (slice, proj)
    }
}

fn check_unique<'a>(names: impl Iterator<Item = &'a String>) -> Result<(), CategoryError> {
    let mut seen = std::collections::HashSet::new();
    for n in names {
        if !seen.insert(n.as_str()) {
            return Err(CategoryError::Duplicate(n.clone()));
        }
    }
    Ok(())
}

/// Functor between explicit finite categories.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Functor {
    pub object_map: Vec<usize>,
    pub arrow_map: Vec<usize>,
}

impl Functor {
    /// Checks endpoints, identities and composites.
    pub fn check(&self, src: &ExplicitFinCategory, tgt: &ExplicitFinCategory) -> Result<(), CategoryError> {
        if self.object_map.len() != src.object_count() || self.arrow_map.len() != src.arrow_count() {
            return Err(CategoryError::Functor("wrong table sizes".into()));
        }
        for (f, a) in src.arrows.iter().enumerate() {
            let img = self.arrow_map[f];
            if img >= tgt.arrow_count()
                || tgt.source(img) != self.object_map[a.source]
                || tgt.target(img) != self.object_map[a.target]
            {
                return Err(CategoryError::Functor(format!("endpoints of `{}`", a.name)));
            }
        }
        for (o, &id) in src.identities.iter().enumerate() {
            if self.arrow_map[id] != tgt.identity(self.object_map[o]) {
                return Err(CategoryError::Functor(format!("identity of `{}`", src.objects[o])));
            }
        }
        for (f, g, h) in src.triples() {
            if tgt.compose(self.arrow_map[f], self.arrow_map[g]) != Some(self.arrow_map[h]) {
                return Err(CategoryError::Functor(format!(
                    "composite of `{}` then `{}`",
                    src.arrows[f].name, src.arrows[g].name
                )));
            }
        }
        Ok(())
    }

    /// Checks that this is a functor and bijective on objects and arrows.
    pub fn check_isomorphism(
        &self,
        src: &ExplicitFinCategory,
        tgt: &ExplicitFinCategory,
    ) -> Result<(), CategoryError> {
        self.check(src, tgt)?;
        if !crate::sset::is_bijection(&self.object_map, tgt.object_count()) {
            return Err(CategoryError::Functor("not bijective on objects".into()));
        }
        if !crate::sset::is_bijection(&self.arrow_map, tgt.arrow_count()) {
            return Err(CategoryError::Functor("not bijective on arrows".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_order_homs() {
        let c = ExplicitFinCategory::linear_order(2);
        assert_eq!(c.object_count(), 3);
        assert_eq!(c.arrow_count(), 6);
        assert_eq!(c.hom(0, 2).len(), 1);
        assert!(c.hom(2, 0).is_empty());
    }

    #[test]
    fn bad_associativity_is_rejected() {
        // Two arrows f,g: a -> a with a non-associative table.
        let objects = vec!["a".to_string()];
        let arrows = vec![
            Arrow { name: "id".into(), source: 0, target: 0 },
            Arrow { name: "f".into(), source: 0, target: 0 },
            Arrow { name: "g".into(), source: 0, target: 0 },
        ];
        let table = |x: usize, y: usize| match (x, y) {
            (0, y) => Some(y),
            (x, 0) => Some(x),
            (1, 1) => Some(2),
            (1, 2) => Some(1),
            (2, 1) => Some(2),
            _ => Some(2),
        };
        assert!(matches!(
            ExplicitFinCategory::new(objects, arrows, vec![0], table),
            Err(CategoryError::Associativity(..))
        ));
    }

    #[test]
    fn slice_of_interval_over_top() {
        let c = ExplicitFinCategory::linear_order(1);
        let (s, proj) = c.slice_over(1);
        assert_eq!(s.object_count(), 2);
        assert_eq!(s.arrow_count(), 3);
        proj.check(&s, &c).unwrap();
    }

    #[test]
    fn product_and_group() {
        let c = ExplicitFinCategory::product(
            &ExplicitFinCategory::linear_order(1),
            &ExplicitFinCategory::cyclic_group(2),
        );
        assert_eq!(c.object_count(), 2);
        assert_eq!(c.arrow_count(), 6);
        assert_eq!(c.hom(0, 1).len(), 2);
    }
}
