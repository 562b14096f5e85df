//! Budgeted Knuth-Bendix completion for string rewriting under the
//! shortlex order, and finitely presented categories built on it.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::category::{Arrow, CategoryError, ExplicitFinCategory};

pub type Letter = u32;
pub type Word = Vec<Letter>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Budget {
    pub max_rules: usize,
    pub max_lhs: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_rules: 20_000, max_lhs: 24 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Complete,
    BudgetExhausted,
}

/// `a > b` in length-then-lexicographic order.
pub fn shortlex_greater(a: &[Letter], b: &[Letter]) -> bool {
    a.len() > b.len() || (a.len() == b.len() && a > b)
}

#[derive(Clone, Debug)]
pub struct RewriteSystem {
    rules: Vec<(Word, Word)>,
    alive: Vec<bool>,
    by_last: HashMap<Letter, Vec<usize>>,
    by_first: HashMap<Letter, Vec<usize>>,
    by_letter: HashMap<Letter, Vec<usize>>,
    status: Status,
    budget: Budget,
}

impl RewriteSystem {
    fn empty(budget: Budget) -> Self {
        RewriteSystem {
            rules: Vec::new(),
            alive: Vec::new(),
            by_last: HashMap::new(),
            by_first: HashMap::new(),
            by_letter: HashMap::new(),
            status: Status::Complete,
            budget,
        }
    }

    /// Completes the given equations, stopping when the budget would be exceeded.
    pub fn complete(equations: impl IntoIterator<Item = (Word, Word)>, budget: Budget) -> Self {
        let mut sys = Self::empty(budget);
        let mut pending: VecDeque<(Word, Word)> = equations.into_iter().collect();
        let mut seen_pairs: HashSet<(usize, usize)> = HashSet::new();
        'outer: loop {
            while let Some((a, b)) = pending.pop_front() {
                let (a, b) = (sys.normal_form(&a), sys.normal_form(&b));
                if a == b {
                    continue;
                }
                let (lhs, rhs) = if shortlex_greater(&a, &b) { (a, b) } else { (b, a) };
                if lhs.len() > budget.max_lhs || sys.rule_count() >= budget.max_rules {
                    sys.status = Status::BudgetExhausted;
                    break 'outer;
                }
                let new = sys.add_rule(lhs, rhs, &mut pending);
                for other in sys.overlap_candidates(new) {
                    for (x, y) in [(new, other), (other, new)] {
                        if seen_pairs.insert((x, y)) {
                            pending.extend(critical_pairs(&sys.rules[x], &sys.rules[y]));
                        }
                    }
                }
            }
            // Confirm local confluence of the surviving rules before claiming completeness.
            for x in 0..sys.rules.len() {
                if !sys.alive[x] {
                    continue;
                }
                for y in sys.overlap_candidates(x) {
                    for (a, b) in [(x, y), (y, x)] {
                        for (p, q) in critical_pairs(&sys.rules[a], &sys.rules[b]) {
                            if sys.normal_form(&p) != sys.normal_form(&q) {
                                pending.push_back((p, q));
                            }
                        }
                    }
                }
            }
            if pending.is_empty() {
                break;
            }
        }
        sys.compact();
        sys
    }

    fn add_rule(&mut self, lhs: Word, rhs: Word, pending: &mut VecDeque<(Word, Word)>) -> usize {
        let idx = self.rules.len();
        self.rules.push((lhs, rhs));
        self.alive.push(true);
        self.index_rule(idx);
        // Interreduce: rules whose left side the new rule rewrites go back to the queue.
        for j in 0..idx {
            if !self.alive[j] {
                continue;
            }
            if contains(&self.rules[j].0, &self.rules[idx].0) {
                self.alive[j] = false;
                pending.push_back(self.rules[j].clone());
            }
        }
        for j in 0..idx {
            if self.alive[j] && contains(&self.rules[j].1, &self.rules[idx].0) {
                let r = self.normal_form(&self.rules[j].1.clone());
                self.rules[j].1 = r;
            }
        }
        idx
    }

    fn index_rule(&mut self, idx: usize) {
        let l = &self.rules[idx].0;
        self.by_last.entry(*l.last().expect("nonempty lhs")).or_default().push(idx);
        self.by_first.entry(l[0]).or_default().push(idx);
        let mut letters = l.clone();
        letters.sort_unstable();
        letters.dedup();
        for c in letters {
            self.by_letter.entry(c).or_default().push(idx);
        }
    }

    /// Live rules whose left side can overlap that of `r` in either order.
    fn overlap_candidates(&self, r: usize) -> Vec<usize> {
        let l = &self.rules[r].0;
        let mut out: Vec<usize> = self.by_letter.get(&l[0]).into_iter().flatten().copied().collect();
        for c in l {
            out.extend(self.by_first.get(c).into_iter().flatten().copied());
        }
        out.retain(|&i| self.alive[i]);
        out.sort_unstable();
        out.dedup();
        out
    }

    fn compact(&mut self) {
        let rules: Vec<(Word, Word)> =
            self.rules.iter().zip(&self.alive).filter(|(_, &a)| a).map(|(r, _)| r.clone()).collect();
        let mut rules = rules;
        rules.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
        self.alive = vec![true; rules.len()];
        self.by_last.clear();
        self.by_first.clear();
        self.by_letter.clear();
        self.rules = rules;
        for i in 0..self.rules.len() {
            self.index_rule(i);
        }
    }

    pub fn rule_count(&self) -> usize {
        self.alive.iter().filter(|&&a| a).count()
    }

    pub fn rules(&self) -> impl Iterator<Item = &(Word, Word)> {
        self.rules.iter().zip(&self.alive).filter(|(_, &a)| a).map(|(r, _)| r)
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    pub fn max_lhs(&self) -> usize {
        self.rules().map(|(l, _)| l.len()).max().unwrap_or(0)
    }

    fn matching_rule(&self, stack: &[Letter]) -> Option<usize> {
        let last = *stack.last()?;
        self.by_last.get(&last)?.iter().copied().find(|&i| self.alive[i] && stack.ends_with(&self.rules[i].0))
    }

    pub fn normal_form(&self, w: &[Letter]) -> Word {
        let mut input: Vec<Letter> = w.iter().rev().copied().collect();
        let mut out: Word = Vec::with_capacity(w.len());
        while let Some(c) = input.pop() {
            out.push(c);
            if let Some(i) = self.matching_rule(&out) {
                let (l, r) = &self.rules[i];
                out.truncate(out.len() - l.len());
                input.extend(r.iter().rev());
            }
        }
        out
    }

    /// Whether some suffix of `w` is a left-hand side.
    pub fn suffix_reducible(&self, w: &[Letter]) -> bool {
        self.matching_rule(w).is_some()
    }

    pub fn is_reducible(&self, w: &[Letter]) -> bool {
        (1..=w.len()).any(|k| self.suffix_reducible(&w[..k]))
    }

    /// Rule list followed by a status line.
    pub fn dump(&self, name: impl Fn(Letter) -> String) -> String {
        let word = |w: &Word| {
            if w.is_empty() {
                "ε".to_string()
            } else {
                w.iter().map(|&c| name(c)).collect::<Vec<_>>().join(" ")
            }
        };
        let mut s = String::new();
        for (l, r) in self.rules() {
            s.push_str(&format!("{} -> {}\n", word(l), word(r)));
        }
        s.push_str(&self.status_line());
        s.push('\n');
        s
    }

    pub fn status_line(&self) -> String {
        match self.status {
            Status::Complete => "complete".into(),
            Status::BudgetExhausted => {
                format!("budget-exhausted(max_lhs={}, rules={})", self.budget.max_lhs, self.rule_count())
            }
        }
    }
}

fn contains(hay: &[Letter], needle: &[Letter]) -> bool {
    needle.len() <= hay.len() && hay.windows(needle.len()).any(|w| w == needle)
}

/// Critical pairs from overlaps of `l1` with `l2`: suffix/prefix overlaps and
/// occurrences of `l2` strictly inside `l1`.
fn critical_pairs((l1, r1): &(Word, Word), (l2, r2): &(Word, Word)) -> Vec<(Word, Word)> {
    let mut out = Vec::new();
    for k in 1..l1.len().min(l2.len() + 1) {
        if k < l2.len() && l1[l1.len() - k..] == l2[..k] {
            let mut a = r1.clone();
            a.extend_from_slice(&l2[k..]);
            let mut b = l1[..l1.len() - k].to_vec();
            b.extend_from_slice(r2);
            out.push((a, b));
        }
    }
    if l2.len() <= l1.len() && l1 != l2 {
        for p in 0..=l1.len() - l2.len() {
            if l1[p..p + l2.len()] == l2[..] {
                let mut b = l1[..p].to_vec();
                b.extend_from_slice(r2);
                b.extend_from_slice(&l1[p + l2.len()..]);
                out.push((r1.clone(), b));
            }
        }
    }
    out
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("word is not composable: {0}")]
    NotComposable(String),
    #[error("relation sides are not parallel: {0}")]
    NotParallel(String),
    #[error("hom-sets are infinite")]
    Infinite,
    #[error("rewriting system is not complete ({0})")]
    Incomplete(String),
    #[error(transparent)]
    Category(#[from] CategoryError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// A typed word: the start object is needed for the empty word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathWord {
    pub start: usize,
    pub letters: Word,
}

/// Objects, generating arrows and a completed rewriting engine.
#[derive(Clone, Debug)]
pub struct PresentedCategory {
    objects: Vec<String>,
    generators: Vec<Generator>,
    relations: Vec<(PathWord, PathWord)>,
    engine: RewriteSystem,
    out: Vec<Vec<Letter>>,
}

/// Materialized category together with the normal form of each arrow.
#[derive(Clone, Debug)]
pub struct Materialized {
    pub category: ExplicitFinCategory,
    pub normal_forms: Vec<PathWord>,
    index: HashMap<PathWord, usize>,
}

impl Materialized {
    pub fn arrow_of(&self, nf: &PathWord) -> Option<usize> {
        self.index.get(nf).copied()
    }
}

impl PresentedCategory {
    pub fn new(
        objects: Vec<String>,
        generators: Vec<Generator>,
        relations: Vec<(PathWord, PathWord)>,
        budget: Budget,
    ) -> Result<Self, PresentationError> {
        let mut out = vec![Vec::new(); objects.len()];
        for (i, g) in generators.iter().enumerate() {
            out[g.source].push(i as Letter);
        }
        let mut pc = PresentedCategory {
            objects,
            generators,
            relations: Vec::new(),
            engine: RewriteSystem::empty(budget),
            out,
        };
        for (a, b) in &relations {
            let ea = pc.endpoints(a)?;
            let eb = pc.endpoints(b)?;
            if ea != eb {
                return Err(PresentationError::NotParallel(format!("{} vs {}", pc.word_name(a), pc.word_name(b))));
            }
        }
        pc.engine = RewriteSystem::complete(relations.iter().map(|(a, b)| (a.letters.clone(), b.letters.clone())), budget);
        pc.relations = relations;
        Ok(pc)
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn relations(&self) -> &[(PathWord, PathWord)] {
        &self.relations
    }

    pub fn engine(&self) -> &RewriteSystem {
        &self.engine
    }

    pub fn is_complete(&self) -> bool {
        self.engine.status() == Status::Complete
    }

    pub fn endpoints(&self, w: &PathWord) -> Result<(usize, usize), PresentationError> {
        let mut at = w.start;
        for &c in &w.letters {
            let g = self
                .generators
                .get(c as usize)
                .ok_or_else(|| PresentationError::NotComposable(format!("unknown generator {c}")))?;
            if g.source != at {
                return Err(PresentationError::NotComposable(self.word_name(w)));
            }
            at = g.target;
        }
        Ok((w.start, at))
    }

    pub fn word_name(&self, w: &PathWord) -> String {
        if w.letters.is_empty() {
            return format!("id_{}", self.objects.get(w.start).map(String::as_str).unwrap_or("?"));
        }
        w.letters
            .iter()
            .map(|&c| self.generators.get(c as usize).map(|g| g.name.clone()).unwrap_or_else(|| format!("#{c}")))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn normal_form(&self, w: &PathWord) -> PathWord {
        PathWord { start: w.start, letters: self.engine.normal_form(&w.letters) }
    }

    /// Irreducible words starting at `start`, grouped by target. `None` when
    /// there are infinitely many; decided by a pumping bound on the
    /// suffix automaton of the left-hand sides.
    pub fn irreducible_from(&self, start: usize) -> Option<Vec<Vec<PathWord>>> {
        let lhs_total: usize = self.engine.rules().map(|(l, _)| l.len()).sum();
        let cap = self.objects.len() * (lhs_total + 1) + 1;
        let mut by_target = vec![Vec::new(); self.objects.len()];
        let mut level: Vec<(usize, Word)> = vec![(start, Vec::new())];
        for len in 0.. {
            if level.is_empty() {
                break;
            }
            if len >= cap {
                return None;
            }
            let mut next = Vec::new();
            for (at, w) in level {
                for &c in &self.out[at] {
                    let mut v = w.clone();
                    v.push(c);
                    if !self.engine.suffix_reducible(&v) {
                        next.push((self.generators[c as usize].target, v));
                    }
                }
                by_target[at].push(PathWord { start, letters: w });
            }
            level = next;
        }
        Some(by_target)
    }

    /// The explicit category of normal forms. Requires a complete engine and
    /// finite hom-sets.
    pub fn materialize(&self) -> Result<Materialized, PresentationError> {
        if !self.is_complete() {
            return Err(PresentationError::Incomplete(self.engine.status_line()));
        }
        let mut normal_forms = Vec::new();
        for s in 0..self.objects.len() {
            let groups = self.irreducible_from(s).ok_or(PresentationError::Infinite)?;
            normal_forms.extend(groups.into_iter().flatten());
        }
        let index: HashMap<PathWord, usize> = normal_forms.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let arrows: Vec<Arrow> = normal_forms
            .iter()
            .map(|w| {
                let (source, target) = self.endpoints(w).expect("normal forms are composable");
                Arrow { name: self.word_name(w), source, target }
            })
            .collect();
        let identities: Vec<usize> =
            (0..self.objects.len()).map(|o| index[&PathWord { start: o, letters: Vec::new() }]).collect();
        let category = ExplicitFinCategory::new(self.objects.clone(), arrows, identities, |f, g| {
            let mut w = normal_forms[f].clone();
            w.letters.extend_from_slice(&normal_forms[g].letters);
            index.get(&self.normal_form(&w)).copied()
        })?;
        Ok(Materialized { category, normal_forms, index })
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Complete => "complete",
            Status::BudgetExhausted => "budget-exhausted",
        })
    }
}
