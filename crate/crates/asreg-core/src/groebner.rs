//! Noncommutative Gröbner bases in path algebras.
//!
//! Rewriting rules `lead -> tail` are kept monic and interreduced. Overlaps
//! are processed in order of the degree of the overlap word; in graded mode
//! everything above the cap is discarded and the table records whether that
//! happened. Finite mode has to close on its own.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::presentation::{Mode, Presentation};
use crate::quiver::{elem_normalize, Elem, Path, Quiver};

/// Degree bound for finite mode; presentations that have not closed by
/// then are rejected.
pub const FINITE_DEGREE_LIMIT: u32 = 256;
const FINITE_RULE_LIMIT: usize = 50_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub lead: Path,
    pub tail: Elem,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FiniteVerdict {
    Yes,
    No,
    UnknownAtCap,
}

impl FiniteVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            FiniteVerdict::Yes => "yes",
            FiniteVerdict::No => "no",
            FiniteVerdict::UnknownAtCap => "unknown_at_cap",
        }
    }
}

#[derive(Clone, Debug)]
pub struct NormalFormTable {
    field: Field,
    quiver: Quiver,
    rules: Vec<Rule>,
    by_first: Vec<Vec<usize>>,
    by_last: Vec<Vec<usize>>,
    cap: Option<u32>,
    complete: bool,
    finite: FiniteVerdict,
}

impl NormalFormTable {
    pub fn compute(p: &Presentation) -> Result<NormalFormTable> {
        let mut t = NormalFormTable {
            field: p.field,
            quiver: p.quiver.clone(),
            rules: Vec::new(),
            by_first: vec![Vec::new(); p.quiver.num_arrows()],
            by_last: vec![Vec::new(); p.quiver.num_arrows()],
            cap: p.mode.cap(),
            complete: true,
            finite: FiniteVerdict::UnknownAtCap,
        };
        t.buchberger(p)?;
        t.finite = t.decide_finite(p.mode)?;
        Ok(t)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn cap(&self) -> Option<u32> {
        self.cap
    }

    /// Every overlap up to the cap has been resolved (always true once built).
    pub fn complete_below_cap(&self) -> bool {
        true
    }

    /// No overlap was discarded, so the rules form a full Gröbner basis.
    pub fn gb_complete(&self) -> bool {
        self.complete
    }

    pub fn finite_dimensional(&self) -> FiniteVerdict {
        self.finite
    }

    fn reindex(&mut self) {
        for v in self.by_first.iter_mut().chain(self.by_last.iter_mut()) {
            v.clear();
        }
        for (i, r) in self.rules.iter().enumerate() {
            self.by_first[r.lead.word[0] as usize].push(i);
            self.by_last[*r.lead.word.last().unwrap() as usize].push(i);
        }
    }

    /// First `(rule, position)` whose lead occurs in `p`.
    fn find_divisor(&self, p: &Path) -> Option<(usize, usize)> {
        let w = &p.word;
        for i in 0..w.len() {
            for &r in &self.by_first[w[i] as usize] {
                let l = &self.rules[r].lead.word;
                if l.len() <= w.len() - i && w[i..i + l.len()] == l[..] {
                    return Some((r, i));
                }
            }
        }
        None
    }

    pub fn is_normal(&self, p: &Path) -> bool {
        self.find_divisor(p).is_none()
    }

    /// Whether `w·a` is normal, given that `w` is.
    fn extension_is_normal(&self, w: &[u32], a: u32) -> bool {
        let n = w.len() + 1;
        for &r in &self.by_last[a as usize] {
            let l = &self.rules[r].lead.word;
            if l.len() <= n {
                let start = n - l.len();
                let matches = (start..n - 1).all(|i| w[i] == l[i - start]);
                if matches {
                    return false;
                }
            }
        }
        true
    }

    /// Normal form of a linear combination.
    pub fn reduce(&self, e: &Elem) -> Elem {
        let k = &self.field;
        let mut acc: BTreeMap<Path, Scalar> = BTreeMap::new();
        for (p, c) in e {
            let s = acc.entry(p.clone()).or_insert(Scalar::ZERO);
            *s = k.add(s, c);
        }
        let mut out = Vec::new();
        while let Some((p, c)) = acc.pop_last() {
            if c.is_zero() {
                continue;
            }
            match self.find_divisor(&p) {
                None => out.push((p, c)),
                Some((r, i)) => {
                    let rule = &self.rules[r];
                    let pre = &p.word[..i];
                    let post = &p.word[i + rule.lead.word.len()..];
                    for (t, tc) in &rule.tail {
                        let q = self.quiver.concat3(pre, t, post);
                        let s = acc.entry(q).or_insert(Scalar::ZERO);
                        *s = k.add(s, &k.mul(&c, tc));
                    }
                }
            }
        }
        out.reverse();
        out
    }

    pub fn reduce_path(&self, p: &Path) -> Elem {
        if self.is_normal(p) {
            return vec![(p.clone(), Scalar::ONE)];
        }
        self.reduce(&vec![(p.clone(), Scalar::ONE)])
    }

    fn make_rule(&self, r: Elem) -> Rule {
        let k = &self.field;
        let (lead, lc) = r.last().cloned().unwrap();
        let inv = k.neg(&k.inv(&lc).unwrap());
        let tail = r[..r.len() - 1].iter().map(|(p, c)| (p.clone(), k.mul(&inv, c))).collect();
        Rule { lead, tail }
    }

    fn rule_elem(&self, r: &Rule) -> Elem {
        let k = &self.field;
        let mut e: Elem = r.tail.iter().map(|(p, c)| (p.clone(), k.neg(c))).collect();
        e.push((r.lead.clone(), Scalar::ONE));
        e
    }

    /// S-polynomials from suffixes of `a.lead` meeting prefixes of `b.lead`.
    fn overlaps(&self, a: &Rule, b: &Rule, out: &mut Vec<(u32, Elem)>) {
        let (x, y) = (&a.lead.word, &b.lead.word);
        let k = &self.field;
        for len in 1..x.len().min(y.len()) {
            if x[x.len() - len..] != y[..len] {
                continue;
            }
            let u = &x[..x.len() - len];
            let v = &y[len..];
            let deg = a.lead.deg + v.iter().map(|c| self.quiver.arrow(*c).degree).sum::<u32>();
            // (lead_a - tail_a)·v - u·(lead_b - tail_b) = u·tail_b - tail_a·v
            let mut terms = Vec::new();
            for (t, c) in &b.tail {
                terms.push((self.quiver.concat3(u, t, &[]), *c));
            }
            for (t, c) in &a.tail {
                terms.push((self.quiver.concat3(&[], t, v), k.neg(c)));
            }
            out.push((deg, elem_normalize(k, terms)));
        }
    }

    fn buchberger(&mut self, p: &Presentation) -> Result<()> {
        let mut pending: BTreeMap<(u32, u64), Elem> = BTreeMap::new();
        let mut seq = 0u64;
        for r in &p.relations {
            let d = r.last().unwrap().0.deg;
            pending.insert((d, seq), r.clone());
            seq += 1;
        }
        while let Some(((deg, _), f)) = pending.pop_first() {
            if let Some(cap) = self.cap {
                if deg > cap {
                    self.complete = false;
                    break;
                }
            } else if deg > FINITE_DEGREE_LIMIT || self.rules.len() > FINITE_RULE_LIMIT {
                return Err(Error::NotFinite(format!(
                    "Gröbner basis still growing at degree {deg}; the relations do not define a finite-dimensional algebra within the search limits"
                )));
            }
            let r = self.reduce(&f);
            if r.is_empty() {
                continue;
            }
            let rule = self.make_rule(r);
            let mut kept = Vec::with_capacity(self.rules.len());
            for old in core::mem::take(&mut self.rules) {
                if old.lead.find(&rule.lead).is_some() {
                    pending.insert((old.lead.deg, seq), self.rule_elem(&old));
                    seq += 1;
                } else {
                    kept.push(old);
                }
            }
            self.rules = kept;
            let mut new = Vec::new();
            for old in &self.rules {
                self.overlaps(&rule, old, &mut new);
                self.overlaps(old, &rule, &mut new);
            }
            self.overlaps(&rule, &rule, &mut new);
            for (d, e) in new {
                if !e.is_empty() {
                    pending.insert((d, seq), e);
                    seq += 1;
                }
            }
            self.rules.push(rule);
            self.reindex();
        }
        // interreduce tails for a canonical table
        let tails: Vec<Elem> = self.rules.iter().map(|r| self.reduce(&r.tail)).collect();
        for (r, t) in self.rules.iter_mut().zip(tails) {
            r.tail = t;
        }
        self.rules.sort_by(|a, b| a.lead.cmp(&b.lead));
        self.reindex();
        Ok(())
    }

    /// Normal words grouped by length; in graded mode words above the cap
    /// are dropped. Stops at `max_len` or when a length has no words.
    fn normal_words_by_length(&self, max_len: usize) -> Vec<Vec<Path>> {
        let nv = self.quiver.num_vertices() as u32;
        let mut levels: Vec<Vec<Path>> = vec![(0..nv).map(Path::trivial).collect()];
        while levels.len() <= max_len {
            let mut next = Vec::new();
            for w in levels.last().unwrap() {
                for (a, ar) in self.quiver.arrows().iter().enumerate() {
                    if ar.source != w.end {
                        continue;
                    }
                    if let Some(cap) = self.cap {
                        if w.deg + ar.degree > cap {
                            continue;
                        }
                    }
                    if self.extension_is_normal(&w.word, a as u32) {
                        next.push(self.quiver.compose(w, &self.quiver.arrow_path(a as u32)).unwrap());
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            levels.push(next);
        }
        levels
    }

    /// All normal words, sorted in monomial order. Graded mode lists words
    /// up to the cap; finite mode lists the whole basis.
    pub fn normal_words(&self) -> Vec<Path> {
        let max_len = match self.cap {
            Some(c) => c as usize,
            None => usize::MAX,
        };
        let mut all: Vec<Path> = self.normal_words_by_length(max_len).into_iter().flatten().collect();
        all.sort();
        all
    }

    fn decide_finite(&self, mode: Mode) -> Result<FiniteVerdict> {
        let cycle = if self.complete { Some(self.ufnarovski_cycle()) } else { None };
        match mode {
            Mode::Finite => {
                if cycle == Some(true) {
                    return Err(Error::NotFinite(
                        "the quotient is infinite-dimensional (normal words contain a cycle); use graded mode".into(),
                    ));
                }
                Ok(FiniteVerdict::Yes)
            }
            Mode::Graded { cap } => {
                // lengths whose words are all within the cap are certified
                let maxdeg = self.quiver.max_arrow_degree();
                let certified = (cap / maxdeg) as usize;
                let levels = self.normal_words_by_length(certified + 1);
                if levels.len() <= certified {
                    return Ok(FiniteVerdict::Yes);
                }
                Ok(match cycle {
                    Some(true) => FiniteVerdict::No,
                    Some(false) => FiniteVerdict::Yes,
                    None => FiniteVerdict::UnknownAtCap,
                })
            }
        }
    }

    /// Cycle in the graph of normal words of length `m - 1` (`m` the longest
    /// lead), edges given by normal words of length `m`.
    fn ufnarovski_cycle(&self) -> bool {
        let m = self.rules.iter().map(|r| r.lead.len()).max().unwrap_or(1).max(2) - 1;
        // enumerate normal words of length m ignoring any cap
        let nv = self.quiver.num_vertices() as u32;
        let mut level: Vec<Vec<u32>> = Vec::new();
        let mut cur: Vec<(Vec<u32>, u32)> = (0..nv).map(|v| (Vec::new(), v)).collect();
        for _ in 0..m {
            let mut next = Vec::new();
            for (w, end) in &cur {
                for (a, ar) in self.quiver.arrows().iter().enumerate() {
                    if ar.source == *end && self.extension_is_normal(w, a as u32) {
                        let mut x = w.clone();
                        x.push(a as u32);
                        next.push((x, ar.target));
                    }
                }
            }
            cur = next;
        }
        for (w, _) in &cur {
            level.push(w.clone());
        }
        level.sort();
        let index: BTreeMap<Vec<u32>, usize> = level.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); level.len()];
        for (i, w) in level.iter().enumerate() {
            let end = self.quiver.arrow(*w.last().unwrap()).target;
            for (a, ar) in self.quiver.arrows().iter().enumerate() {
                if ar.source == end && self.extension_is_normal(w, a as u32) {
                    let mut s = w[1..].to_vec();
                    s.push(a as u32);
                    if let Some(j) = index.get(&s) {
                        adj[i].push(*j);
                    }
                }
            }
        }
        has_cycle(&adj)
    }
}

fn has_cycle(adj: &[Vec<usize>]) -> bool {
    // iterative three-colour DFS
    let n = adj.len();
    let mut colour = vec![0u8; n];
    for s in 0..n {
        if colour[s] != 0 {
            continue;
        }
        let mut stack = vec![(s, 0usize)];
        colour[s] = 1;
        while let Some((v, i)) = stack.pop() {
            if i < adj[v].len() {
                stack.push((v, i + 1));
                let w = adj[v][i];
                match colour[w] {
                    1 => return true,
                    0 => {
                        colour[w] = 1;
                        stack.push((w, 0));
                    }
                    _ => {}
                }
            } else {
                colour[v] = 2;
            }
        }
    }
    false
}
