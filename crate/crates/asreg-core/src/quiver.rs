//! Quivers, paths and linear combinations of paths.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub name: String,
    pub source: u32,
    pub target: u32,
    pub degree: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

/// A path. The derived ordering is the monomial order used everywhere:
/// weighted degree, then left-lexicographic in arrow declaration order, with
/// trivial paths ordered by vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub deg: u32,
    pub word: Vec<u32>,
    pub start: u32,
    pub end: u32,
}

impl Path {
    pub fn trivial(v: u32) -> Path {
        Path { deg: 0, word: Vec::new(), start: v, end: v }
    }

    pub fn is_trivial(&self) -> bool {
        self.word.is_empty()
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// Position of the first occurrence of `sub` as a contiguous subword.
    pub fn find(&self, sub: &Path) -> Option<usize> {
        if sub.word.is_empty() {
            return (sub.start == self.start && self.word.is_empty()).then_some(0);
        }
        if sub.word.len() > self.word.len() {
            return None;
        }
        self.word.windows(sub.word.len()).position(|w| w == sub.word.as_slice())
    }
}

/// Linear combination of paths, sorted ascending, without zero terms.
pub type Elem = Vec<(Path, Scalar)>;

impl Quiver {
    pub fn new() -> Quiver {
        Quiver { vertices: Vec::new(), arrows: Vec::new() }
    }

    pub fn add_vertex(&mut self, name: &str) -> Result<u32> {
        if self.vertices.iter().any(|v| v == name) || self.arrows.iter().any(|a| a.name == name) {
            return Err(Error::Duplicate(name.to_string()));
        }
        self.vertices.push(name.to_string());
        Ok(self.vertices.len() as u32 - 1)
    }

    pub fn add_arrow(&mut self, name: &str, source: &str, target: &str, degree: u32) -> Result<u32> {
        let s = self.vertex(source)?;
        let t = self.vertex(target)?;
        self.add_arrow_idx(name, s, t, degree)
    }

    pub fn add_arrow_idx(&mut self, name: &str, source: u32, target: u32, degree: u32) -> Result<u32> {
        if self.arrows.iter().any(|a| a.name == name) || self.vertices.iter().any(|v| v == name) {
            return Err(Error::Duplicate(name.to_string()));
        }
        if degree == 0 {
            return Err(Error::Invalid(format!("arrow `{name}` must have positive degree")));
        }
        if source as usize >= self.vertices.len() || target as usize >= self.vertices.len() {
            return Err(Error::Invalid(format!("arrow `{name}` references a missing vertex")));
        }
        self.arrows.push(Arrow { name: name.to_string(), source, target, degree });
        Ok(self.arrows.len() as u32 - 1)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, a: u32) -> &Arrow {
        &self.arrows[a as usize]
    }

    pub fn vertex_name(&self, v: u32) -> &str {
        &self.vertices[v as usize]
    }

    pub fn vertex(&self, name: &str) -> Result<u32> {
        self.vertices
            .iter()
            .position(|v| v == name)
            .map(|i| i as u32)
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn arrow_index(&self, name: &str) -> Result<u32> {
        self.arrows
            .iter()
            .position(|a| a.name == name)
            .map(|i| i as u32)
            .ok_or_else(|| Error::UnknownArrow(name.to_string()))
    }

    pub fn max_arrow_degree(&self) -> u32 {
        self.arrows.iter().map(|a| a.degree).max().unwrap_or(1)
    }

    pub fn arrow_path(&self, a: u32) -> Path {
        let ar = self.arrow(a);
        Path { deg: ar.degree, word: alloc::vec![a], start: ar.source, end: ar.target }
    }

    /// Path through the given arrows, checking composability.
    pub fn path(&self, word: &[u32]) -> Result<Path> {
        let first = word.first().ok_or_else(|| Error::Invalid("empty arrow word".into()))?;
        let mut p = self.arrow_path(*first);
        for a in &word[1..] {
            p = self.compose(&p, &self.arrow_path(*a)).ok_or_else(|| {
                Error::NotComposable(self.word_names(word))
            })?;
        }
        Ok(p)
    }

    /// Parses `a.b.c` or `e(v)`.
    pub fn parse_path(&self, s: &str) -> Result<Path> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix("e(").and_then(|r| r.strip_suffix(')')) {
            return Ok(Path::trivial(self.vertex(inner.trim())?));
        }
        let word = s
            .split('.')
            .map(|n| self.arrow_index(n.trim()))
            .collect::<Result<Vec<_>>>()?;
        self.path(&word)
    }

    /// `p` followed by `q`, if composable.
    pub fn compose(&self, p: &Path, q: &Path) -> Option<Path> {
        if p.end != q.start {
            return None;
        }
        let mut word = p.word.clone();
        word.extend_from_slice(&q.word);
        Some(Path { deg: p.deg + q.deg, word, start: p.start, end: q.end })
    }

    /// Concatenation `p · q · r` of composable pieces.
    pub fn concat3(&self, p: &[u32], mid: &Path, r: &[u32]) -> Path {
        let mut word = Vec::with_capacity(p.len() + mid.word.len() + r.len());
        word.extend_from_slice(p);
        word.extend_from_slice(&mid.word);
        word.extend_from_slice(r);
        self.path_or_trivial(&word, mid.start)
    }

    pub(crate) fn path_or_trivial(&self, word: &[u32], v: u32) -> Path {
        if word.is_empty() {
            return Path::trivial(v);
        }
        let deg = word.iter().map(|a| self.arrow(*a).degree).sum();
        Path {
            deg,
            word: word.to_vec(),
            start: self.arrow(word[0]).source,
            end: self.arrow(*word.last().unwrap()).target,
        }
    }

    /// The same path read in the opposite quiver.
    pub fn reverse(&self, p: &Path) -> Path {
        let mut word = p.word.clone();
        word.reverse();
        Path { deg: p.deg, word, start: p.end, end: p.start }
    }

    /// Opposite quiver: same names, every arrow reversed.
    pub fn opposite(&self) -> Quiver {
        Quiver {
            vertices: self.vertices.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| Arrow { name: a.name.clone(), source: a.target, target: a.source, degree: a.degree })
                .collect(),
        }
    }

    pub fn word_names(&self, word: &[u32]) -> String {
        let mut s = String::new();
        for (i, a) in word.iter().enumerate() {
            if i > 0 {
                s.push('.');
            }
            s.push_str(&self.arrow(*a).name);
        }
        s
    }

    pub fn path_name(&self, p: &Path) -> String {
        if p.is_trivial() {
            format!("e({})", self.vertex_name(p.start))
        } else {
            self.word_names(&p.word)
        }
    }

    pub fn elem_string(&self, e: &Elem, k: &Field) -> String {
        if e.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        // descending order puts the leading path first
        for (i, (p, c)) in e.iter().rev().enumerate() {
            let c = k.signed_repr(c);
            if i > 0 {
                s.push_str(" + ");
            }
            let _ = write!(s, "{}*{}", c, self.path_name(p));
        }
        s
    }

    /// All paths of exactly `len` arrows, grouped by nothing, in monomial order.
    pub fn paths_of_length(&self, len: usize) -> Vec<Path> {
        let mut cur: Vec<Path> = (0..self.vertices.len() as u32).map(Path::trivial).collect();
        for _ in 0..len {
            let mut next = Vec::new();
            for p in &cur {
                for (a, ar) in self.arrows.iter().enumerate() {
                    if ar.source == p.end {
                        next.push(self.compose(p, &self.arrow_path(a as u32)).unwrap());
                    }
                }
            }
            cur = next;
        }
        cur.sort();
        cur
    }
}

impl Default for Quiver {
    fn default() -> Self {
        Quiver::new()
    }
}

/// Normalizes an unsorted list of terms: sorts, merges, drops zeros.
pub fn elem_normalize(k: &Field, terms: Vec<(Path, Scalar)>) -> Elem {
    let mut m: BTreeMap<Path, Scalar> = BTreeMap::new();
    for (p, c) in terms {
        let e = m.entry(p).or_insert(Scalar::ZERO);
        *e = k.add(e, &c);
    }
    m.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

pub fn elem_scale(k: &Field, a: &Scalar, e: &Elem) -> Elem {
    if a.is_zero() {
        return Vec::new();
    }
    e.iter().map(|(p, c)| (p.clone(), k.mul(a, c))).collect()
}

pub fn elem_leading(e: &Elem) -> Option<&(Path, Scalar)> {
    e.last()
}

pub fn elem_degree_range(e: &Elem) -> Option<(u32, u32)> {
    let lo = e.iter().map(|(p, _)| p.deg).min()?;
    let hi = e.iter().map(|(p, _)| p.deg).max()?;
    Some((lo, hi))
}
