//! Presentations: a quiver, a field and relations.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::quiver::{elem_normalize, Elem, Path, Quiver};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Finite-dimensional quotient; the Gröbner computation must close.
    Finite,
    /// Graded quotient, normal forms certified up to `cap`.
    Graded { cap: u32 },
}

impl Mode {
    pub fn cap(&self) -> Option<u32> {
        match self {
            Mode::Finite => None,
            Mode::Graded { cap } => Some(*cap),
        }
    }

    pub fn is_graded(&self) -> bool {
        matches!(self, Mode::Graded { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub field: Field,
    pub quiver: Quiver,
    pub relations: Vec<Elem>,
    pub mode: Mode,
}

impl Presentation {
    /// Validates and normalizes the relations.
    pub fn new(field: Field, quiver: Quiver, relations: Vec<Elem>, mode: Mode) -> Result<Presentation> {
        let mut rels = Vec::with_capacity(relations.len());
        for (index, r) in relations.into_iter().enumerate() {
            let r = elem_normalize(&field, r);
            if r.is_empty() {
                continue;
            }
            let (s, t) = (r[0].0.start, r[0].0.end);
            if r.iter().any(|(p, _)| p.start != s || p.end != t) {
                return Err(Error::NonParallel { index });
            }
            if r.iter().any(|(p, _)| p.is_trivial()) {
                return Err(Error::Invalid(format!(
                    "relation {index} involves a trivial path; relations must lie in the arrow ideal"
                )));
            }
            if mode.is_graded() && r.iter().any(|(p, _)| p.deg != r[0].0.deg) {
                return Err(Error::NonHomogeneous { index });
            }
            rels.push(r);
        }
        if let Mode::Graded { cap } = mode {
            if cap == 0 {
                return Err(Error::Invalid("graded cap must be positive".into()));
            }
            if let Some(d) = rels.iter().map(|r| r[0].0.deg).max() {
                if d > cap {
                    return Err(Error::BeyondCap { degree: d as i64, cap });
                }
            }
        }
        Ok(Presentation { field, quiver, relations: rels, mode })
    }

    /// Relation from `(coefficient, "a.b")` pairs; a convenience for callers
    /// building presentations in code.
    pub fn relation(quiver: &Quiver, field: &Field, terms: &[(i64, &str)]) -> Result<Elem> {
        let mut out = Vec::new();
        for (c, p) in terms {
            out.push((quiver.parse_path(p)?, field.from_i64(*c)));
        }
        Ok(elem_normalize(field, out))
    }

    /// Opposite presentation: arrows reversed, words reversed.
    pub fn opposite(&self) -> Presentation {
        let q = self.quiver.opposite();
        let rels = self
            .relations
            .iter()
            .map(|r| elem_normalize(&self.field, r.iter().map(|(p, c)| (self.quiver.reverse(p), *c)).collect()))
            .collect();
        Presentation { field: self.field, quiver: q, relations: rels, mode: self.mode }
    }

    pub fn with_mode(&self, mode: Mode) -> Result<Presentation> {
        Presentation::new(self.field, self.quiver.clone(), self.relations.clone(), mode)
    }

    pub fn max_relation_degree(&self) -> u32 {
        self.relations.iter().flat_map(|r| r.iter().map(|(p, _)| p.deg)).max().unwrap_or(0)
    }

    /// The same presentation with arrows renamed in declaration order.
    pub fn rename_arrows(&self, names: &[&str]) -> Result<Presentation> {
        if names.len() != self.quiver.num_arrows() {
            return Err(Error::Invalid("wrong number of arrow names".into()));
        }
        let mut q = Quiver::new();
        for v in self.quiver.vertices() {
            q.add_vertex(v)?;
        }
        for (a, n) in self.quiver.arrows().iter().zip(names) {
            q.add_arrow_idx(n, a.source, a.target, a.degree)?;
        }
        Ok(Presentation { field: self.field, quiver: q, relations: self.relations.clone(), mode: self.mode })
    }
}

/// The scalar-path pairs of a relation with coefficients printed signed.
pub fn relation_terms(p: &Presentation, r: &Elem) -> Vec<(Scalar, Path)> {
    r.iter().rev().map(|(path, c)| (p.field.signed_repr(c), path.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loops(names: &[&str]) -> Quiver {
        let mut q = Quiver::new();
        q.add_vertex("1").unwrap();
        for n in names {
            q.add_arrow(n, "1", "1", 1).unwrap();
        }
        q
    }

    #[test]
    fn rejects_non_homogeneous_in_graded_mode() {
        let q = loops(&["x"]);
        let k = Field::Rationals;
        let r = Presentation::relation(&q, &k, &[(1, "x.x"), (1, "x.x.x")]).unwrap();
        assert!(matches!(
            Presentation::new(k, q.clone(), alloc::vec![r.clone()], Mode::Graded { cap: 4 }),
            Err(Error::NonHomogeneous { index: 0 })
        ));
        assert!(Presentation::new(k, q, alloc::vec![r], Mode::Finite).is_ok());
    }

    #[test]
    fn rejects_non_parallel() {
        let mut q = Quiver::new();
        q.add_vertex("1").unwrap();
        q.add_vertex("2").unwrap();
        q.add_arrow("a", "1", "2", 1).unwrap();
        q.add_arrow("b", "2", "1", 1).unwrap();
        let k = Field::Rationals;
        let r = Presentation::relation(&q, &k, &[(1, "a.b"), (1, "b.a")]).unwrap();
        assert!(matches!(
            Presentation::new(k, q, alloc::vec![r], Mode::Finite),
            Err(Error::NonParallel { .. })
        ));
    }

    #[test]
    fn opposite_is_an_involution() {
        let q = loops(&["x", "y"]);
        let k = Field::Rationals;
        let r = Presentation::relation(&q, &k, &[(1, "x.y"), (2, "y.y"), (-1, "y.x")]).unwrap();
        let p = Presentation::new(k, q, alloc::vec![r], Mode::Graded { cap: 5 }).unwrap();
        assert_ne!(p.opposite(), p);
        assert_eq!(p.opposite().opposite(), p);
    }
}
