//! Computable algebras: a presentation together with normal forms for the
//! algebra and its opposite, plus the indecomposable projectives `e_v A`.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::groebner::NormalFormTable;
use crate::linalg::{Mat, SVec};
use crate::presentation::{Mode, Presentation};
use crate::quiver::{elem_normalize, Elem, Path, Quiver};

/// `(vertex, internal degree)`.
pub type Block = (u32, i32);

/// The right module `e_v A` with its basis of normal words.
#[derive(Clone, Debug)]
pub struct ProjData {
    pub vertex: u32,
    pub blocks: BTreeMap<Block, Vec<Path>>,
    pub index: BTreeMap<Path, u32>,
    /// Right multiplication by arrow `a` out of block `(source(a), d)`.
    pub act: BTreeMap<(u32, i32), Mat>,
}

#[derive(Debug)]
struct Side {
    pres: Presentation,
    table: NormalFormTable,
    words: Vec<Path>,
    proj: Vec<ProjData>,
}

#[derive(Debug)]
struct AlgebraData {
    sides: [Side; 2],
}

/// Shared handle to an algebra. Cheap to clone; `opposite` flips sides
/// without recomputation.
#[derive(Clone, Debug)]
pub struct Algebra {
    inner: Arc<AlgebraData>,
    op: bool,
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Algebra) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) && self.op == other.op
    }
}

impl Eq for Algebra {}

impl Side {
    fn build(pres: Presentation) -> Result<Side> {
        let table = NormalFormTable::compute(&pres)?;
        let words = table.normal_words();
        let graded = pres.mode.is_graded();
        let deg = |p: &Path| if graded { p.deg as i32 } else { 0 };
        let q = &pres.quiver;
        let mut proj = Vec::new();
        for v in 0..q.num_vertices() as u32 {
            let mut blocks: BTreeMap<Block, Vec<Path>> = BTreeMap::new();
            for w in words.iter().filter(|w| w.start == v) {
                blocks.entry((w.end, deg(w))).or_default().push(w.clone());
            }
            let mut index = BTreeMap::new();
            for ws in blocks.values() {
                for (i, w) in ws.iter().enumerate() {
                    index.insert(w.clone(), i as u32);
                }
            }
            let mut act = BTreeMap::new();
            for (&(end, d), ws) in &blocks {
                for (a, ar) in q.arrows().iter().enumerate() {
                    if ar.source != end {
                        continue;
                    }
                    let shift = if graded { ar.degree as i32 } else { 0 };
                    let tgt = (ar.target, d + shift);
                    let Some(tws) = blocks.get(&tgt) else { continue };
                    let ap = q.arrow_path(a as u32);
                    let cols: Vec<SVec> = ws
                        .iter()
                        .map(|w| {
                            let prod = q.compose(w, &ap).unwrap();
                            let nf = table.reduce_path(&prod);
                            let mut col: SVec = nf.iter().map(|(p, c)| (index[p], *c)).collect();
                            col.sort_unstable_by_key(|e| e.0);
                            col
                        })
                        .collect();
                    act.insert((a as u32, d), Mat::from_cols(tws.len(), cols));
                }
            }
            proj.push(ProjData { vertex: v, blocks, index, act });
        }
        Ok(Side { pres, table, words, proj })
    }
}

impl Algebra {
    pub fn new(p: &Presentation) -> Result<Algebra> {
        if let Mode::Graded { cap } = p.mode {
            if cap < p.max_relation_degree() {
                return Err(Error::BeyondCap { degree: p.max_relation_degree() as i64, cap });
            }
        }
        let a = Side::build(p.clone())?;
        let b = Side::build(p.opposite())?;
        Ok(Algebra { inner: Arc::new(AlgebraData { sides: [a, b] }), op: false })
    }

    fn side(&self) -> &Side {
        &self.inner.sides[self.op as usize]
    }

    pub fn opposite(&self) -> Algebra {
        Algebra { inner: self.inner.clone(), op: !self.op }
    }

    pub fn is_opposite(&self) -> bool {
        self.op
    }

    pub fn presentation(&self) -> &Presentation {
        &self.side().pres
    }

    pub fn table(&self) -> &NormalFormTable {
        &self.side().table
    }

    pub fn field(&self) -> &Field {
        &self.side().pres.field
    }

    pub fn quiver(&self) -> &Quiver {
        &self.side().pres.quiver
    }

    pub fn mode(&self) -> Mode {
        self.side().pres.mode
    }

    pub fn is_graded(&self) -> bool {
        self.mode().is_graded()
    }

    pub fn cap(&self) -> Option<u32> {
        self.mode().cap()
    }

    pub fn num_vertices(&self) -> usize {
        self.quiver().num_vertices()
    }

    /// Internal degree added by right multiplication with arrow `a`
    /// (zero in finite mode, where modules are ungraded).
    pub fn arrow_shift(&self, a: u32) -> i32 {
        if self.is_graded() {
            self.quiver().arrow(a).degree as i32
        } else {
            0
        }
    }

    pub fn path_degree(&self, p: &Path) -> i32 {
        if self.is_graded() {
            p.deg as i32
        } else {
            0
        }
    }

    /// All normal words (graded mode: up to the cap), in monomial order.
    pub fn words(&self) -> &[Path] {
        &self.side().words
    }

    pub fn dimension(&self) -> Option<usize> {
        (!self.is_graded()).then(|| self.words().len())
    }

    /// Normal words of weighted degree `d`.
    pub fn basis(&self, d: u32) -> Result<Vec<Path>> {
        if let Some(cap) = self.cap() {
            if d > cap {
                return Err(Error::BeyondCap { degree: d as i64, cap });
            }
        }
        Ok(self.words().iter().filter(|w| w.deg == d).cloned().collect())
    }

    /// `h_0, …, h_upto`.
    pub fn hilbert(&self, upto: u32) -> Result<Vec<usize>> {
        if let Some(cap) = self.cap() {
            if upto > cap {
                return Err(Error::BeyondCap { degree: upto as i64, cap });
            }
        }
        let mut h = alloc::vec![0usize; upto as usize + 1];
        for w in self.words() {
            if w.deg <= upto {
                h[w.deg as usize] += 1;
            }
        }
        Ok(h)
    }

    pub fn reduce(&self, e: &Elem) -> Elem {
        self.table().reduce(e)
    }

    pub fn reduce_path(&self, p: &Path) -> Elem {
        self.table().reduce_path(p)
    }

    /// Product of two elements in normal form.
    pub fn multiply(&self, u: &Elem, v: &Elem) -> Result<Elem> {
        let k = self.field();
        let q = self.quiver();
        let mut terms = Vec::new();
        for (p, a) in u {
            for (r, b) in v {
                if let Some(pr) = q.compose(p, r) {
                    if let Some(cap) = self.cap() {
                        if pr.deg > cap {
                            return Err(Error::BeyondCap { degree: pr.deg as i64, cap });
                        }
                    }
                    terms.push((pr, k.mul(a, b)));
                }
            }
        }
        Ok(self.reduce(&elem_normalize(k, terms)))
    }

    pub fn path_elem(&self, p: &Path) -> Elem {
        alloc::vec![(p.clone(), Scalar::ONE)]
    }

    /// An element read in the opposite algebra, in its normal form there.
    pub fn reverse_elem(&self, e: &Elem) -> Elem {
        let q = self.quiver();
        let op = self.opposite();
        op.reduce(&elem_normalize(self.field(), e.iter().map(|(p, c)| (q.reverse(p), *c)).collect()))
    }

    pub fn projective_data(&self, v: u32) -> &ProjData {
        &self.side().proj[v as usize]
    }

    /// Largest internal degree occurring in the basis (finite mode: 0).
    pub fn top_degree(&self) -> i32 {
        self.words().iter().map(|w| self.path_degree(w)).max().unwrap_or(0)
    }
}
