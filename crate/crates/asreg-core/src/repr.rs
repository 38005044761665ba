//! Finite-dimensional representations and module maps.
//!
//! A representation stores one space per `(vertex, degree)` block and one
//! matrix per arrow and source degree. In finite mode every block sits in
//! degree 0. Projectives over graded algebras are cut off at the cap; the
//! cut is recorded in `truncated_above`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::algebra::{Algebra, Block};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::{sv_unit, Echelon, Mat, SVec};
use crate::quiver::Elem;

/// Subspace of every block of a representation.
pub type Subspaces = BTreeMap<Block, Echelon>;

#[derive(Clone, Debug)]
pub struct Representation {
    alg: Algebra,
    dims: BTreeMap<Block, usize>,
    act: BTreeMap<(u32, i32), Mat>,
    truncated_above: Option<i32>,
}

/// A set of simple modules `(vertex, degree)`. Torsion computations match
/// on the vertex only, since the torsion class is closed under shifts.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SimpleSet(pub Vec<(u32, i32)>);

impl SimpleSet {
    pub fn new(mut v: Vec<(u32, i32)>) -> Result<SimpleSet> {
        let n = v.len();
        v.sort_unstable();
        v.dedup();
        if v.len() != n {
            return Err(Error::Invalid("simple set has repeated entries".into()));
        }
        Ok(SimpleSet(v))
    }

    pub fn vertices(&self) -> BTreeSet<u32> {
        self.0.iter().map(|e| e.0).collect()
    }

    pub fn contains_vertex(&self, v: u32) -> bool {
        self.0.iter().any(|e| e.0 == v)
    }
}

impl Representation {
    /// Validates shapes and checks every relation.
    pub fn new(
        alg: &Algebra,
        dims: BTreeMap<Block, usize>,
        act: BTreeMap<(u32, i32), Mat>,
        truncated_above: Option<i32>,
    ) -> Result<Representation> {
        let r = Representation::build(alg, dims, act, truncated_above)?;
        r.check_relations()?;
        Ok(r)
    }

    /// Like [`Representation::new`] without the relation check; for modules
    /// that satisfy the relations by construction.
    pub(crate) fn build(
        alg: &Algebra,
        dims: BTreeMap<Block, usize>,
        act: BTreeMap<(u32, i32), Mat>,
        truncated_above: Option<i32>,
    ) -> Result<Representation> {
        let dims: BTreeMap<Block, usize> = dims.into_iter().filter(|(_, d)| *d > 0).collect();
        let q = alg.quiver();
        for b in dims.keys() {
            if b.0 as usize >= q.num_vertices() {
                return Err(Error::Invalid(format!("block at missing vertex {}", b.0)));
            }
            if !alg.is_graded() && b.1 != 0 {
                return Err(Error::Invalid("modules over finite-mode algebras live in degree 0".into()));
            }
        }
        let mut clean = BTreeMap::new();
        for ((a, d), m) in act {
            if a as usize >= q.num_arrows() {
                return Err(Error::Invalid(format!("matrix for missing arrow {a}")));
            }
            let ar = q.arrow(a);
            let src = dims.get(&(ar.source, d)).copied().unwrap_or(0);
            let tgt = dims.get(&(ar.target, d + alg.arrow_shift(a))).copied().unwrap_or(0);
            if m.ncols() != src || m.nrows != tgt {
                return Err(Error::Invalid(format!(
                    "matrix for arrow `{}` in degree {d} has shape {}x{}, expected {tgt}x{src}",
                    ar.name,
                    m.nrows,
                    m.ncols()
                )));
            }
            if !m.is_zero() {
                clean.insert((a, d), m);
            }
        }
        Ok(Representation { alg: alg.clone(), dims, act: clean, truncated_above })
    }

    fn check_relations(&self) -> Result<()> {
        let k = self.field();
        let q = self.alg.quiver();
        for (ri, rel) in self.alg.presentation().relations.iter().enumerate() {
            let s = rel[0].0.start;
            for (&(v, d), &n) in &self.dims {
                if v != s {
                    continue;
                }
                let mut total: Option<(Block, Mat)> = None;
                let mut skip = false;
                for (p, c) in rel {
                    let (blk, m) = self.word_matrix((v, d), n, &p.word);
                    if let Some(t) = self.truncated_above {
                        if blk.1 > t {
                            skip = true;
                            break;
                        }
                    }
                    let m = m.scale(k, c);
                    total = Some(match total {
                        None => (blk, m),
                        Some((b0, acc)) => (b0, acc.add(k, &m)),
                    });
                }
                if skip {
                    continue;
                }
                if let Some((_, m)) = total {
                    if !m.is_zero() {
                        return Err(Error::RelationViolated(format!(
                            "relation {ri} ({}) is nonzero on the block at vertex {} degree {d}",
                            q.elem_string(rel, k),
                            q.vertex_name(v)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Matrix of the action of an arrow word starting at `b` (of size `n`).
    fn word_matrix(&self, b: Block, n: usize, word: &[u32]) -> (Block, Mat) {
        let k = self.field();
        let mut cur = Mat::identity(n);
        let mut blk = b;
        for &a in word {
            let next = (self.alg.quiver().arrow(a).target, blk.1 + self.alg.arrow_shift(a));
            let rows = self.dim_at(next);
            cur = match self.act.get(&(a, blk.1)) {
                Some(m) if m.ncols() == cur.nrows => m.compose(k, &cur),
                _ => Mat::zero(rows, n),
            };
            blk = next;
        }
        (blk, cur)
    }

    pub fn simple(alg: &Algebra, v: u32, degree: i32) -> Result<Representation> {
        if v as usize >= alg.num_vertices() {
            return Err(Error::UnknownVertex(format!("{v}")));
        }
        let degree = if alg.is_graded() { degree } else { 0 };
        Representation::build(alg, BTreeMap::from([((v, degree), 1)]), BTreeMap::new(), None)
    }

    /// `e_v A` with its generator placed in `degree`; truncated at the cap.
    pub fn projective(alg: &Algebra, v: u32, degree: i32) -> Result<Representation> {
        if v as usize >= alg.num_vertices() {
            return Err(Error::UnknownVertex(format!("{v}")));
        }
        let degree = if alg.is_graded() { degree } else { 0 };
        let pd = alg.projective_data(v);
        let dims = pd.blocks.iter().map(|(&(w, d), ws)| ((w, d + degree), ws.len())).collect();
        let act = pd.act.iter().map(|(&(a, d), m)| ((a, d + degree), m.clone())).collect();
        let trunc = alg.cap().map(|c| c as i32 + degree);
        Representation::build(alg, dims, act, trunc)
    }

    /// Ungraded convenience constructor: one dimension per vertex and one
    /// matrix per arrow.
    pub fn from_matrices(alg: &Algebra, dims: &[usize], mats: Vec<Mat>) -> Result<Representation> {
        if dims.len() != alg.num_vertices() || mats.len() != alg.quiver().num_arrows() {
            return Err(Error::Invalid("wrong number of spaces or matrices".into()));
        }
        let d: BTreeMap<Block, usize> = dims.iter().enumerate().map(|(v, n)| ((v as u32, 0), *n)).collect();
        let a = mats.into_iter().enumerate().map(|(i, m)| ((i as u32, 0), m)).collect();
        Representation::new(alg, d, a, None)
    }

    pub fn zero(alg: &Algebra) -> Representation {
        Representation { alg: alg.clone(), dims: BTreeMap::new(), act: BTreeMap::new(), truncated_above: None }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn field(&self) -> &Field {
        self.alg.field()
    }

    pub fn dims(&self) -> &BTreeMap<Block, usize> {
        &self.dims
    }

    pub fn dim_at(&self, b: Block) -> usize {
        self.dims.get(&b).copied().unwrap_or(0)
    }

    pub fn dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn truncated_above(&self) -> Option<i32> {
        self.truncated_above
    }

    pub fn actions(&self) -> &BTreeMap<(u32, i32), Mat> {
        &self.act
    }

    pub fn action(&self, a: u32, d: i32) -> Option<&Mat> {
        self.act.get(&(a, d))
    }

    /// Total dimension at each vertex.
    pub fn dim_vector(&self) -> Vec<usize> {
        let mut v = vec![0; self.alg.num_vertices()];
        for (&(x, _), &n) in &self.dims {
            v[x as usize] += n;
        }
        v
    }

    pub fn degree_range(&self) -> Option<(i32, i32)> {
        let lo = self.dims.keys().map(|b| b.1).min()?;
        let hi = self.dims.keys().map(|b| b.1).max()?;
        Some((lo, hi))
    }

    pub fn target_block(&self, a: u32, d: i32) -> Block {
        (self.alg.quiver().arrow(a).target, d + self.alg.arrow_shift(a))
    }

    pub fn apply_arrow(&self, a: u32, d: i32, v: &[(u32, Scalar)]) -> SVec {
        match self.act.get(&(a, d)) {
            Some(m) => m.apply(self.field(), v),
            None => Vec::new(),
        }
    }

    /// Acts by the arrows of `word` in order.
    pub fn apply_word(&self, b: Block, v: &[(u32, Scalar)], word: &[u32]) -> (Block, SVec) {
        let mut cur = v.to_vec();
        let mut blk = b;
        for &a in word {
            cur = self.apply_arrow(a, blk.1, &cur);
            blk = self.target_block(a, blk.1);
            if cur.is_empty() {
                break;
            }
        }
        (blk, cur)
    }

    /// Acts by an algebra element; terms whose path does not start at the
    /// vertex of `b` act by zero.
    pub fn apply_elem(&self, b: Block, v: &[(u32, Scalar)], e: &Elem) -> BTreeMap<Block, SVec> {
        let k = *self.field();
        let mut out: BTreeMap<Block, SVec> = BTreeMap::new();
        for (p, c) in e {
            if p.start != b.0 {
                continue;
            }
            let (blk, w) = self.apply_word(b, v, &p.word);
            if w.is_empty() {
                continue;
            }
            let cur = out.remove(&blk).unwrap_or_default();
            let s = crate::linalg::sv_axpy(&k, &cur, c, &w);
            if !s.is_empty() {
                out.insert(blk, s);
            }
        }
        out
    }

    /// The same module with every degree moved by `s`.
    pub fn shifted(&self, s: i32) -> Representation {
        if !self.alg.is_graded() || s == 0 {
            return self.clone();
        }
        Representation {
            alg: self.alg.clone(),
            dims: self.dims.iter().map(|(&(v, d), &n)| ((v, d + s), n)).collect(),
            act: self.act.iter().map(|(&(a, d), m)| ((a, d + s), m.clone())).collect(),
            truncated_above: self.truncated_above.map(|t| t + s),
        }
    }

    pub fn direct_sum(parts: &[Representation]) -> Result<Representation> {
        let alg = parts.first().ok_or_else(|| Error::Invalid("empty direct sum".into()))?.alg.clone();
        if parts.iter().any(|p| p.alg != alg) {
            return Err(Error::AlgebraMismatch);
        }
        let mut dims: BTreeMap<Block, usize> = BTreeMap::new();
        for p in parts {
            for (b, n) in &p.dims {
                *dims.entry(*b).or_default() += n;
            }
        }
        let mut act = BTreeMap::new();
        let q = alg.quiver();
        let keys: BTreeSet<(u32, i32)> = parts.iter().flat_map(|p| p.act.keys().copied()).collect();
        for (a, d) in keys {
            let src = (q.arrow(a).source, d);
            let tgt = (q.arrow(a).target, d + alg.arrow_shift(a));
            let mut cols = Vec::new();
            let mut row_off = 0u32;
            for p in parts {
                let (ns, nt) = (p.dim_at(src), p.dim_at(tgt));
                match p.act.get(&(a, d)) {
                    Some(m) => {
                        for c in &m.cols {
                            cols.push(c.iter().map(|(i, x)| (i + row_off, *x)).collect());
                        }
                    }
                    None => cols.extend((0..ns).map(|_| Vec::new())),
                }
                row_off += nt as u32;
            }
            act.insert((a, d), Mat::from_cols(row_off as usize, cols));
        }
        let trunc = parts.iter().filter_map(|p| p.truncated_above).min();
        Representation::build(&alg, dims, act, trunc)
    }

    /// `D = Hom_K(-, K)`, a representation of the opposite algebra.
    pub fn dual(&self) -> Result<Representation> {
        if self.truncated_above.is_some() {
            return Err(Error::Unsupported("dual of a truncated module".into()));
        }
        let op = self.alg.opposite();
        let dims = self.dims.iter().map(|(&(v, d), &n)| ((v, -d), n)).collect();
        let act = self
            .act
            .iter()
            .map(|(&(a, d), m)| ((a, -d - self.alg.arrow_shift(a)), m.transpose()))
            .collect();
        Representation::build(&op, dims, act, None)
    }

    /// Submodule generated by the given vectors.
    pub fn closure(&self, gens: Vec<(Block, SVec)>) -> Subspaces {
        let mut s: Subspaces = BTreeMap::new();
        let mut queue = gens;
        let q = self.alg.quiver();
        while let Some((b, v)) = queue.pop() {
            let e = s.entry(b).or_insert_with(|| Echelon::new(*self.field(), self.dim_at(b)));
            if !e.insert(&v) {
                continue;
            }
            for (a, ar) in q.arrows().iter().enumerate() {
                if ar.source != b.0 {
                    continue;
                }
                let w = self.apply_arrow(a as u32, b.1, &v);
                if !w.is_empty() {
                    queue.push((self.target_block(a as u32, b.1), w));
                }
            }
        }
        s
    }

    fn empty_ech(&self, s: &Subspaces, b: Block) -> Echelon {
        s.get(&b).cloned().unwrap_or_else(|| Echelon::new(*self.field(), self.dim_at(b)))
    }

    /// The submodule spanned by `s` (assumed closed) and its inclusion.
    pub fn sub_rep(&self, s: &Subspaces) -> (Representation, ModuleMap) {
        let mut dims = BTreeMap::new();
        let mut incl = BTreeMap::new();
        for (b, e) in s {
            if e.rank() > 0 {
                dims.insert(*b, e.rank());
                incl.insert(*b, Mat::from_cols(self.dim_at(*b), e.rows().to_vec()));
            }
        }
        let mut act = BTreeMap::new();
        for (&(a, d), m) in &self.act {
            let src = (self.alg.quiver().arrow(a).source, d);
            let tgt = self.target_block(a, d);
            let (Some(es), Some(et)) = (s.get(&src), s.get(&tgt)) else { continue };
            if es.rank() == 0 || et.rank() == 0 {
                continue;
            }
            let cols = es
                .rows()
                .iter()
                .map(|r| et.coords(&m.apply(self.field(), r)).expect("subspaces are closed under the action"))
                .collect();
            act.insert((a, d), Mat::from_cols(et.rank(), cols));
        }
        let sub = Representation::build(&self.alg, dims.clone(), act, self.truncated_above)
            .expect("submodule shapes are consistent");
        let map = ModuleMap { src: dims, tgt: self.dims.clone(), blocks: incl };
        (sub, map)
    }

    /// Quotient by `s` (assumed closed) and the projection.
    pub fn quotient(&self, s: &Subspaces) -> (Representation, ModuleMap) {
        let k = *self.field();
        let mut dims = BTreeMap::new();
        let mut proj = BTreeMap::new();
        let mut free: BTreeMap<Block, (Vec<u32>, Vec<u32>)> = BTreeMap::new();
        for (&b, &n) in &self.dims {
            let e = self.empty_ech(s, b);
            let fi = e.free_indices();
            let pos = e.free_positions();
            if !fi.is_empty() {
                dims.insert(b, fi.len());
                let cols = (0..n as u32).map(|j| e.quotient_coords(&sv_unit(j), &pos)).collect();
                proj.insert(b, Mat::from_cols(fi.len(), cols));
            }
            free.insert(b, (fi, pos));
        }
        let mut act = BTreeMap::new();
        for (&(a, d), m) in &self.act {
            let src = (self.alg.quiver().arrow(a).source, d);
            let tgt = self.target_block(a, d);
            let (fs, _) = &free[&src];
            let (ft, pt) = &free[&tgt];
            if fs.is_empty() || ft.is_empty() {
                continue;
            }
            let et = self.empty_ech(s, tgt);
            let cols = fs.iter().map(|&i| et.quotient_coords(&m.cols[i as usize], pt)).collect();
            act.insert((a, d), Mat::from_cols(ft.len(), cols));
        }
        let _ = k;
        let quo = Representation::build(&self.alg, dims.clone(), act, self.truncated_above)
            .expect("quotient shapes are consistent");
        let map = ModuleMap { src: self.dims.clone(), tgt: dims, blocks: proj };
        (quo, map)
    }

    /// Span of the images of all arrows.
    pub fn radical_space(&self) -> Subspaces {
        let mut s: Subspaces = BTreeMap::new();
        for (&(a, d), m) in &self.act {
            let t = self.target_block(a, d);
            let e = s.entry(t).or_insert_with(|| Echelon::new(*self.field(), self.dim_at(t)));
            for c in &m.cols {
                e.insert(c);
            }
        }
        s
    }

    /// `rad^k M`, the span of the images of all paths of length `k`.
    pub fn radical_power_space(&self, k: usize) -> Subspaces {
        let f = *self.field();
        let mut s: Subspaces = self
            .dims
            .iter()
            .map(|(&b, &n)| (b, Echelon::from_vectors(f, n, &(0..n as u32).map(sv_unit).collect::<Vec<_>>())))
            .collect();
        for _ in 0..k {
            let mut next: Subspaces = BTreeMap::new();
            for (&(a, d), m) in &self.act {
                let Some(src) = s.get(&(self.alg.quiver().arrow(a).source, d)) else { continue };
                let t = self.target_block(a, d);
                let e = next.entry(t).or_insert_with(|| Echelon::new(f, self.dim_at(t)));
                for r in src.rows() {
                    e.insert(&m.apply(&f, r));
                }
            }
            s = next;
        }
        s
    }

    /// `M / rad^k M`.
    pub fn loewy_quotient(&self, k: usize) -> Representation {
        self.quotient(&self.radical_power_space(k)).0
    }

    /// Joint kernel of all arrows leaving each block.
    pub fn socle_space(&self) -> Subspaces {
        let k = *self.field();
        let q = self.alg.quiver();
        let mut s: Subspaces = BTreeMap::new();
        for (&b, &n) in &self.dims {
            let mut stack: Option<Mat> = None;
            for (a, ar) in q.arrows().iter().enumerate() {
                if ar.source != b.0 {
                    continue;
                }
                if let Some(m) = self.act.get(&(a as u32, b.1)) {
                    stack = Some(match stack {
                        None => m.clone(),
                        Some(st) => st.vstack(m),
                    });
                }
            }
            let basis = match stack {
                None => (0..n as u32).map(sv_unit).collect(),
                Some(m) => m.kernel(&k),
            };
            s.insert(b, Echelon::from_vectors(k, n, &basis));
        }
        s
    }

    pub fn radical(&self) -> (Representation, ModuleMap) {
        self.sub_rep(&self.radical_space())
    }

    pub fn socle(&self) -> (Representation, ModuleMap) {
        self.sub_rep(&self.socle_space())
    }

    pub fn top(&self) -> (Representation, ModuleMap) {
        self.quotient(&self.radical_space())
    }

    /// Dimensions of the radical layers `rad^i M / rad^{i+1} M`.
    pub fn radical_layers(&self) -> Vec<BTreeMap<Block, usize>> {
        let mut out = Vec::new();
        let mut cur = self.clone();
        while !cur.is_zero() {
            let (t, _) = cur.top();
            out.push(t.dims.clone());
            cur = cur.radical().0;
        }
        out
    }

    pub fn loewy_length(&self) -> usize {
        self.radical_layers().len()
    }

    /// Multiset of composition factors `(vertex, degree) -> multiplicity`.
    pub fn composition_factors(&self) -> BTreeMap<Block, usize> {
        let mut out: BTreeMap<Block, usize> = BTreeMap::new();
        for layer in self.radical_layers() {
            for (b, n) in layer {
                *out.entry(b).or_default() += n;
            }
        }
        out
    }

    pub fn is_simple(&self) -> bool {
        self.dim() == 1
    }

    /// Largest submodule with all composition factors at vertices in `s`,
    /// by iterating socles of successive quotients.
    pub fn torsion_space(&self, s: &SimpleSet) -> Subspaces {
        let mut u: Subspaces = BTreeMap::new();
        loop {
            let (quo, _) = self.quotient(&u);
            let soc = quo.socle_space();
            let mut changed = false;
            for (b, e) in soc {
                if !s.contains_vertex(b.0) || e.rank() == 0 {
                    continue;
                }
                let cur = self.empty_ech(&u, b);
                let fi = cur.free_indices();
                let target = u.entry(b).or_insert(cur);
                for r in e.rows() {
                    let lifted: SVec = r.iter().map(|(i, x)| (fi[*i as usize], *x)).collect();
                    changed |= target.insert(&lifted);
                }
            }
            if !changed {
                return u;
            }
        }
    }

    pub fn torsion_submodule(&self, s: &SimpleSet) -> (Representation, ModuleMap) {
        self.sub_rep(&self.torsion_space(s))
    }

    /// Basis of the degree-preserving module maps `self -> n`.
    pub fn hom_space(&self, n: &Representation) -> Result<Vec<ModuleMap>> {
        if self.alg != n.alg {
            return Err(Error::AlgebraMismatch);
        }
        let k = *self.field();
        let m = self;
        // variable layout: block B contributes n_B x m_B unknowns, row-major
        let mut off: BTreeMap<Block, (u32, usize, usize)> = BTreeMap::new();
        let mut nvars = 0u32;
        for (&b, &mb) in &m.dims {
            let nb = n.dim_at(b);
            if nb > 0 {
                off.insert(b, (nvars, nb, mb));
                nvars += (nb * mb) as u32;
            }
        }
        let var = |b: Block, i: usize, j: usize| -> Option<u32> {
            off.get(&b).map(|&(o, _, mb)| o + (i * mb + j) as u32)
        };
        let q = self.alg.quiver();
        let mut rows: Vec<SVec> = Vec::new();
        let degrees: BTreeSet<i32> = m.dims.keys().chain(n.dims.keys()).map(|b| b.1).collect();
        for (a, ar) in q.arrows().iter().enumerate() {
            let a = a as u32;
            for &d in &degrees {
                let b1 = (ar.source, d);
                let b2 = (ar.target, d + self.alg.arrow_shift(a));
                let (mb1, nb2) = (m.dim_at(b1), n.dim_at(b2));
                if mb1 == 0 || nb2 == 0 {
                    continue;
                }
                let mut eq: Vec<Vec<(u32, Scalar)>> = vec![Vec::new(); nb2 * mb1];
                // N_a f_{b1}
                if let Some(na) = n.act.get(&(a, d)) {
                    for (l, col) in na.cols.iter().enumerate() {
                        for (i, x) in col {
                            for j in 0..mb1 {
                                if let Some(v) = var(b1, l, j) {
                                    eq[*i as usize * mb1 + j].push((v, *x));
                                }
                            }
                        }
                    }
                }
                // - f_{b2} M_a
                if let Some(ma) = m.act.get(&(a, d)) {
                    for (j, col) in ma.cols.iter().enumerate() {
                        for (l, x) in col {
                            for i in 0..nb2 {
                                if let Some(v) = var(b2, i, *l as usize) {
                                    eq[i * mb1 + j].push((v, k.neg(x)));
                                }
                            }
                        }
                    }
                }
                for mut e in eq {
                    if e.is_empty() {
                        continue;
                    }
                    e.sort_unstable_by_key(|t| t.0);
                    let mut merged: SVec = Vec::with_capacity(e.len());
                    for (v, x) in e {
                        match merged.last_mut() {
                            Some(last) if last.0 == v => last.1 = k.add(&last.1, &x),
                            _ => merged.push((v, x)),
                        }
                    }
                    merged.retain(|t| !t.1.is_zero());
                    if !merged.is_empty() {
                        rows.push(merged);
                    }
                }
            }
        }
        let system = Mat::from_cols(nvars as usize, rows).transpose();
        let kernel = if nvars == 0 { Vec::new() } else { system.kernel(&k) };
        let mut out = Vec::new();
        for z in kernel {
            let mut blocks = BTreeMap::new();
            for (&b, &(o, nb, mb)) in &off {
                let mut cols = vec![Vec::new(); mb];
                for (v, x) in &z {
                    if *v >= o && *v < o + (nb * mb) as u32 {
                        let idx = (*v - o) as usize;
                        cols[idx % mb].push(((idx / mb) as u32, *x));
                    }
                }
                for c in cols.iter_mut() {
                    c.sort_unstable_by_key(|e| e.0);
                }
                let mat = Mat::from_cols(nb, cols);
                if !mat.is_zero() {
                    blocks.insert(b, mat);
                }
            }
            out.push(ModuleMap { src: m.dims.clone(), tgt: n.dims.clone(), blocks });
        }
        Ok(out)
    }

    pub fn hom_dim(&self, n: &Representation) -> Result<usize> {
        Ok(self.hom_space(n)?.len())
    }

    pub fn is_isomorphic(&self, n: &Representation) -> Result<Iso> {
        if self.alg != n.alg {
            return Err(Error::AlgebraMismatch);
        }
        if self.dims != n.dims {
            return Ok(Iso::No);
        }
        if self.is_zero() {
            return Ok(Iso::Yes(ModuleMap::zero(&self.dims, &n.dims)));
        }
        let h = self.hom_space(n)?;
        if h.is_empty() {
            return Ok(Iso::No);
        }
        let e1 = self.hom_dim(self)?;
        let e2 = n.hom_dim(n)?;
        if e1 != h.len() || e2 != h.len() {
            return Ok(Iso::No);
        }
        Ok(find_invertible(self.field(), &h, self.dim()))
    }
}

/// Outcome of an isomorphism test.
#[derive(Clone, Debug)]
pub enum Iso {
    Yes(ModuleMap),
    No,
    /// Neither a witness nor an exact obstruction was found within budget.
    Undecided,
}

impl Iso {
    pub fn is_yes(&self) -> bool {
        matches!(self, Iso::Yes(_))
    }
}

const RANDOM_TRIES: usize = 24;
const GRID_BUDGET: u128 = 200_000;

/// Searches the span of `maps` for an invertible map: seeded random
/// combinations first, then an exact sweep of a grid large enough to be
/// conclusive (all of `F_p^r`, or `{0..n}^r` over `Q` where `n` bounds the
/// degree of the determinant).
pub(crate) fn find_invertible(k: &Field, maps: &[ModuleMap], n: usize) -> Iso {
    let r = maps.len();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_a5e9);
    let sample = |rng: &mut ChaCha8Rng| -> Scalar {
        match k {
            Field::Rationals => k.from_i64((rng.next_u32() % 11) as i64 - 5),
            Field::Prime(p) => k.from_i64((rng.next_u64() % p) as i64),
        }
    };
    for _ in 0..RANDOM_TRIES {
        let c: Vec<Scalar> = (0..r).map(|_| sample(&mut rng)).collect();
        let f = ModuleMap::combination(k, maps, &c);
        if f.is_iso(k) {
            return Iso::Yes(f);
        }
    }
    let base: u128 = match k {
        Field::Rationals => n as u128 + 1,
        Field::Prime(p) => *p as u128,
    };
    let points = (0..r).try_fold(1u128, |acc, _| acc.checked_mul(base).filter(|x| *x <= GRID_BUDGET));
    let Some(points) = points else { return Iso::Undecided };
    for idx in 0..points {
        let mut t = idx;
        let c: Vec<Scalar> = (0..r)
            .map(|_| {
                let digit = (t % base) as i64;
                t /= base;
                k.from_i64(digit)
            })
            .collect();
        let f = ModuleMap::combination(k, maps, &c);
        if f.is_iso(k) {
            return Iso::Yes(f);
        }
    }
    Iso::No
}

/// A map of representations, one matrix per block (absent blocks are zero).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMap {
    pub src: BTreeMap<Block, usize>,
    pub tgt: BTreeMap<Block, usize>,
    pub blocks: BTreeMap<Block, Mat>,
}

impl ModuleMap {
    pub fn zero(src: &BTreeMap<Block, usize>, tgt: &BTreeMap<Block, usize>) -> ModuleMap {
        ModuleMap { src: src.clone(), tgt: tgt.clone(), blocks: BTreeMap::new() }
    }

    pub fn identity(m: &Representation) -> ModuleMap {
        ModuleMap {
            src: m.dims.clone(),
            tgt: m.dims.clone(),
            blocks: m.dims.iter().map(|(b, n)| (*b, Mat::identity(*n))).collect(),
        }
    }

    pub fn block(&self, b: Block) -> Mat {
        self.blocks.get(&b).cloned().unwrap_or_else(|| {
            Mat::zero(self.tgt.get(&b).copied().unwrap_or(0), self.src.get(&b).copied().unwrap_or(0))
        })
    }

    pub fn apply(&self, k: &Field, b: Block, v: &[(u32, Scalar)]) -> SVec {
        match self.blocks.get(&b) {
            Some(m) => m.apply(k, v),
            None => Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.values().all(|m| m.is_zero())
    }

    /// `self ∘ inner`.
    pub fn compose(&self, k: &Field, inner: &ModuleMap) -> ModuleMap {
        let mut blocks = BTreeMap::new();
        for (b, m) in &inner.blocks {
            if let Some(o) = self.blocks.get(b) {
                let c = o.compose(k, m);
                if !c.is_zero() {
                    blocks.insert(*b, c);
                }
            }
        }
        ModuleMap { src: inner.src.clone(), tgt: self.tgt.clone(), blocks }
    }

    pub fn combination(k: &Field, maps: &[ModuleMap], c: &[Scalar]) -> ModuleMap {
        let mut blocks: BTreeMap<Block, Mat> = BTreeMap::new();
        for (m, x) in maps.iter().zip(c) {
            if x.is_zero() {
                continue;
            }
            for (b, mat) in &m.blocks {
                let s = mat.scale(k, x);
                let e = blocks.remove(b);
                blocks.insert(*b, match e {
                    Some(acc) => acc.add(k, &s),
                    None => s,
                });
            }
        }
        blocks.retain(|_, m| !m.is_zero());
        ModuleMap { src: maps[0].src.clone(), tgt: maps[0].tgt.clone(), blocks }
    }

    /// Every block square and invertible, and the supports agree.
    pub fn is_iso(&self, k: &Field) -> bool {
        self.src == self.tgt && self.src.keys().all(|b| self.blocks.get(b).is_some_and(|m| m.is_invertible(k)))
    }

    pub fn kernel_space(&self, k: &Field) -> Subspaces {
        self.src
            .iter()
            .map(|(b, n)| {
                let basis = match self.blocks.get(b) {
                    Some(m) => m.kernel(k),
                    None => (0..*n as u32).map(sv_unit).collect(),
                };
                (*b, Echelon::from_vectors(*k, *n, &basis))
            })
            .collect()
    }

    pub fn image_space(&self, k: &Field) -> Subspaces {
        self.tgt
            .iter()
            .map(|(b, n)| {
                let e = match self.blocks.get(b) {
                    Some(m) => m.image(k),
                    None => Echelon::new(*k, *n),
                };
                (*b, e)
            })
            .collect()
    }

    pub fn rank(&self, k: &Field) -> usize {
        self.blocks.values().map(|m| m.rank(k)).sum()
    }

    /// Checks the naturality squares against the given modules.
    pub fn is_natural(&self, m: &Representation, n: &Representation) -> bool {
        let k = *m.field();
        let q = m.alg.quiver();
        for (a, ar) in q.arrows().iter().enumerate() {
            let a = a as u32;
            let degrees: BTreeSet<i32> = m.dims.keys().map(|b| b.1).collect();
            for d in degrees {
                let b1 = (ar.source, d);
                let b2 = m.target_block(a, d);
                if m.dim_at(b1) == 0 {
                    continue;
                }
                for j in 0..m.dim_at(b1) as u32 {
                    let e = sv_unit(j);
                    let lhs = n.apply_arrow(a, d, &self.apply(&k, b1, &e));
                    let rhs = self.apply(&k, b2, &m.apply_arrow(a, d, &e));
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{Mode, Presentation};
    use crate::quiver::Quiver;

    fn trunc_poly(n: usize) -> Algebra {
        let mut q = Quiver::new();
        q.add_vertex("1").unwrap();
        q.add_arrow("x", "1", "1", 1).unwrap();
        let k = Field::Rationals;
        let w = vec!["x"; n].join(".");
        let r = Presentation::relation(&q, &k, &[(1, &w)]).unwrap();
        Algebra::new(&Presentation::new(k, q, vec![r], Mode::Finite).unwrap()).unwrap()
    }

    #[test]
    fn uniserial_projective() {
        let a = trunc_poly(3);
        let p = Representation::projective(&a, 0, 0).unwrap();
        assert_eq!(p.dim(), 3);
        assert_eq!(p.radical().0.dim(), 2);
        assert_eq!(p.socle().0.dim(), 1);
        assert_eq!(p.composition_factors(), BTreeMap::from([((0, 0), 3)]));
        let s = Representation::simple(&a, 0, 0).unwrap();
        assert_eq!(s.hom_dim(&p).unwrap(), 1);
        assert_eq!(p.hom_dim(&p).unwrap(), 3);
    }

    #[test]
    fn relations_are_checked() {
        let a = trunc_poly(2);
        let k = Field::Rationals;
        let bad = Mat::from_rows(2, 2, &[vec![k.zero(), k.zero()], vec![k.one(), k.one()]]);
        assert!(matches!(
            Representation::from_matrices(&a, &[2], vec![bad]),
            Err(Error::RelationViolated(_))
        ));
    }

    #[test]
    fn dual_of_self_injective_projective() {
        let a = trunc_poly(3);
        let p = Representation::projective(&a, 0, 0).unwrap();
        let d = p.dual().unwrap();
        let pop = Representation::projective(&a.opposite(), 0, 0).unwrap();
        assert!(d.is_isomorphic(&pop).unwrap().is_yes());
        assert!(d.dual().unwrap().is_isomorphic(&p).unwrap().is_yes());
    }

    #[test]
    fn non_isomorphic_same_dimension() {
        let a = trunc_poly(3);
        let k = Field::Rationals;
        let s = Representation::simple(&a, 0, 0).unwrap();
        let ss = Representation::direct_sum(&[s.clone(), s]).unwrap();
        let l = Representation::from_matrices(
            &a,
            &[2],
            vec![Mat::from_rows(2, 2, &[vec![k.zero(), k.zero()], vec![k.one(), k.zero()]])],
        )
        .unwrap();
        assert!(matches!(ss.is_isomorphic(&l).unwrap(), Iso::No));
    }

    #[test]
    fn torsion_of_projective() {
        let a = trunc_poly(3);
        let p = Representation::projective(&a, 0, 0).unwrap();
        assert_eq!(p.torsion_submodule(&SimpleSet(vec![(0, 0)])).0.dim(), 3);
        assert_eq!(p.torsion_submodule(&SimpleSet(vec![])).0.dim(), 0);
    }
}
