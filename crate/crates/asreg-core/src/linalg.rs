//! Sparse exact linear algebra.
//!
//! Vectors are sorted `(index, value)` lists without zero entries. Matrices
//! are stored by columns. [`Echelon`] keeps a row-echelon basis of a subspace
//! with pivots at the smallest support index of each row, which gives
//! canonical remainders and therefore canonical quotient coordinates.

use alloc::vec;
use alloc::vec::Vec;

use crate::field::{Field, Scalar};

/// Sparse vector: strictly increasing indices, no zero values.
pub type SVec = Vec<(u32, Scalar)>;

const NO_ROW: u32 = u32::MAX;

/// Dense scratch accumulator that remembers which slots were touched.
pub(crate) struct Acc {
    vals: Vec<Scalar>,
    touched: Vec<u32>,
    mark: Vec<bool>,
}

impl Acc {
    pub(crate) fn new(n: usize) -> Acc {
        Acc { vals: vec![Scalar::ZERO; n], touched: Vec::new(), mark: vec![false; n] }
    }

    #[inline]
    pub(crate) fn add(&mut self, k: &Field, i: u32, x: &Scalar) {
        let iu = i as usize;
        if !self.mark[iu] {
            self.mark[iu] = true;
            self.touched.push(i);
            self.vals[iu] = *x;
        } else {
            self.vals[iu] = k.add(&self.vals[iu], x);
        }
    }

    pub(crate) fn axpy(&mut self, k: &Field, a: &Scalar, x: &[(u32, Scalar)]) {
        for (i, v) in x {
            let t = k.mul(a, v);
            self.add(k, *i, &t);
        }
    }

    /// Drains into a sparse vector and resets the accumulator.
    pub(crate) fn take(&mut self) -> SVec {
        self.touched.sort_unstable();
        let mut out = Vec::with_capacity(self.touched.len());
        for &i in &self.touched {
            let iu = i as usize;
            self.mark[iu] = false;
            if !self.vals[iu].is_zero() {
                out.push((i, self.vals[iu]));
            }
            self.vals[iu] = Scalar::ZERO;
        }
        self.touched.clear();
        out
    }
}

pub fn sv_scale(k: &Field, a: &Scalar, x: &[(u32, Scalar)]) -> SVec {
    if a.is_zero() {
        return Vec::new();
    }
    x.iter().map(|(i, v)| (*i, k.mul(a, v))).filter(|(_, v)| !v.is_zero()).collect()
}

/// `y + a·x` by sorted merge.
pub fn sv_axpy(k: &Field, y: &[(u32, Scalar)], a: &Scalar, x: &[(u32, Scalar)]) -> SVec {
    if a.is_zero() {
        return y.to_vec();
    }
    let mut out = Vec::with_capacity(y.len() + x.len());
    let (mut p, mut q) = (0, 0);
    while p < y.len() || q < x.len() {
        if q == x.len() || (p < y.len() && y[p].0 < x[q].0) {
            out.push(y[p]);
            p += 1;
        } else if p == y.len() || x[q].0 < y[p].0 {
            out.push((x[q].0, k.mul(a, &x[q].1)));
            q += 1;
        } else {
            let s = k.add(&y[p].1, &k.mul(a, &x[q].1));
            if !s.is_zero() {
                out.push((y[p].0, s));
            }
            p += 1;
            q += 1;
        }
    }
    out
}

pub fn sv_add(k: &Field, y: &[(u32, Scalar)], x: &[(u32, Scalar)]) -> SVec {
    sv_axpy(k, y, &Scalar::ONE, x)
}

pub fn sv_sub(k: &Field, y: &[(u32, Scalar)], x: &[(u32, Scalar)]) -> SVec {
    sv_axpy(k, y, &k.neg(&Scalar::ONE), x)
}

pub fn sv_get(x: &[(u32, Scalar)], i: u32) -> Scalar {
    match x.binary_search_by_key(&i, |e| e.0) {
        Ok(p) => x[p].1,
        Err(_) => Scalar::ZERO,
    }
}

pub fn sv_from_dense(v: &[Scalar]) -> SVec {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i as u32, *x)).collect()
}

pub fn sv_to_dense(x: &[(u32, Scalar)], n: usize) -> Vec<Scalar> {
    let mut out = vec![Scalar::ZERO; n];
    for (i, v) in x {
        out[*i as usize] = *v;
    }
    out
}

pub fn sv_unit(i: u32) -> SVec {
    vec![(i, Scalar::ONE)]
}

/// Row-echelon basis of a subspace of `K^n`.
#[derive(Clone, Debug)]
pub struct Echelon {
    k: Field,
    n: usize,
    rows: Vec<SVec>,
    pivot_row: Vec<u32>,
}

impl Echelon {
    pub fn new(k: Field, n: usize) -> Echelon {
        Echelon { k, n, rows: Vec::new(), pivot_row: vec![NO_ROW; n] }
    }

    pub fn from_vectors<'a, I: IntoIterator<Item = &'a SVec>>(k: Field, n: usize, vs: I) -> Echelon {
        let mut e = Echelon::new(k, n);
        for v in vs {
            e.insert(v);
        }
        e
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.n
    }

    /// Basis rows; row `r` has leading coefficient one at `self.pivot(r)`.
    pub fn rows(&self) -> &[SVec] {
        &self.rows
    }

    pub fn pivot(&self, r: usize) -> u32 {
        self.rows[r][0].0
    }

    pub fn is_pivot(&self, i: u32) -> bool {
        self.pivot_row[i as usize] != NO_ROW
    }

    fn reduce_into(&self, acc: &mut Vec<Scalar>, start: usize, mut track: Option<&mut Vec<(u32, Scalar)>>) {
        let k = &self.k;
        for i in start..self.n {
            if acc[i].is_zero() {
                continue;
            }
            let r = self.pivot_row[i];
            if r == NO_ROW {
                continue;
            }
            let c = acc[i];
            for (j, x) in &self.rows[r as usize] {
                let ju = *j as usize;
                acc[ju] = k.sub(&acc[ju], &k.mul(&c, x));
            }
            if let Some(t) = track.as_deref_mut() {
                t.push((r, c));
            }
        }
    }

    fn dense(&self, v: &[(u32, Scalar)]) -> (Vec<Scalar>, usize) {
        let mut acc = vec![Scalar::ZERO; self.n];
        for (i, x) in v {
            acc[*i as usize] = *x;
        }
        let start = v.first().map_or(self.n, |e| e.0 as usize);
        (acc, start)
    }

    /// Canonical remainder: zero at every pivot position.
    pub fn reduce(&self, v: &[(u32, Scalar)]) -> SVec {
        if self.rows.is_empty() || v.is_empty() {
            return v.to_vec();
        }
        let (mut acc, start) = self.dense(v);
        self.reduce_into(&mut acc, start, None);
        sv_from_dense(&acc)
    }

    /// Remainder together with `v - remainder` written in the row basis.
    pub fn reduce_tracked(&self, v: &[(u32, Scalar)]) -> (SVec, SVec) {
        let (mut acc, start) = self.dense(v);
        let mut t = Vec::new();
        self.reduce_into(&mut acc, start, Some(&mut t));
        t.sort_unstable_by_key(|e| e.0);
        (sv_from_dense(&acc), t)
    }

    pub fn contains(&self, v: &[(u32, Scalar)]) -> bool {
        self.reduce(v).is_empty()
    }

    /// Coordinates of `v` in the row basis, if `v` lies in the span.
    pub fn coords(&self, v: &[(u32, Scalar)]) -> Option<SVec> {
        let (rem, t) = self.reduce_tracked(v);
        rem.is_empty().then_some(t)
    }

    /// Inserts `v`; returns whether it enlarged the span.
    pub fn insert(&mut self, v: &[(u32, Scalar)]) -> bool {
        self.insert_reduced(self.reduce(v))
    }

    fn insert_reduced(&mut self, rem: SVec) -> bool {
        if rem.is_empty() {
            return false;
        }
        let inv = self.k.inv(&rem[0].1).expect("leading entry is nonzero");
        let row = sv_scale(&self.k, &inv, &rem);
        self.pivot_row[row[0].0 as usize] = self.rows.len() as u32;
        self.rows.push(row);
        true
    }

    /// Indices of the coordinates that are not pivots, ascending.
    pub fn free_indices(&self) -> Vec<u32> {
        (0..self.n as u32).filter(|i| !self.is_pivot(*i)).collect()
    }

    /// Coordinates of the class of `v` in `K^n / span`, indexed by the
    /// position among [`Echelon::free_indices`].
    pub fn quotient_coords(&self, v: &[(u32, Scalar)], free_pos: &[u32]) -> SVec {
        self.reduce(v)
            .into_iter()
            .map(|(i, x)| (free_pos[i as usize], x))
            .collect()
    }

    /// Map from ambient index to position among free indices (or `u32::MAX`).
    pub fn free_positions(&self) -> Vec<u32> {
        let mut pos = vec![u32::MAX; self.n];
        let mut c = 0;
        for i in 0..self.n {
            if !self.is_pivot(i as u32) {
                pos[i] = c;
                c += 1;
            }
        }
        pos
    }

    /// Reduced row-echelon basis (each pivot column is a unit column).
    pub fn rref(&self) -> Vec<SVec> {
        let k = &self.k;
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|r| core::cmp::Reverse(self.pivot(*r)));
        let mut done: Vec<SVec> = vec![Vec::new(); self.rows.len()];
        let mut reduced = Echelon::new(*k, self.n);
        for r in order {
            // rows with larger pivots are already reduced; clear them out of r
            let mut row = self.rows[r].clone();
            let mut i = 1;
            while i < row.len() {
                let (c, x) = row[i];
                let pr = reduced.pivot_row[c as usize];
                if pr != NO_ROW {
                    row = sv_axpy(k, &row, &k.neg(&x), &reduced.rows[pr as usize]);
                } else {
                    i += 1;
                }
            }
            reduced.pivot_row[row[0].0 as usize] = reduced.rows.len() as u32;
            reduced.rows.push(row.clone());
            done[r] = row;
        }
        done.sort_by_key(|r| r[0].0);
        done
    }

    /// Basis of the intersection with another subspace of the same ambient.
    pub fn intersect(&self, other: &Echelon) -> Vec<SVec> {
        // Zassenhaus-free approach: solve a = b with a in self, b in other.
        let m = Mat::from_cols(
            self.n,
            self.rows.iter().chain(other.rows.iter()).cloned().collect(),
        );
        let ker = m.kernel(&self.k);
        let mut out = Echelon::new(self.k, self.n);
        for z in ker {
            let mut acc = Acc::new(self.n);
            for (j, c) in &z {
                if (*j as usize) < self.rows.len() {
                    acc.axpy(&self.k, c, &self.rows[*j as usize]);
                }
            }
            out.insert(&acc.take());
        }
        out.rows
    }
}

/// Sparse matrix stored by columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    pub nrows: usize,
    pub cols: Vec<SVec>,
}

impl Mat {
    pub fn zero(nrows: usize, ncols: usize) -> Mat {
        Mat { nrows, cols: vec![Vec::new(); ncols] }
    }

    pub fn identity(n: usize) -> Mat {
        Mat { nrows: n, cols: (0..n as u32).map(sv_unit).collect() }
    }

    pub fn from_cols(nrows: usize, cols: Vec<SVec>) -> Mat {
        debug_assert!(cols.iter().all(|c| c.last().map_or(true, |e| (e.0 as usize) < nrows)));
        Mat { nrows, cols }
    }

    /// Builds from dense rows.
    pub fn from_rows(nrows: usize, ncols: usize, rows: &[Vec<Scalar>]) -> Mat {
        let mut cols = vec![Vec::new(); ncols];
        for (i, r) in rows.iter().enumerate() {
            for (j, x) in r.iter().enumerate() {
                if !x.is_zero() {
                    cols[j].push((i as u32, *x));
                }
            }
        }
        Mat { nrows, cols }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        sv_get(&self.cols[j], i as u32)
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        let mut out = vec![vec![Scalar::ZERO; self.ncols()]; self.nrows];
        for (j, c) in self.cols.iter().enumerate() {
            for (i, x) in c {
                out[*i as usize][j] = *x;
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }

    /// `M·v`.
    pub fn apply(&self, k: &Field, v: &[(u32, Scalar)]) -> SVec {
        match v {
            [] => Vec::new(),
            [(j, c)] => sv_scale(k, c, &self.cols[*j as usize]),
            _ => {
                let mut acc = Acc::new(self.nrows);
                for (j, c) in v {
                    acc.axpy(k, c, &self.cols[*j as usize]);
                }
                acc.take()
            }
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, k: &Field, other: &Mat) -> Mat {
        assert_eq!(self.ncols(), other.nrows, "dimension mismatch in composition");
        let mut acc = Acc::new(self.nrows);
        let cols = other
            .cols
            .iter()
            .map(|v| {
                for (j, c) in v {
                    acc.axpy(k, c, &self.cols[*j as usize]);
                }
                acc.take()
            })
            .collect();
        Mat { nrows: self.nrows, cols }
    }

    pub fn transpose(&self) -> Mat {
        let mut cols = vec![Vec::new(); self.nrows];
        for (j, c) in self.cols.iter().enumerate() {
            for (i, x) in c {
                cols[*i as usize].push((j as u32, *x));
            }
        }
        Mat { nrows: self.ncols(), cols }
    }

    pub fn add(&self, k: &Field, other: &Mat) -> Mat {
        assert_eq!((self.nrows, self.ncols()), (other.nrows, other.ncols()));
        let cols = self.cols.iter().zip(&other.cols).map(|(a, b)| sv_add(k, a, b)).collect();
        Mat { nrows: self.nrows, cols }
    }

    pub fn scale(&self, k: &Field, a: &Scalar) -> Mat {
        Mat { nrows: self.nrows, cols: self.cols.iter().map(|c| sv_scale(k, a, c)).collect() }
    }

    pub fn sub(&self, k: &Field, other: &Mat) -> Mat {
        self.add(k, &other.scale(k, &k.neg(&Scalar::ONE)))
    }

    /// Stacks `self` on top of `other` (same column count).
    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.ncols(), other.ncols());
        let off = self.nrows as u32;
        let cols = self
            .cols
            .iter()
            .zip(&other.cols)
            .map(|(a, b)| a.iter().cloned().chain(b.iter().map(|(i, x)| (i + off, *x))).collect())
            .collect();
        Mat { nrows: self.nrows + other.nrows, cols }
    }

    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.nrows, other.nrows);
        let mut cols = self.cols.clone();
        cols.extend(other.cols.iter().cloned());
        Mat { nrows: self.nrows, cols }
    }

    /// Column span.
    pub fn image(&self, k: &Field) -> Echelon {
        let mut e = Echelon::new(*k, self.nrows);
        for j in self.sparse_order() {
            e.insert(&self.cols[j]);
        }
        e
    }

    pub fn rank(&self, k: &Field) -> usize {
        self.image(k).rank()
    }

    fn sparse_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.ncols()).collect();
        order.sort_by_key(|j| (self.cols[*j].len(), *j));
        order
    }

    /// Basis of the null space.
    pub fn kernel(&self, k: &Field) -> Vec<SVec> {
        self.solver(k).kernel
    }

    pub fn solver(&self, k: &Field) -> Solver {
        Solver::new(k, self)
    }

    pub fn is_invertible(&self, k: &Field) -> bool {
        self.nrows == self.ncols() && self.rank(k) == self.nrows
    }

    pub fn inverse(&self, k: &Field) -> Option<Mat> {
        if self.nrows != self.ncols() {
            return None;
        }
        let s = self.solver(k);
        let cols = (0..self.nrows as u32).map(|i| s.solve(&sv_unit(i))).collect::<Option<Vec<_>>>()?;
        Some(Mat { nrows: self.nrows, cols })
    }
}

/// Column elimination with the column combinations tracked, giving both a
/// kernel basis and particular solutions of `M x = b`.
#[derive(Clone, Debug)]
pub struct Solver {
    k: Field,
    ncols: usize,
    ech: Echelon,
    combos: Vec<SVec>,
    pub kernel: Vec<SVec>,
}

impl Solver {
    pub fn new(k: &Field, m: &Mat) -> Solver {
        let mut ech = Echelon::new(*k, m.nrows);
        let mut combos: Vec<SVec> = Vec::new();
        let mut kernel = Vec::new();
        let mut acc = Acc::new(m.ncols());
        for j in m.sparse_order() {
            let (rem, t) = ech.reduce_tracked(&m.cols[j]);
            // column j = rem + sum t_r * row_r, and row_r = combos[r] applied to M
            acc.add(k, j as u32, &Scalar::ONE);
            for (r, c) in &t {
                acc.axpy(k, &k.neg(c), &combos[*r as usize]);
            }
            let combo = acc.take();
            if rem.is_empty() {
                kernel.push(combo);
            } else {
                let inv = k.inv(&rem[0].1).unwrap();
                ech.insert_reduced(rem);
                combos.push(sv_scale(k, &inv, &combo));
            }
        }
        kernel.sort_by(|a, b| a.last().map(|e| e.0).cmp(&b.last().map(|e| e.0)));
        Solver { k: *k, ncols: m.ncols(), ech, combos, kernel }
    }

    pub fn rank(&self) -> usize {
        self.ech.rank()
    }

    pub fn image(&self) -> &Echelon {
        &self.ech
    }

    /// Some `x` with `M x = b`, or `None` when `b` is not in the image.
    pub fn solve(&self, b: &[(u32, Scalar)]) -> Option<SVec> {
        let (rem, t) = self.ech.reduce_tracked(b);
        if !rem.is_empty() {
            return None;
        }
        let mut acc = Acc::new(self.ncols);
        for (r, c) in &t {
            acc.axpy(&self.k, c, &self.combos[*r as usize]);
        }
        Some(acc.take())
    }
}
