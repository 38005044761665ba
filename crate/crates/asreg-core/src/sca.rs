//! Algebras given by structure constants, and the passage back to quiver
//! presentations.
//!
//! Products are stored on basis pairs. Every algebra carries a complete set
//! of orthogonal idempotents summing to one; when they are primitive and the
//! algebra is basic and split they become the vertices of the extracted
//! quiver.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::groebner::NormalFormTable;
use crate::linalg::{sv_scale, sv_sub, sv_unit, Acc, Echelon, Mat, SVec};
use crate::presentation::{Mode, Presentation};
use crate::quiver::{elem_normalize, Elem, Path, Quiver};
use crate::repr::{find_invertible, Iso, ModuleMap};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sca {
    field: Field,
    labels: Vec<String>,
    degrees: Option<Vec<i32>>,
    mult: BTreeMap<(u32, u32), SVec>,
    idempotents: Vec<SVec>,
    vertex_names: Vec<String>,
}

impl Sca {
    /// Validates associativity, the grading and the idempotent decomposition.
    pub fn new(
        field: Field,
        labels: Vec<String>,
        degrees: Option<Vec<i32>>,
        mult: BTreeMap<(u32, u32), SVec>,
        idempotents: Vec<SVec>,
        vertex_names: Vec<String>,
    ) -> Result<Sca> {
        let n = labels.len();
        if vertex_names.len() != idempotents.len() {
            return Err(Error::Invalid("one vertex name per idempotent is required".into()));
        }
        if let Some(d) = &degrees {
            if d.len() != n {
                return Err(Error::Invalid("one degree per basis element is required".into()));
            }
        }
        let mut clean = BTreeMap::new();
        for ((i, j), v) in mult {
            if i as usize >= n || j as usize >= n || v.iter().any(|t| t.0 as usize >= n) {
                return Err(Error::Invalid(format!("product ({i}, {j}) refers to a missing basis element")));
            }
            if let Some(d) = &degrees {
                let want = d[i as usize] + d[j as usize];
                if v.iter().any(|t| d[t.0 as usize] != want) {
                    return Err(Error::Invalid(format!(
                        "product {} * {} is not homogeneous of degree {want}",
                        labels[i as usize], labels[j as usize]
                    )));
                }
            }
            if !v.is_empty() {
                clean.insert((i, j), v);
            }
        }
        let a = Sca { field, labels, degrees, mult: clean, idempotents, vertex_names };
        a.check_associative()?;
        a.check_idempotents()?;
        Ok(a)
    }

    fn check_associative(&self) -> Result<()> {
        let n = self.dim() as u32;
        for i in 0..n {
            for j in 0..n {
                let ij = self.mul_basis(i, j);
                for l in 0..n {
                    let left = self.mul(&ij, &sv_unit(l));
                    let right = self.mul(&sv_unit(i), self.mul_basis(j, l));
                    if left != right {
                        return Err(Error::Invalid(format!(
                            "not associative on ({}, {}, {})",
                            self.labels[i as usize], self.labels[j as usize], self.labels[l as usize]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn check_idempotents(&self) -> Result<()> {
        for (a, e) in self.idempotents.iter().enumerate() {
            for (b, f) in self.idempotents.iter().enumerate() {
                let p = self.mul(e, f);
                let want = if a == b { e.clone() } else { Vec::new() };
                if p != want {
                    return Err(Error::Invalid(format!("idempotents {a} and {b} are not orthogonal idempotents")));
                }
            }
            if let Some(d) = self.degree_of(e) {
                if d != Some(0) && !e.is_empty() {
                    return Err(Error::Invalid(format!("idempotent {a} is not of degree 0")));
                }
            }
        }
        let one = self.one();
        for i in 0..self.dim() as u32 {
            let b = sv_unit(i);
            if self.mul(&one, &b) != b || self.mul(&b, &one) != b {
                return Err(Error::Invalid("idempotents do not sum to the identity".into()));
            }
        }
        Ok(())
    }

    /// The multiplication table of a finite-dimensional quotient on its
    /// normal words. Basis elements inherit the arrow degrees of their words.
    pub fn from_algebra(alg: &Algebra) -> Result<Sca> {
        if alg.is_graded() {
            return Err(Error::Unsupported("structure constants need a finite-dimensional presentation".into()));
        }
        let q = alg.quiver();
        let words = alg.words();
        let index: BTreeMap<&Path, u32> = words.iter().enumerate().map(|(i, w)| (w, i as u32)).collect();
        let mut mult = BTreeMap::new();
        for (i, u) in words.iter().enumerate() {
            for (j, v) in words.iter().enumerate() {
                if u.end != v.start {
                    continue;
                }
                let prod = alg.multiply(&alg.path_elem(u), &alg.path_elem(v))?;
                let mut sv: SVec = prod.iter().map(|(p, c)| (index[p], *c)).collect();
                sv.sort_unstable_by_key(|t| t.0);
                mult.insert((i as u32, j as u32), sv);
            }
        }
        let labels = words.iter().map(|w| q.path_name(w)).collect();
        let degrees = Some(words.iter().map(|w| w.deg as i32).collect());
        let idempotents = (0..q.num_vertices() as u32).map(|v| sv_unit(index[&Path::trivial(v)])).collect();
        Sca::new(*alg.field(), labels, degrees, mult, idempotents, q.vertices().to_vec())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, name: &str) -> Option<u32> {
        self.labels.iter().position(|l| l == name).map(|i| i as u32)
    }

    pub fn degrees(&self) -> Option<&[i32]> {
        self.degrees.as_deref()
    }

    pub fn is_graded(&self) -> bool {
        self.degrees.is_some()
    }

    pub fn idempotents(&self) -> &[SVec] {
        &self.idempotents
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    /// Nonzero structure constants `(i, j) -> b_i b_j` in index order.
    pub fn table(&self) -> &BTreeMap<(u32, u32), SVec> {
        &self.mult
    }

    /// `Some(Some(d))` for a homogeneous element of degree `d`, `Some(None)`
    /// for a mixed one, `None` when the algebra is ungraded.
    pub fn degree_of(&self, x: &[(u32, Scalar)]) -> Option<Option<i32>> {
        let d = self.degrees.as_ref()?;
        let ds: BTreeSet<i32> = x.iter().map(|t| d[t.0 as usize]).collect();
        Some(if ds.len() <= 1 { ds.into_iter().next().or(Some(0)) } else { None })
    }

    /// Basis counts by degree `0, 1, …`, for gradings in non-negative degrees.
    pub fn graded_dims(&self) -> Option<Vec<usize>> {
        let d = self.degrees.as_ref()?;
        if d.iter().any(|x| *x < 0) {
            return None;
        }
        let top = d.iter().copied().max().unwrap_or(0);
        let mut out = vec![0usize; top as usize + 1];
        for x in d {
            out[*x as usize] += 1;
        }
        Some(out)
    }

    pub fn one(&self) -> SVec {
        let mut acc = Acc::new(self.dim());
        for e in &self.idempotents {
            acc.axpy(&self.field, &Scalar::ONE, e);
        }
        acc.take()
    }

    pub fn mul_basis(&self, i: u32, j: u32) -> &[(u32, Scalar)] {
        self.mult.get(&(i, j)).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn mul(&self, x: &[(u32, Scalar)], y: &[(u32, Scalar)]) -> SVec {
        let k = &self.field;
        let mut acc = Acc::new(self.dim());
        for (i, a) in x {
            for (j, b) in y {
                let p = self.mul_basis(*i, *j);
                if !p.is_empty() {
                    acc.axpy(k, &k.mul(a, b), p);
                }
            }
        }
        acc.take()
    }

    /// Matrix of `y ↦ x·y`.
    pub fn left_matrix(&self, x: &[(u32, Scalar)]) -> Mat {
        let cols = (0..self.dim() as u32).map(|j| self.mul(x, &sv_unit(j))).collect();
        Mat::from_cols(self.dim(), cols)
    }

    /// Matrix of `y ↦ y·x`.
    pub fn right_matrix(&self, x: &[(u32, Scalar)]) -> Mat {
        let cols = (0..self.dim() as u32).map(|j| self.mul(&sv_unit(j), x)).collect();
        Mat::from_cols(self.dim(), cols)
    }

    pub fn opposite(&self) -> Sca {
        let mult = self.mult.iter().map(|(&(i, j), v)| ((j, i), v.clone())).collect();
        Sca { mult, ..self.clone() }
    }

    /// Basis of `x·A·y`.
    pub fn corner(&self, x: &[(u32, Scalar)], y: &[(u32, Scalar)]) -> Vec<SVec> {
        let vs: Vec<SVec> = (0..self.dim() as u32).map(|b| self.mul(&self.mul(x, &sv_unit(b)), y)).collect();
        Echelon::from_vectors(self.field, self.dim(), &vs).rref()
    }

    /// The subalgebra (or corner algebra) with the given basis, which must be
    /// closed under multiplication. `idempotents` are elements of `self`.
    pub fn restrict(
        &self,
        basis: &[SVec],
        labels: Vec<String>,
        idempotents: &[SVec],
        vertex_names: Vec<String>,
    ) -> Result<Sca> {
        let k = &self.field;
        let m = Mat::from_cols(self.dim(), basis.to_vec());
        let solver = m.solver(k);
        if solver.rank() != basis.len() {
            return Err(Error::Invalid("basis is linearly dependent".into()));
        }
        let coords = |v: &SVec| -> Result<SVec> {
            solver.solve(v).ok_or_else(|| Error::Invalid("span is not closed under multiplication".into()))
        };
        let mut mult = BTreeMap::new();
        for (i, x) in basis.iter().enumerate() {
            for (j, y) in basis.iter().enumerate() {
                let c = coords(&self.mul(x, y))?;
                if !c.is_empty() {
                    mult.insert((i as u32, j as u32), c);
                }
            }
        }
        let degrees = match &self.degrees {
            Some(_) => basis.iter().map(|b| self.degree_of(b).flatten()).collect::<Option<Vec<i32>>>(),
            None => None,
        };
        let idem = idempotents.iter().map(&coords).collect::<Result<Vec<_>>>()?;
        Sca::new(*k, labels, degrees, mult, idem, vertex_names)
    }

    /// The span of the basis elements of degree `d` (a subalgebra for `d = 0`).
    pub fn degree_zero_part(&self) -> Result<Sca> {
        let Some(ds) = &self.degrees else {
            return Err(Error::Unsupported("the algebra is not graded".into()));
        };
        let idx: Vec<u32> = (0..self.dim() as u32).filter(|i| ds[*i as usize] == 0).collect();
        let basis: Vec<SVec> = idx.iter().map(|i| sv_unit(*i)).collect();
        let labels = idx.iter().map(|i| self.labels[*i as usize].clone()).collect();
        self.restrict(&basis, labels, &self.idempotents, self.vertex_names.clone())
    }

    /// Dimension of the centre.
    pub fn center_dim(&self) -> usize {
        let n = self.dim();
        // x is central iff x b_j = b_j x for all j
        let mut rows = Vec::new();
        for j in 0..n as u32 {
            let l = self.right_matrix(&sv_unit(j));
            let r = self.left_matrix(&sv_unit(j));
            let d = l.sub(&self.field, &r);
            rows.extend(d.transpose().cols);
        }
        let sys = Mat::from_cols(n, rows).transpose();
        sys.kernel(&self.field).len()
    }

    /// `tr(L_x)` for each basis element.
    fn traces(&self) -> Vec<Scalar> {
        let k = &self.field;
        (0..self.dim() as u32)
            .map(|i| {
                (0..self.dim() as u32).fold(Scalar::ZERO, |s, m| {
                    let c = crate::linalg::sv_get(self.mul_basis(i, m), m);
                    k.add(&s, &c)
                })
            })
            .collect()
    }

    /// Radical of the trace form `(x, y) ↦ tr(L_{xy})`, which is the Jacobson
    /// radical in characteristic zero.
    pub fn trace_radical(&self) -> Result<Vec<SVec>> {
        let k = &self.field;
        if k.characteristic() != 0 {
            return Err(Error::Unsupported("the trace form detects the radical only in characteristic 0".into()));
        }
        let t = self.traces();
        let n = self.dim();
        let mut cols = Vec::with_capacity(n);
        for i in 0..n as u32 {
            let col: SVec = (0..n as u32)
                .filter_map(|j| {
                    let v = self.mul_basis(i, j).iter().fold(Scalar::ZERO, |s, (m, c)| k.add(&s, &k.mul(c, &t[*m as usize])));
                    (!v.is_zero()).then_some((j, v))
                })
                .collect();
            cols.push(col);
        }
        Ok(Mat::from_cols(n, cols).kernel(k))
    }

    /// Size `r` when the algebra is isomorphic to the full matrix algebra
    /// `M_r(K)`: semisimple, centre of dimension one, and some listed
    /// idempotent `e` with `dim eAe = 1`.
    pub fn split_simple_size(&self) -> Result<Option<usize>> {
        if !self.trace_radical()?.is_empty() || self.center_dim() != 1 {
            return Ok(None);
        }
        let n = self.dim();
        let r = (1..=n).find(|r| r * r == n);
        let has_rank_one = self.idempotents.iter().any(|e| self.corner(e, e).len() == 1);
        Ok(r.filter(|_| has_rank_one))
    }
}

/// Radical of a local algebra of matrices given by a basis containing the
/// identity in its span. Returns coefficient vectors (with respect to `mats`)
/// of a basis of the radical, or `NonLocal`.
pub fn local_radical(k: &Field, mats: &[Mat]) -> Result<Vec<SVec>> {
    let r = mats.len();
    if r == 0 {
        return Err(Error::NonLocal("zero algebra".into()));
    }
    let dim = mats[0].nrows;
    let flat = |m: &Mat| -> SVec {
        let mut v: SVec = Vec::new();
        for (c, col) in m.cols.iter().enumerate() {
            v.extend(col.iter().map(|(i, x)| ((c * dim) as u32 + i, *x)));
        }
        v
    };
    let span = Mat::from_cols(dim * dim, mats.iter().map(flat).collect());
    let solver = span.solver(k);
    if solver.rank() != r {
        return Err(Error::Invalid("endomorphism basis is linearly dependent".into()));
    }
    let id_mat = Mat::identity(dim);
    let id = solver.solve(&flat(&id_mat)).ok_or_else(|| Error::NonLocal("identity is not in the span".into()))?;
    let nilpotent = |m: &Mat| -> bool {
        let mut p = m.clone();
        for _ in 0..dim {
            if p.is_zero() {
                return true;
            }
            p = p.compose(k, m);
        }
        p.is_zero()
    };
    let mut rad: Vec<SVec> = Vec::new();
    let mut rad_mats: Vec<Mat> = Vec::new();
    for (i, b) in mats.iter().enumerate() {
        let p = k.characteristic();
        let lambda = if p == 0 || dim as u64 % p != 0 {
            let tr = (0..dim).fold(Scalar::ZERO, |s, j| k.add(&s, &b.get(j, j)));
            k.div(&tr, &k.from_i64(dim as i64)).unwrap()
        } else {
            if p > 4096 {
                return Err(Error::Unsupported("eigenvalue search over a large prime field".into()));
            }
            (0..p as i64)
                .map(|l| k.from_i64(l))
                .find(|l| nilpotent(&b.sub(k, &id_mat.scale(k, l))))
                .ok_or_else(|| Error::NonLocal(format!("basis element {i} has no eigenvalue")))?
        };
        let m = b.sub(k, &id_mat.scale(k, &lambda));
        rad.push(sv_sub(k, &sv_unit(i as u32), &sv_scale(k, &lambda, &id)));
        rad_mats.push(m);
    }
    let ech = Echelon::from_vectors(*k, r, &rad);
    if ech.rank() != r - 1 {
        return Err(Error::NonLocal("the algebra modulo its nilpotent part is not one-dimensional".into()));
    }
    // the subalgebra generated by the candidate must be nilpotent
    let mut power: Vec<Mat> = rad_mats.clone();
    for _ in 0..=dim {
        let prods: Vec<SVec> = power.iter().flat_map(|p| rad_mats.iter().map(|n| flat(&p.compose(k, n)))).collect();
        let e = Echelon::from_vectors(*k, dim * dim, &prods);
        if e.rank() == 0 {
            return Ok(ech.rref());
        }
        power = e
            .rows()
            .iter()
            .map(|v| {
                let mut cols = vec![Vec::new(); dim];
                for (i, x) in v {
                    cols[*i as usize / dim].push(((*i as usize % dim) as u32, *x));
                }
                Mat::from_cols(dim, cols)
            })
            .collect();
    }
    Err(Error::NonLocal("the complement of the identity is not nilpotent".into()))
}

/// A presentation read off from structure constants.
#[derive(Clone, Debug)]
pub struct Extracted {
    pub presentation: Presentation,
    /// The algebra element chosen for each arrow.
    pub arrow_elements: Vec<SVec>,
}

fn is_identifier(s: &str) -> bool {
    let mut c = s.chars();
    c.next().is_some_and(|f| f.is_ascii_alphabetic()) && c.all(|x| x.is_ascii_alphanumeric() || x == '_')
}

/// Basis of the radical, and whether it came from the grading.
fn find_radical(a: &Sca, hint: Option<&[SVec]>) -> Result<(Vec<SVec>, bool)> {
    if let Some(h) = hint {
        return Ok((Echelon::from_vectors(a.field, a.dim(), h).rref(), false));
    }
    if let Some(ds) = &a.degrees {
        let zero = ds.iter().filter(|d| **d == 0).count();
        if zero == a.idempotents.len() && ds.iter().all(|d| *d >= 0) {
            let r = (0..a.dim() as u32).filter(|i| ds[*i as usize] > 0).map(sv_unit).collect();
            return Ok((r, true));
        }
    }
    if a.field.characteristic() == 0 {
        return Ok((a.trace_radical()?, false));
    }
    Err(Error::NonBasic("cannot identify the radical".into()))
}

/// Quiver and relations of a basic split algebra. The radical is taken from
/// `radical` when given, else from a grading whose degree-0 part is spanned
/// by the idempotents, else from the trace form.
pub fn presentation_from_sca(a: &Sca, radical: Option<&[SVec]>) -> Result<Extracted> {
    let k = a.field;
    let n = a.dim();
    let (rad, from_grading) = find_radical(a, radical)?;
    let rad_ech = Echelon::from_vectors(k, n, &rad);
    for r in &rad {
        for b in 0..n as u32 {
            let u = sv_unit(b);
            if !rad_ech.contains(&a.mul(&u, r)) || !rad_ech.contains(&a.mul(r, &u)) {
                return Err(Error::NonBasic("radical candidate is not an ideal".into()));
            }
        }
    }
    let mut all = rad_ech.clone();
    for e in &a.idempotents {
        all.insert(e);
    }
    if !all.is_full() || n - rad.len() != a.idempotents.len() {
        return Err(Error::NonBasic(format!(
            "dim A/rad A = {} but there are {} idempotents",
            n - rad.len(),
            a.idempotents.len()
        )));
    }
    // rad^2, and nilpotency of rad
    let mut power = rad.clone();
    let mut rad2: Option<Vec<SVec>> = None;
    for _ in 0..=n {
        let prods: Vec<SVec> = power.iter().flat_map(|p| rad.iter().map(|r| a.mul(p, r))).collect();
        power = Echelon::from_vectors(k, n, &prods).rref();
        if rad2.is_none() {
            rad2 = Some(power.clone());
        }
        if power.is_empty() {
            break;
        }
    }
    if !power.is_empty() {
        return Err(Error::NonBasic("radical candidate is not nilpotent".into()));
    }
    let rad2 = rad2.unwrap_or_default();

    let t = a.idempotents.len();
    let mut q = Quiver::new();
    for v in &a.vertex_names {
        q.add_vertex(v)?;
    }
    let mut arrow_elements = Vec::new();
    let mut used: BTreeSet<String> = a.vertex_names.iter().cloned().collect();
    for i in 0..t {
        for j in 0..t {
            let (ei, ej) = (&a.idempotents[i], &a.idempotents[j]);
            let mut ech = Echelon::from_vectors(k, n, rad2.iter().map(|x| a.mul(&a.mul(ei, x), ej)).collect::<Vec<_>>().iter());
            let mut groups: BTreeMap<i32, Vec<SVec>> = BTreeMap::new();
            for r in &rad {
                let v = a.mul(&a.mul(ei, r), ej);
                if v.is_empty() {
                    continue;
                }
                let d = if from_grading { a.degree_of(&v).flatten().unwrap_or(1) } else { 1 };
                groups.entry(d).or_default().push(v);
            }
            for (d, vs) in groups {
                for v in Echelon::from_vectors(k, n, &vs).rref() {
                    if !ech.insert(&v) {
                        continue;
                    }
                    let unit = (v.len() == 1 && v[0].1 == Scalar::ONE).then(|| a.labels[v[0].0 as usize].clone());
                    let name = match unit {
                        Some(l) if is_identifier(&l) && !used.contains(&l) => l,
                        _ => {
                            let mut c = arrow_elements.len() + 1;
                            while used.contains(&format!("x{c}")) {
                                c += 1;
                            }
                            format!("x{c}")
                        }
                    };
                    if d <= 0 {
                        return Err(Error::NonBasic("radical generator in non-positive degree".into()));
                    }
                    q.add_arrow_idx(&name, i as u32, j as u32, d as u32)?;
                    used.insert(name);
                    arrow_elements.push(v);
                }
            }
        }
    }
    let relations = extract_relations(a, &q, &arrow_elements)?;
    let presentation = Presentation::new(k, q, relations, Mode::Finite)?;
    Ok(Extracted { presentation, arrow_elements })
}

fn extract_relations(a: &Sca, q: &Quiver, arrows: &[SVec]) -> Result<Vec<Elem>> {
    let k = a.field;
    let n = a.dim();
    let mut phi: BTreeMap<Path, SVec> = BTreeMap::new();
    let mut by_pair: BTreeMap<(u32, u32), Vec<Path>> = BTreeMap::new();
    for (v, e) in a.idempotents.iter().enumerate() {
        phi.insert(Path::trivial(v as u32), e.clone());
        by_pair.entry((v as u32, v as u32)).or_default().push(Path::trivial(v as u32));
    }
    for p in q.paths_of_length(1) {
        phi.insert(p.clone(), arrows[p.word[0] as usize].clone());
        by_pair.entry((p.start, p.end)).or_default().push(p);
    }
    let mut image = Echelon::from_vectors(k, n, phi.values());
    let mut rels: Vec<(Elem, usize)> = Vec::new();
    let mut len = 1;
    loop {
        len += 1;
        if len > n + 2 {
            return Err(Error::NonBasic("radical does not become zero along paths".into()));
        }
        let top = q.paths_of_length(len);
        for p in &top {
            let prefix = q.path_or_trivial(&p.word[..p.len() - 1], p.start);
            let last = &arrows[*p.word.last().unwrap() as usize];
            let v = a.mul(&phi[&prefix], last);
            image.insert(&v);
            phi.insert(p.clone(), v);
            by_pair.entry((p.start, p.end)).or_default().push(p.clone());
        }
        let mut all_dead = true;
        let mut fresh: Vec<(Elem, usize)> = Vec::new();
        for (&(s, t), ps) in &by_pair {
            let mut ps = ps.clone();
            ps.sort_by(|x, y| y.cmp(x));
            ps.dedup();
            let pos: BTreeMap<&Path, u32> = ps.iter().enumerate().map(|(i, p)| (p, i as u32)).collect();
            let mut ideal = Echelon::new(k, ps.len());
            for (r, rl) in &rels {
                let (rs, rt) = (r[0].0.start, r[0].0.end);
                for u in by_pair.get(&(s, rs)).into_iter().flatten() {
                    for v in by_pair.get(&(rt, t)).into_iter().flatten() {
                        if u.len() + rl + v.len() > len {
                            continue;
                        }
                        let mut w: SVec = Vec::new();
                        for (p, c) in r {
                            let pp = q.concat3(&u.word, p, &v.word);
                            w.push((pos[&pp], *c));
                        }
                        w.sort_unstable_by_key(|x| x.0);
                        ideal.insert(&w);
                    }
                }
            }
            let cols: Vec<SVec> = ps.iter().map(|p| phi[p].clone()).collect();
            let kernel = Mat::from_cols(n, cols).kernel(&k);
            for z in Echelon::from_vectors(k, ps.len(), &kernel).rref() {
                if ideal.insert(&z) {
                    let e = elem_normalize(&k, z.iter().map(|(i, c)| (ps[*i as usize].clone(), *c)).collect());
                    let rl = e.iter().map(|(p, _)| p.len()).max().unwrap_or(0);
                    fresh.push((e, rl));
                }
            }
            if ps.iter().any(|p| p.len() == len && !ideal.contains(&sv_unit(pos[p]))) {
                all_dead = false;
            }
        }
        rels.extend(fresh);
        if all_dead {
            break;
        }
    }
    if !image.is_full() {
        return Err(Error::NonBasic("arrows and idempotents do not generate the algebra".into()));
    }
    Ok(rels.into_iter().map(|(e, _)| e).collect())
}

/// Whether two presentations on the same quiver define the same ideal,
/// by comparing reduced Gröbner bases.
pub fn same_ideal(p: &Presentation, q: &Presentation) -> Result<bool> {
    let (a, b) = (&p.quiver, &q.quiver);
    if a.vertices() != b.vertices() || a.arrows() != b.arrows() || p.mode != q.mode || p.field != q.field {
        return Ok(false);
    }
    let ta = NormalFormTable::compute(p)?;
    let tb = NormalFormTable::compute(q)?;
    Ok(ta.rules() == tb.rules())
}

/// A right module given by the action matrix of every basis element.
#[derive(Clone, Debug)]
struct ScaModule {
    dim: usize,
    act: Vec<Mat>,
}

fn right_projective(a: &Sca, e: &SVec) -> ScaModule {
    let basis = Echelon::from_vectors(a.field, a.dim(), (0..a.dim() as u32).map(|b| a.mul(e, &sv_unit(b))).collect::<Vec<_>>().iter()).rref();
    let solver = Mat::from_cols(a.dim(), basis.clone()).solver(&a.field);
    let act = (0..a.dim() as u32)
        .map(|b| {
            let cols = basis.iter().map(|p| solver.solve(&a.mul(p, &sv_unit(b))).unwrap()).collect();
            Mat::from_cols(basis.len(), cols)
        })
        .collect();
    ScaModule { dim: basis.len(), act }
}

/// `D(A e)` as a right module.
fn right_injective(a: &Sca, e: &SVec) -> ScaModule {
    let basis = Echelon::from_vectors(a.field, a.dim(), (0..a.dim() as u32).map(|b| a.mul(&sv_unit(b), e)).collect::<Vec<_>>().iter()).rref();
    let solver = Mat::from_cols(a.dim(), basis.clone()).solver(&a.field);
    let act = (0..a.dim() as u32)
        .map(|b| {
            let cols = basis.iter().map(|p| solver.solve(&a.mul(&sv_unit(b), p)).unwrap()).collect();
            Mat::from_cols(basis.len(), cols).transpose()
        })
        .collect();
    ScaModule { dim: basis.len(), act }
}

/// Basis of the module maps `x -> y`, as `dim y × dim x` matrices.
fn sca_hom(k: &Field, x: &ScaModule, y: &ScaModule) -> Vec<Mat> {
    let (dx, dy) = (x.dim, y.dim);
    let var = |r: usize, c: usize| (r * dx + c) as u32;
    let mut rows: Vec<SVec> = Vec::new();
    for (xb, yb) in x.act.iter().zip(&y.act) {
        let xd = xb.to_dense();
        let yd = yb.to_dense();
        for r in 0..dy {
            for c in 0..dx {
                // (F X_b)[r][c] - (Y_b F)[r][c]
                let mut eq: BTreeMap<u32, Scalar> = BTreeMap::new();
                for l in 0..dx {
                    if !xd[l][c].is_zero() {
                        let e = eq.entry(var(r, l)).or_insert(Scalar::ZERO);
                        *e = k.add(e, &xd[l][c]);
                    }
                }
                for l in 0..dy {
                    if !yd[r][l].is_zero() {
                        let e = eq.entry(var(l, c)).or_insert(Scalar::ZERO);
                        *e = k.sub(e, &yd[r][l]);
                    }
                }
                let v: SVec = eq.into_iter().filter(|t| !t.1.is_zero()).collect();
                if !v.is_empty() {
                    rows.push(v);
                }
            }
        }
    }
    let nvars = dx * dy;
    if nvars == 0 {
        return Vec::new();
    }
    let sys = Mat::from_cols(nvars, rows).transpose();
    sys.kernel(k)
        .into_iter()
        .map(|z| {
            let mut cols = vec![Vec::new(); dx];
            for (v, s) in z {
                cols[v as usize % dx].push(((v as usize / dx) as u32, s));
            }
            for c in cols.iter_mut() {
                c.sort_unstable_by_key(|t| t.0);
            }
            Mat::from_cols(dy, cols)
        })
        .collect()
}

fn as_map(m: &Mat) -> ModuleMap {
    let mut src = BTreeMap::new();
    src.insert((0u32, 0i32), m.ncols());
    let mut tgt = BTreeMap::new();
    tgt.insert((0u32, 0i32), m.nrows);
    let mut blocks = BTreeMap::new();
    if !m.is_zero() {
        blocks.insert((0, 0), m.clone());
    }
    ModuleMap { src, tgt, blocks }
}

fn sca_iso(k: &Field, x: &ScaModule, y: &ScaModule) -> Result<Option<Mat>> {
    if x.dim != y.dim {
        return Ok(None);
    }
    let h = sca_hom(k, x, y);
    if h.is_empty() || h.len() != sca_hom(k, x, x).len() || h.len() != sca_hom(k, y, y).len() {
        return Ok(None);
    }
    let maps: Vec<ModuleMap> = h.iter().map(as_map).collect();
    match find_invertible(k, &maps, x.dim) {
        Iso::Yes(f) => Ok(Some(f.block((0, 0)))),
        Iso::No => Ok(None),
        Iso::Undecided => Err(Error::Unsupported("isomorphism search exceeded its budget".into())),
    }
}

#[derive(Clone, Debug)]
pub struct FrobeniusReport {
    pub selfinjective: bool,
    pub frobenius: bool,
    /// `ν` with `e_i A ≅ D(A e_ν(i))`, present iff `frobenius`.
    pub nakayama: Option<Vec<u32>>,
    /// `(i, j, f)` with `f: e_i A → D(A e_j)` an isomorphism.
    pub witnesses: Vec<(u32, u32, Mat)>,
    /// Indecomposable injectives `D(A e_j)` that are not projective.
    pub non_projective_injectives: Vec<u32>,
}

/// Matches the indecomposable projectives `e_i A` against the indecomposable
/// injectives `D(A e_j)`.
pub fn frobenius_test(a: &Sca) -> Result<FrobeniusReport> {
    let k = a.field;
    let t = a.idempotents.len();
    for (i, e) in a.idempotents.iter().enumerate() {
        let corner = a.corner(e, e);
        let mats: Vec<Mat> = corner
            .iter()
            .map(|x| {
                let sol = Mat::from_cols(a.dim(), corner.clone()).solver(&k);
                let cols = corner.iter().map(|y| sol.solve(&a.mul(x, y)).unwrap()).collect();
                Mat::from_cols(corner.len(), cols)
            })
            .collect();
        local_radical(&k, &mats)
            .map_err(|_| Error::NonLocal(format!("idempotent {i} is not primitive: its corner algebra is not local")))?;
    }
    let proj: Vec<ScaModule> = a.idempotents.iter().map(|e| right_projective(a, e)).collect();
    let inj: Vec<ScaModule> = a.idempotents.iter().map(|e| right_injective(a, e)).collect();
    // isomorphism classes of projectives
    let mut class = vec![usize::MAX; t];
    let mut reps: Vec<usize> = Vec::new();
    for i in 0..t {
        for (c, &r) in reps.iter().enumerate() {
            if sca_iso(&k, &proj[i], &proj[r])?.is_some() {
                class[i] = c;
                break;
            }
        }
        if class[i] == usize::MAX {
            class[i] = reps.len();
            reps.push(i);
        }
    }
    let mut inj_class = vec![None; t];
    let mut witness_for: Vec<Option<Mat>> = vec![None; t];
    for j in 0..t {
        for (c, &r) in reps.iter().enumerate() {
            if let Some(f) = sca_iso(&k, &proj[r], &inj[j])? {
                inj_class[j] = Some(c);
                witness_for[j] = Some(f);
                break;
            }
        }
    }
    let non_projective_injectives: Vec<u32> = (0..t as u32).filter(|j| inj_class[*j as usize].is_none()).collect();
    let selfinjective = non_projective_injectives.is_empty();
    let mut frobenius = selfinjective;
    if selfinjective {
        for c in 0..reps.len() {
            let np = class.iter().filter(|x| **x == c).count();
            let ni = inj_class.iter().filter(|x| **x == Some(c)).count();
            frobenius &= np == ni;
        }
    }
    let mut witnesses = Vec::new();
    let mut nakayama = None;
    if frobenius {
        let mut nu = vec![0u32; t];
        let mut taken = vec![false; t];
        for i in 0..t {
            let j = (0..t).find(|j| !taken[*j] && inj_class[*j] == Some(class[i])).unwrap();
            taken[j] = true;
            nu[i] = j as u32;
            let f = if reps[class[i]] == i {
                witness_for[j].clone().unwrap()
            } else {
                sca_iso(&k, &proj[i], &inj[j])?.ok_or_else(|| Error::Invalid("isomorphism classes are inconsistent".into()))?
            };
            witnesses.push((i as u32, j as u32, f));
        }
        nakayama = Some(nu);
    }
    Ok(FrobeniusReport { selfinjective, frobenius, nakayama, witnesses, non_projective_injectives })
}

/// Renders a basis combination with labels.
pub fn element_string(a: &Sca, x: &[(u32, Scalar)]) -> String {
    if x.is_empty() {
        return "0".to_string();
    }
    let mut s = String::new();
    for (n, (i, c)) in x.iter().enumerate() {
        if n > 0 {
            s.push_str(" + ");
        }
        s.push_str(&format!("{}*{}", a.field.signed_repr(c), a.labels[*i as usize]));
    }
    s
}
