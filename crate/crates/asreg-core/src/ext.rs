//! Ext, Tor and the transpose `tr^n = Ext^n(-, Λ)`.
//!
//! Graded conventions: `Ext^i(M, N)_t` is computed from maps `P_i -> N`
//! lowering internal degree by `t`. The dual complex `Hom(P_•, Λ)` is a
//! complex of free modules over the opposite algebra, with the generator
//! of `Hom(e_v A⟨s⟩, A)` placed in degree `-s`; so `Ext^i(M, Λ)_t` is its
//! cohomology in op-degree `-t`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;

use crate::algebra::{Algebra, Block};
use crate::error::{Error, Result};
use crate::free::FreeModule;
use crate::linalg::{sv_get, Acc, Echelon, Mat, SVec, Solver};
use crate::repr::{ModuleMap, Representation, Subspaces};
use crate::resolution::{restrict, Resolution};

/// Dimensions per internal degree with the degrees whose value is not
/// certified by the available data.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExtDims {
    pub by_degree: BTreeMap<i32, usize>,
    pub uncertified: BTreeSet<i32>,
}

impl ExtDims {
    pub fn total(&self) -> usize {
        self.by_degree.values().sum()
    }

    pub fn is_certified(&self) -> bool {
        self.uncertified.is_empty()
    }

    /// Nonzero degrees only.
    pub fn support(&self) -> BTreeMap<i32, usize> {
        self.by_degree.iter().filter(|(_, n)| **n > 0).map(|(t, n)| (*t, *n)).collect()
    }
}

/// A cocycle `P_i -> N`, given by the images of the generators of `P_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtClass {
    pub degree: usize,
    pub internal: i32,
    pub images: Vec<(Block, SVec)>,
}

struct HomLayout {
    /// Per generator: block of `N` it maps to, offset and dimension.
    parts: Vec<(Block, u32, usize)>,
    dim: usize,
}

fn layout(gens: &[(u32, i32)], n: &Representation, t: i32) -> HomLayout {
    let mut parts = Vec::new();
    let mut off = 0u32;
    for &(v, s) in gens {
        let b = (v, s - t);
        let d = n.dim_at(b);
        parts.push((b, off, d));
        off += d as u32;
    }
    HomLayout { parts, dim: off as usize }
}

fn check_same(res: &Resolution, n: &Representation) -> Result<()> {
    if res.algebra() != n.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    Ok(())
}

/// Matrix of `f ↦ f ∘ d_{i+1}` from `Hom(P_i, N)_t` to `Hom(P_{i+1}, N)_t`.
fn coboundary(res: &Resolution, n: &Representation, i: usize, t: i32) -> Result<(HomLayout, HomLayout, Mat)> {
    let k = *n.field();
    let src = layout(res.stage_gens(i)?, n, t);
    let tgt = layout(res.stage_gens(i + 1)?, n, t);
    let mut cols: Vec<Acc> = (0..src.dim).map(|_| Acc::new(tgt.dim)).collect();
    if tgt.dim > 0 && src.dim > 0 {
        let d = res.differential_elems(i + 1);
        for (g, row) in d.iter().enumerate() {
            let (gb, goff, _) = tgt.parts[g];
            for (h, x) in row {
                let (hb, hoff, hd) = src.parts[*h as usize];
                for u in 0..hd as u32 {
                    let img = n.apply_elem(hb, &[(u, k.one())], x);
                    if let Some(v) = img.get(&gb) {
                        let shifted: SVec = v.iter().map(|(r, c)| (r + goff, *c)).collect();
                        cols[(hoff + u) as usize].axpy(&k, &k.one(), &shifted);
                    }
                }
            }
        }
    }
    let m = Mat::from_cols(tgt.dim, cols.iter_mut().map(|c| c.take()).collect());
    Ok((src, tgt, m))
}

/// Candidate internal degrees for `Ext^i(M, N)` and their certification.
fn degrees(res: &Resolution, n: &Representation, i: usize) -> Result<(BTreeSet<i32>, BTreeSet<i32>)> {
    let mut ts = BTreeSet::new();
    let gens = res.stage_gens(i)?;
    if !res.algebra().is_graded() {
        ts.insert(0);
        return Ok((ts, BTreeSet::new()));
    }
    for &(v, s) in gens {
        for &(w, e) in n.dims().keys() {
            if w == v {
                ts.insert(s - e);
            }
        }
    }
    let mut bad = BTreeSet::new();
    let hi_n = n.degree_range().map(|r| r.1).unwrap_or(0);
    let nearby: Vec<i32> = (i.saturating_sub(1)..=i + 1)
        .filter_map(|j| res.stage_gens(j).ok())
        .flat_map(|g| g.iter().map(|x| x.1))
        .collect();
    for &t in &ts {
        match n.truncated_above() {
            Some(tn) => {
                if nearby.iter().any(|&s| s - t > tn) {
                    bad.insert(t);
                }
            }
            None => {
                if let Some(d) = res.window() {
                    if t + hi_n > d {
                        bad.insert(t);
                    }
                }
            }
        }
    }
    Ok((ts, bad))
}

/// `dim Ext^i(M, N)_t` for every `t` where it can be nonzero.
pub fn ext_dims(res: &Resolution, n: &Representation, i: usize) -> Result<ExtDims> {
    check_same(res, n)?;
    let k = *n.field();
    let (ts, bad) = degrees(res, n, i)?;
    let mut out = ExtDims { by_degree: BTreeMap::new(), uncertified: bad };
    for t in ts {
        let (src, _, d_i) = coboundary(res, n, i, t)?;
        let prev_rank = if i == 0 { 0 } else { coboundary(res, n, i - 1, t)?.2.rank(&k) };
        let dim = src.dim - d_i.rank(&k) - prev_rank;
        out.by_degree.insert(t, dim);
    }
    Ok(out)
}

pub fn ext_dim(res: &Resolution, n: &Representation, i: usize) -> Result<usize> {
    Ok(ext_dims(res, n, i)?.total())
}

/// Cocycles representing a basis of `Ext^i(M, N)`, degree by degree.
pub fn ext_cocycle_basis(res: &Resolution, n: &Representation, i: usize) -> Result<Vec<ExtClass>> {
    check_same(res, n)?;
    let k = *n.field();
    let (ts, _) = degrees(res, n, i)?;
    let mut out = Vec::new();
    for t in ts {
        let (src, _, d_i) = coboundary(res, n, i, t)?;
        let mut ech = Echelon::new(k, src.dim);
        if i > 0 {
            let (_, _, prev) = coboundary(res, n, i - 1, t)?;
            for c in &prev.cols {
                ech.insert(c);
            }
        }
        let z = Echelon::from_vectors(k, src.dim, &d_i.kernel(&k));
        for v in z.rref() {
            if ech.insert(&v) {
                let images = src
                    .parts
                    .iter()
                    .map(|&(b, off, d)| {
                        let part: SVec = v
                            .iter()
                            .filter(|(r, _)| *r >= off && *r < off + d as u32)
                            .map(|(r, c)| (r - off, *c))
                            .collect();
                        (b, part)
                    })
                    .collect();
                out.push(ExtClass { degree: i, internal: t, images });
            }
        }
    }
    Ok(out)
}

/// `Hom(P_•, Λ)` as free modules over the opposite algebra.
#[derive(Clone, Debug)]
pub struct DualComplex {
    op: Algebra,
    stages: Vec<FreeModule>,
    /// `maps[i] : P_i^* -> P_{i+1}^*`.
    maps: Vec<ModuleMap>,
    gen_degrees: Vec<Vec<i32>>,
}

impl DualComplex {
    /// Dual stages `0..=upto`; every stage must be known.
    pub fn new(res: &Resolution, upto: usize) -> Result<DualComplex> {
        let alg = res.algebra();
        let op = alg.opposite();
        let mut stages = Vec::new();
        let mut gen_degrees = Vec::new();
        for i in 0..=upto {
            let gens = res.stage_gens(i)?;
            gen_degrees.push(gens.iter().map(|g| g.1).collect());
            stages.push(FreeModule::new(&op, gens.iter().map(|&(v, s)| (v, -s)).collect(), None));
        }
        let mut maps = Vec::new();
        for i in 0..upto {
            let d = if stages[i + 1].is_zero() { Vec::new() } else { res.differential_elems(i + 1) };
            // image of h* is Σ_g g* · rev(x_{hg})
            let mut images: Vec<BTreeMap<Block, Acc>> = (0..stages[i].rank()).map(|_| BTreeMap::new()).collect();
            let k = *alg.field();
            for (g, row) in d.iter().enumerate() {
                for (h, x) in row {
                    let rx = alg.reverse_elem(x);
                    for (b, v) in stages[i + 1].elem_vector(g as u32, &rx) {
                        images[*h as usize]
                            .entry(b)
                            .or_insert_with(|| Acc::new(stages[i + 1].rep().dim_at(b)))
                            .axpy(&k, &k.one(), &v);
                    }
                }
            }
            let imgs: Vec<(Block, SVec)> = images
                .into_iter()
                .enumerate()
                .map(|(h, mut m)| {
                    let (v, s) = stages[i].gens()[h];
                    let b = (v, s);
                    let vec = m.get_mut(&b).map(|a| a.take()).unwrap_or_default();
                    (b, vec)
                })
                .collect();
            maps.push(stages[i].map_to(stages[i + 1].rep(), &imgs));
        }
        Ok(DualComplex { op, stages, maps, gen_degrees })
    }

    pub fn stage(&self, i: usize) -> &FreeModule {
        &self.stages[i]
    }

    /// Largest op-degree at which the cohomology at stage `i` is computed
    /// from complete data (graded mode).
    pub fn window(&self, i: usize) -> Option<i32> {
        let cap = self.op.cap()? as i32;
        let lo = i.saturating_sub(1);
        let hi = (i + 1).min(self.stages.len() - 1);
        let smax = (lo..=hi).flat_map(|j| self.gen_degrees[j].iter().copied()).max().unwrap_or(0);
        Some(cap - smax)
    }

    /// `H^i` as a representation of the opposite algebra, restricted to the
    /// window; needs stage `i + 1`.
    pub fn cohomology(&self, i: usize) -> Result<Representation> {
        if i + 1 >= self.stages.len() {
            return Err(Error::ShallowResolution(format!("dual complex stops before stage {}", i + 1)));
        }
        let k = *self.op.field();
        let p = self.stages[i].rep();
        let z = self.maps[i].kernel_space(&k);
        let (zrep, _) = p.sub_rep(&z);
        let mut b: Subspaces = BTreeMap::new();
        if i > 0 {
            for (blk, e) in self.maps[i - 1].image_space(&k) {
                let Some(ze) = z.get(&blk) else { continue };
                let coords: Vec<SVec> =
                    e.rows().iter().map(|r| ze.coords(r).expect("image lies in the kernel")).collect();
                b.insert(blk, Echelon::from_vectors(k, ze.rank(), &coords));
            }
        }
        let (h, _) = zrep.quotient(&b);
        Ok(match self.window(i) {
            Some(w) => restrict(&h, w),
            None => h,
        })
    }
}

/// `dim Ext^i(M, Λ)_t` from the dual complex.
pub fn ext_lambda_dims(res: &Resolution, i: usize) -> Result<ExtDims> {
    let dc = DualComplex::new(res, i + 1)?;
    let h = dc.cohomology(i)?;
    let mut out = ExtDims::default();
    let gens = res.stage_gens(i)?;
    if res.algebra().is_graded() {
        let w = dc.window(i).unwrap();
        for &(_, s) in gens {
            for e in -s..=w {
                out.by_degree.entry(-e).or_insert(0);
            }
        }
    } else if !gens.is_empty() {
        out.by_degree.insert(0, 0);
    }
    for (&(_, e), &n) in h.dims() {
        *out.by_degree.entry(-e).or_insert(0) += n;
    }
    Ok(out)
}

/// `tr^n M = Ext^n(M, Λ)` as a module over the opposite algebra.
#[derive(Clone, Debug)]
pub struct Transpose {
    pub module: Representation,
    /// Op-degrees above this were not computed (graded mode).
    pub window: Option<i32>,
}

pub fn transpose(res: &Resolution, n: usize) -> Result<Transpose> {
    let dc = DualComplex::new(res, n + 1)?;
    let h = dc.cohomology(n)?;
    let window = dc.window(n);
    // a finite answer below the window is reported as an honest module
    let module = match window {
        Some(w) if h.degree_range().is_none_or(|r| r.1 < w) => {
            Representation::build(h.algebra(), h.dims().clone(), h.actions().clone(), None)?
        }
        _ => h,
    };
    Ok(Transpose { module, window })
}

/// `dim Tor_i(X, M)` for a module `X` over the opposite algebra, from
/// `P_•(M) ⊗ X`.
pub fn tor_dim(x: &Representation, res: &Resolution, i: usize) -> Result<usize> {
    let alg = res.algebra();
    if x.algebra() != &alg.opposite() {
        return Err(Error::AlgebraMismatch);
    }
    let k = *alg.field();
    let chain = |j: usize| -> Result<Vec<(u32, Vec<(Block, u32, usize)>)>> {
        let gens = res.stage_gens(j)?;
        let mut off = 0u32;
        let mut out = Vec::new();
        for (g, &(v, _)) in gens.iter().enumerate() {
            let mut parts = Vec::new();
            for (&b, &d) in x.dims() {
                if b.0 == v {
                    parts.push((b, off, d));
                    off += d as u32;
                }
            }
            out.push((g as u32, parts));
        }
        Ok(out)
    };
    let size = |c: &[(u32, Vec<(Block, u32, usize)>)]| -> usize { c.iter().flat_map(|p| p.1.iter()).map(|p| p.2).sum() };
    // ∂_j : C_j -> C_{j-1}
    let boundary_rank = |j: usize| -> Result<usize> {
        if j == 0 {
            return Ok(0);
        }
        let src = chain(j)?;
        let tgt = chain(j - 1)?;
        if size(&src) == 0 || size(&tgt) == 0 {
            return Ok(0);
        }
        let d = res.differential_elems(j);
        let mut cols = Vec::new();
        for (g, parts) in &src {
            for &(b, _, dim) in parts {
                for u in 0..dim as u32 {
                    let mut acc = Acc::new(size(&tgt));
                    for (h, elem) in &d[*g as usize] {
                        let rx = alg.reverse_elem(elem);
                        for (tb, v) in x.apply_elem(b, &[(u, k.one())], &rx) {
                            let Some(&(_, off, _)) = tgt[*h as usize].1.iter().find(|p| p.0 == tb) else {
                                continue;
                            };
                            let sh: SVec = v.iter().map(|(r, c)| (r + off, *c)).collect();
                            acc.axpy(&k, &k.one(), &sh);
                        }
                    }
                    cols.push(acc.take());
                }
            }
        }
        Ok(Mat::from_cols(size(&tgt), cols).rank(&k))
    };
    let c = chain(i)?;
    Ok(size(&c) - boundary_rank(i)? - boundary_rank(i + 1)?)
}

/// A chain map `f_k : P_{i+k} -> Q_k` given on generators; the images are
/// vectors of `Q_k` whose degrees are lowered by `internal`.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub shift: usize,
    pub internal: i32,
    pub maps: Vec<Vec<(Block, SVec)>>,
}

/// Lifts a cocycle `P_i -> N` to a chain map into the resolution `tgt` of
/// `N`, through `depth` further stages.
pub fn lift_chain_map(src: &Resolution, class: &ExtClass, tgt: &Resolution, depth: usize) -> Result<ChainMap> {
    let k = *src.algebra().field();
    let t = class.internal;
    let i = class.degree;
    let mut solvers: BTreeMap<(usize, Block), Solver> = BTreeMap::new();
    let mut solve = |stage: usize, b: Block, y: &SVec| -> Result<SVec> {
        if y.is_empty() {
            return Ok(Vec::new());
        }
        if let Some(w) = tgt.window() {
            if b.1 > w {
                return Err(Error::ShallowResolution(format!("lift needs degree {} beyond {w}", b.1)));
            }
        }
        let s = solvers.entry((stage, b)).or_insert_with(|| Solver::new(&k, &tgt.map(stage).block(b)));
        s.solve(y).ok_or_else(|| Error::Invalid("cocycle does not lift".into()))
    };
    let mut maps: Vec<Vec<(Block, SVec)>> = Vec::new();
    let gens0 = src.stage_gens(i)?;
    if tgt.num_stages() == 0 {
        return Ok(ChainMap { shift: i, internal: t, maps: (0..=depth).map(|_| Vec::new()).collect() });
    }
    let mut f0 = Vec::new();
    for (g, &(v, s)) in gens0.iter().enumerate() {
        let b = (v, s - t);
        let y = &class.images[g].1;
        f0.push((b, solve(0, b, y)?));
    }
    maps.push(f0);
    for kk in 1..=depth {
        let gens = src.stage_gens(i + kk)?;
        if gens.is_empty() || !tgt.knows_stage(kk) {
            if !tgt.knows_stage(kk) && !gens.is_empty() {
                return Err(Error::ShallowResolution(format!("target stage {kk} unknown")));
            }
            maps.push(Vec::new());
            continue;
        }
        let d = src.differential_elems(i + kk);
        let prev = &maps[kk - 1];
        let q_prev = tgt.stage(kk - 1).expect("stage exists").rep();
        let mut fk = Vec::new();
        for (g, &(v, s)) in gens.iter().enumerate() {
            let b = (v, s - t);
            let mut acc = Acc::new(q_prev.dim_at(b));
            for (h, x) in &d[g] {
                let (hb, hv) = &prev[*h as usize];
                if hv.is_empty() {
                    continue;
                }
                if let Some(w) = q_prev.apply_elem(*hb, hv, x).get(&b) {
                    acc.axpy(&k, &k.one(), w);
                }
            }
            let y = acc.take();
            let z = if tgt.stage(kk).is_none() {
                if !y.is_empty() {
                    return Err(Error::Invalid("cocycle does not lift".into()));
                }
                Vec::new()
            } else {
                solve(kk, b, &y)?
            };
            fk.push((b, z));
        }
        maps.push(fk);
    }
    Ok(ChainMap { shift: i, internal: t, maps })
}

/// Coefficient of generator `gen` of `Q_k` in the image `f_k(g)`.
pub fn generator_coefficient(tgt: &Resolution, k: usize, image: &(Block, SVec), gen: u32) -> crate::field::Scalar {
    let Some(stage) = tgt.stage(k) else { return crate::field::Scalar::ZERO };
    match stage.generator_position(gen) {
        Some((b, pos)) if b == image.0 => sv_get(&image.1, pos),
        _ => crate::field::Scalar::ZERO,
    }
}

/// The middle term of the extension `0 -> N -> E -> M -> 0` given by a
/// class in `Ext^1(M, N)_0` (finite mode).
pub fn extension_from_class(res: &Resolution, n: &Representation, class: &ExtClass) -> Result<Representation> {
    check_same(res, n)?;
    if res.algebra().is_graded() || class.degree != 1 {
        return Err(Error::Unsupported("extensions from degree-1 classes over finite-mode algebras".into()));
    }
    let k = *n.field();
    let (Some(p0), Some(p1)) = (res.stage(0), res.stage(1)) else {
        // M projective or zero: only the split extension exists
        return Representation::direct_sum(&[n.clone(), res.module().clone()]);
    };
    let theta = p1.map_to(n, &class.images);
    let d1 = res.map(1);
    let eps = res.map(0);
    let ker = eps.kernel_space(&k);
    let sum = Representation::direct_sum(&[n.clone(), p0.rep().clone()])?;
    let mut u: Subspaces = BTreeMap::new();
    for (b, e) in &ker {
        if e.rank() == 0 {
            continue;
        }
        let solver = Solver::new(&k, &d1.block(*b));
        let nb = n.dim_at(*b) as u32;
        let mut ech = Echelon::new(k, sum.dim_at(*b));
        for z in e.rows() {
            let y = solver.solve(z).ok_or_else(|| Error::Invalid("syzygy not covered".into()))?;
            let mut v = theta.apply(&k, *b, &y);
            v.extend(z.iter().map(|(r, c)| (r + nb, k.neg(c))));
            ech.insert(&v);
        }
        u.insert(*b, ech);
    }
    Ok(sum.quotient(&u).0)
}

/// `Hom` into `Λ` for finite-mode algebras: the regular module.
pub fn regular_module(alg: &Algebra) -> Result<Representation> {
    let parts: Vec<Representation> =
        (0..alg.num_vertices() as u32).map(|v| Representation::projective(alg, v, 0)).collect::<Result<_>>()?;
    Representation::direct_sum(&parts)
}
