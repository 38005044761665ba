//! Algebra constructions: trivial extensions, cyclic skew group algebras,
//! idempotent truncations, quadratic duals and Auslander algebras.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{Algebra, Block};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::{sv_get, sv_unit, Acc, Echelon, Mat, SVec};
use crate::presentation::{Mode, Presentation};
use crate::quiver::{elem_normalize, Path};
use crate::repr::{Iso, ModuleMap, Representation};
use crate::sca::{element_string, local_radical, presentation_from_sca, Extracted, Sca};

/// `Λ ⋉ D(Λ)` on the basis of normal words `p` and their duals `D(p)`.
/// `D(p)` sits in degree `top + 1 - deg p`, so the result is graded with
/// the duals of the vertices on top.
pub fn trivial_extension(alg: &Algebra) -> Result<Sca> {
    if alg.is_graded() {
        return Err(Error::Unsupported("trivial extensions need a finite-dimensional presentation".into()));
    }
    let q = alg.quiver();
    let words = alg.words();
    let nw = words.len();
    let index: BTreeMap<&Path, u32> = words.iter().enumerate().map(|(i, w)| (w, i as u32)).collect();
    let mut prod: BTreeMap<(u32, u32), SVec> = BTreeMap::new();
    for (i, u) in words.iter().enumerate() {
        for (j, v) in words.iter().enumerate() {
            if u.end != v.start {
                continue;
            }
            let e = alg.multiply(&alg.path_elem(u), &alg.path_elem(v))?;
            let mut sv: SVec = e.iter().map(|(p, c)| (index[p], *c)).collect();
            sv.sort_unstable_by_key(|t| t.0);
            if !sv.is_empty() {
                prod.insert((i as u32, j as u32), sv);
            }
        }
    }
    let coef = |a: u32, b: u32, w: u32| -> Scalar { prod.get(&(a, b)).map_or(Scalar::ZERO, |v| sv_get(v, w)) };
    let n = nw as u32;
    let mut mult: BTreeMap<(u32, u32), SVec> = BTreeMap::new();
    for (&(i, j), v) in &prod {
        mult.insert((i, j), v.clone());
    }
    for i in 0..n {
        for j in 0..n {
            // p·D(q) = Σ_x ⟨q, x p⟩ D(x)  and  D(q)·p = Σ_x ⟨q, p x⟩ D(x)
            let right: SVec = (0..n).filter_map(|x| {
                let c = coef(x, i, j);
                (!c.is_zero()).then_some((n + x, c))
            }).collect();
            if !right.is_empty() {
                mult.insert((i, n + j), right);
            }
            let left: SVec = (0..n).filter_map(|x| {
                let c = coef(i, x, j);
                (!c.is_zero()).then_some((n + x, c))
            }).collect();
            if !left.is_empty() {
                mult.insert((n + j, i), left);
            }
        }
    }
    let top = words.iter().map(|w| w.deg as i32).max().unwrap_or(0);
    let mut labels: Vec<String> = words.iter().map(|w| q.path_name(w)).collect();
    labels.extend(words.iter().map(|w| format!("D({})", q.path_name(w))));
    let mut degrees: Vec<i32> = words.iter().map(|w| w.deg as i32).collect();
    degrees.extend(words.iter().map(|w| top + 1 - w.deg as i32));
    let idempotents = (0..q.num_vertices() as u32).map(|v| sv_unit(index[&Path::trivial(v)])).collect();
    Sca::new(*alg.field(), labels, Some(degrees), mult, idempotents, q.vertices().to_vec())
}

/// The swap of the two vertices of the trivial extension of a Kronecker
/// quiver: `e_1 ↔ e_2`, `D(e_1) ↔ D(e_2)` and `a ↔ D(a)` for every arrow.
pub fn kronecker_swap(t: &Sca) -> Result<Mat> {
    let vs = t.vertex_names();
    if vs.len() != 2 {
        return Err(Error::BadAction("the swap needs exactly two vertices".into()));
    }
    let (e0, e1) = (format!("e({})", vs[0]), format!("e({})", vs[1]));
    let (d0, d1) = (format!("D({e0})"), format!("D({e1})"));
    let n = t.dim();
    let mut cols = Vec::with_capacity(n);
    for l in t.labels() {
        let img = if *l == e0 {
            e1.clone()
        } else if *l == e1 {
            e0.clone()
        } else if *l == d0 {
            d1.clone()
        } else if *l == d1 {
            d0.clone()
        } else if let Some(inner) = l.strip_prefix("D(").and_then(|s| s.strip_suffix(')')) {
            String::from(inner)
        } else {
            format!("D({l})")
        };
        let j = t.label_index(&img).ok_or_else(|| Error::BadAction(format!("no basis element `{img}`")))?;
        cols.push(sv_unit(j));
    }
    Ok(Mat::from_cols(n, cols))
}

/// `A ∗ ⟨g⟩` for a cyclic group of order `m` acting through the matrix `g`
/// (column `i` is the image of basis element `i`). Basis element
/// `u ⊗ g^i` has index `i·dim A + u`.
pub fn skew_group_cyclic(a: &Sca, g: &Mat, m: u64) -> Result<Sca> {
    let k = *a.field();
    let n = a.dim();
    if m == 0 {
        return Err(Error::BadAction("group order must be positive".into()));
    }
    let p = k.characteristic();
    if p != 0 && m % p == 0 {
        return Err(Error::BadAction(format!("characteristic {p} divides the group order {m}")));
    }
    if g.nrows != n || g.ncols() != n {
        return Err(Error::BadAction("action matrix has the wrong shape".into()));
    }
    let mut powers = vec![Mat::identity(n)];
    for _ in 1..m {
        let last = powers.last().unwrap().clone();
        powers.push(g.compose(&k, &last));
    }
    if g.compose(&k, powers.last().unwrap()) != Mat::identity(n) {
        return Err(Error::BadAction(format!("the generator does not have order dividing {m}")));
    }
    for i in 0..n as u32 {
        let gi = &g.cols[i as usize];
        if let Some(ds) = a.degrees() {
            if a.degree_of(gi) != Some(Some(ds[i as usize])) && !gi.is_empty() {
                return Err(Error::BadAction(format!("g does not preserve the degree of {}", a.labels()[i as usize])));
            }
        }
        for j in 0..n as u32 {
            let lhs = g.apply(&k, a.mul_basis(i, j));
            let rhs = a.mul(gi, &g.cols[j as usize]);
            if lhs != rhs {
                return Err(Error::BadAction(format!(
                    "g is not multiplicative on ({}, {})",
                    a.labels()[i as usize],
                    a.labels()[j as usize]
                )));
            }
        }
    }
    if !g.is_invertible(&k) {
        return Err(Error::BadAction("g is not invertible".into()));
    }
    let mu = m as usize;
    let mut mult: BTreeMap<(u32, u32), SVec> = BTreeMap::new();
    for i in 0..mu {
        for u in 0..n as u32 {
            for j in 0..mu {
                for v in 0..n as u32 {
                    let w = a.mul(&sv_unit(u), &powers[i].cols[v as usize]);
                    if w.is_empty() {
                        continue;
                    }
                    let off = (((i + j) % mu) * n) as u32;
                    let key = ((i * n) as u32 + u, (j * n) as u32 + v);
                    mult.insert(key, w.into_iter().map(|(t, c)| (off + t, c)).collect());
                }
            }
        }
    }
    let mut labels = Vec::with_capacity(mu * n);
    for i in 0..mu {
        for l in a.labels() {
            labels.push(match i {
                0 => l.clone(),
                1 => format!("{l}#g"),
                _ => format!("{l}#g^{i}"),
            });
        }
    }
    let degrees = a.degrees().map(|ds| (0..mu).flat_map(|_| ds.iter().copied()).collect());
    // the action must permute the given idempotents
    let idem = a.idempotents();
    let mut perm = Vec::with_capacity(idem.len());
    for (v, e) in idem.iter().enumerate() {
        let img = g.apply(&k, e);
        let w = idem.iter().position(|f| *f == img).ok_or_else(|| {
            Error::BadAction(format!("g does not map idempotent {v} to an idempotent of the decomposition"))
        })?;
        perm.push(w);
    }
    let mut seen = vec![false; idem.len()];
    let mut idempotents = Vec::new();
    let mut names = Vec::new();
    for v in 0..idem.len() {
        if seen[v] {
            continue;
        }
        let mut orbit = vec![v];
        let mut w = perm[v];
        while w != v {
            orbit.push(w);
            w = perm[w];
        }
        for &x in &orbit {
            seen[x] = true;
        }
        if orbit.len() == mu {
            for &x in &orbit {
                idempotents.push(idem[x].clone());
                names.push(a.vertex_names()[x].clone());
            }
        } else if orbit.len() == 1 {
            let zeta = k
                .root_of_unity(m)
                .ok_or_else(|| Error::Unsupported(format!("the field has no primitive {m}-th root of unity")))?;
            let inv_m = k.inv(&k.from_i64(m as i64)).unwrap();
            for l in 0..mu {
                let mut acc = Acc::new(mu * n);
                for (s, pw) in (0..mu).map(|s| (s, k.pow(&zeta, (s * l) as u64))) {
                    let c = k.mul(&pw, &inv_m);
                    let shifted: SVec = idem[v].iter().map(|(t, x)| ((s * n) as u32 + t, *x)).collect();
                    acc.axpy(&k, &c, &shifted);
                }
                idempotents.push(acc.take());
                names.push(format!("{}_{l}", a.vertex_names()[v]));
            }
        } else {
            return Err(Error::Unsupported(format!("orbit of size {} under a group of order {m}", orbit.len())));
        }
    }
    Sca::new(k, labels, degrees, mult, idempotents, names)
}

/// The corner algebra `eAe` with unit `e`. The listed idempotents of `A`
/// lying in the corner are kept when they sum to `e`.
pub fn idempotent_truncation(a: &Sca, e: &SVec) -> Result<Sca> {
    if a.mul(e, e) != *e {
        return Err(Error::NotIdempotent);
    }
    let basis = a.corner(e, e);
    let labels = basis
        .iter()
        .map(|b| {
            if b.len() == 1 && b[0].1 == Scalar::ONE {
                a.labels()[b[0].0 as usize].clone()
            } else {
                element_string(a, b)
            }
        })
        .collect();
    let k = *a.field();
    let mut inside = Vec::new();
    let mut names = Vec::new();
    let mut acc = Acc::new(a.dim());
    for (f, name) in a.idempotents().iter().zip(a.vertex_names()) {
        if !f.is_empty() && a.mul(e, f) == *f && a.mul(f, e) == *f {
            acc.axpy(&k, &Scalar::ONE, f);
            inside.push(f.clone());
            names.push(name.clone());
        }
    }
    if acc.take() != *e {
        inside = vec![e.clone()];
        names = vec![String::from("1")];
    }
    a.restrict(&basis, labels, &inside, names)
}

/// The quadratic dual: opposite quiver, relations spanning the orthogonal
/// complement of the relation span under `⟨p, q⟩ = δ_{p,q}` on paths of
/// length two.
pub fn quadratic_dual(p: &Presentation, mode: Mode) -> Result<Presentation> {
    let q = &p.quiver;
    if let Some(a) = q.arrows().iter().find(|a| a.degree != 1) {
        return Err(Error::NotQuadratic(format!("arrow `{}` has degree {}", a.name, a.degree)));
    }
    for (i, r) in p.relations.iter().enumerate() {
        if r.iter().any(|(path, _)| path.len() != 2) {
            return Err(Error::NotQuadratic(format!("relation {i} is not a combination of paths of length 2")));
        }
    }
    let k = p.field;
    let v2 = q.paths_of_length(2);
    let pos: BTreeMap<&Path, u32> = v2.iter().enumerate().map(|(i, x)| (x, i as u32)).collect();
    let rels: Vec<SVec> = p
        .relations
        .iter()
        .map(|r| {
            let mut v: SVec = r.iter().map(|(x, c)| (pos[x], *c)).collect();
            v.sort_unstable_by_key(|t| t.0);
            v
        })
        .collect();
    let perp = if rels.is_empty() {
        (0..v2.len() as u32).map(sv_unit).collect()
    } else {
        Mat::from_cols(v2.len(), rels).transpose().kernel(&k)
    };
    let qop = q.opposite();
    let out = Echelon::from_vectors(k, v2.len(), &perp)
        .rref()
        .into_iter()
        .map(|z| elem_normalize(&k, z.iter().map(|(i, c)| (q.reverse(&v2[*i as usize]), *c)).collect()))
        .collect();
    Presentation::new(k, qop, out, mode)
}

fn flatten(f: &ModuleMap) -> SVec {
    let mut out = Vec::new();
    let mut off = 0u32;
    for (b, &mb) in &f.src {
        let nb = f.tgt.get(b).copied().unwrap_or(0) as u32;
        if let Some(m) = f.blocks.get(b) {
            for (j, col) in m.cols.iter().enumerate() {
                out.extend(col.iter().map(|(i, x)| (off + j as u32 * nb + i, *x)));
            }
        }
        off += mb as u32 * nb;
    }
    out
}

fn flat_len(src: &BTreeMap<Block, usize>, tgt: &BTreeMap<Block, usize>) -> usize {
    src.iter().map(|(b, m)| m * tgt.get(b).copied().unwrap_or(0)).sum()
}

/// Block-diagonal matrix of an endomorphism.
fn full_matrix(f: &ModuleMap, dim: usize) -> Mat {
    let mut cols = Vec::with_capacity(dim);
    let mut off = 0u32;
    for (b, &mb) in &f.src {
        let m = f.block(*b);
        for j in 0..mb {
            cols.push(m.cols.get(j).map(|c| c.iter().map(|(i, x)| (off + i, *x)).collect()).unwrap_or_default());
        }
        off += mb as u32;
    }
    Mat::from_cols(dim, cols)
}

/// `End(M_1 ⊕ … ⊕ M_r)^op` for modules with local endomorphism rings,
/// together with its quiver presentation. The vertex for `M_i` is named
/// after it; `f·g = g∘f`, so `Hom(M_i, M_j)` lies in `e_i Γ e_j`.
pub fn auslander_algebra(base: &Algebra, modules: &[(String, Representation)]) -> Result<(Sca, Extracted)> {
    let k = *base.field();
    if modules.is_empty() {
        return Err(Error::Invalid("no modules given".into()));
    }
    for (name, m) in modules {
        if m.algebra() != base {
            return Err(Error::AlgebraMismatch);
        }
        if m.is_zero() {
            return Err(Error::Invalid(format!("module {name} is zero")));
        }
    }
    for i in 0..modules.len() {
        for j in i + 1..modules.len() {
            match modules[i].1.is_isomorphic(&modules[j].1)? {
                Iso::Yes(_) => {
                    return Err(Error::Invalid(format!(
                        "duplicate summands {} and {}",
                        modules[i].0, modules[j].0
                    )))
                }
                Iso::No => {}
                Iso::Undecided => return Err(Error::Unsupported("isomorphism search exceeded its budget".into())),
            }
        }
    }
    let r = modules.len();
    let mut homs: BTreeMap<(usize, usize), Vec<ModuleMap>> = BTreeMap::new();
    for i in 0..r {
        for j in 0..r {
            homs.insert((i, j), modules[i].1.hom_space(&modules[j].1)?);
        }
    }
    // basis index of the first element of each Hom(M_i, M_j)
    let mut offset: BTreeMap<(usize, usize), u32> = BTreeMap::new();
    let mut labels = Vec::new();
    for (&(i, j), h) in &homs {
        offset.insert((i, j), labels.len() as u32);
        for c in 0..h.len() {
            labels.push(format!("{}->{}:{}", modules[i].0, modules[j].0, c));
        }
    }
    let solvers: BTreeMap<(usize, usize), _> = homs
        .iter()
        .map(|(&(i, j), h)| {
            let len = flat_len(modules[i].1.dims(), modules[j].1.dims());
            ((i, j), Mat::from_cols(len, h.iter().map(flatten).collect()).solver(&k))
        })
        .collect();
    let mut mult = BTreeMap::new();
    for i in 0..r {
        for j in 0..r {
            for l in 0..r {
                for (a, f) in homs[&(i, j)].iter().enumerate() {
                    for (b, g) in homs[&(j, l)].iter().enumerate() {
                        let gf = g.compose(&k, f);
                        let c = solvers[&(i, l)]
                            .solve(&flatten(&gf))
                            .ok_or_else(|| Error::Invalid("composite is not a module map".into()))?;
                        if !c.is_empty() {
                            let o = offset[&(i, l)];
                            mult.insert(
                                (offset[&(i, j)] + a as u32, offset[&(j, l)] + b as u32),
                                c.into_iter().map(|(t, x)| (o + t, x)).collect(),
                            );
                        }
                    }
                }
            }
        }
    }
    let mut idempotents = Vec::new();
    let mut radical = Vec::new();
    for (i, (name, m)) in modules.iter().enumerate() {
        let o = offset[&(i, i)];
        let id = solvers[&(i, i)]
            .solve(&flatten(&ModuleMap::identity(m)))
            .ok_or_else(|| Error::Invalid("identity is not an endomorphism".into()))?;
        idempotents.push(id.into_iter().map(|(t, x)| (o + t, x)).collect::<SVec>());
        let mats: Vec<Mat> = homs[&(i, i)].iter().map(|f| full_matrix(f, m.dim())).collect();
        let rad = local_radical(&k, &mats).map_err(|e| match e {
            Error::NonLocal(s) => Error::NonLocal(format!("{name}: {s}")),
            other => other,
        })?;
        radical.extend(rad.into_iter().map(|v| v.into_iter().map(|(t, x)| (o + t, x)).collect::<SVec>()));
        for j in 0..r {
            if j != i {
                let o = offset[&(i, j)];
                radical.extend((0..homs[&(i, j)].len() as u32).map(|t| sv_unit(o + t)));
            }
        }
    }
    let names = modules.iter().map(|(n, _)| n.clone()).collect();
    let sca = Sca::new(k, labels, None, mult, idempotents, names)?;
    let ex = presentation_from_sca(&sca, Some(&radical))?;
    Ok((sca, ex))
}
