//! Minimal projective resolutions, computed degreewise.
//!
//! Stage `i` is the free module `P_i` together with the images of its
//! generators in `P_{i-1}` (or in the module, for `i = 0`). Generators of a
//! syzygy `K` are a complement of `Σ_a K·a` inside `K`, block by block, so
//! every differential has entries in the radical.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::algebra::{Algebra, Block};
use crate::error::{Error, Result};
use crate::free::FreeModule;
use crate::linalg::{sv_unit, Echelon, SVec};
use crate::quiver::Elem;
use crate::repr::{ModuleMap, Representation, Subspaces};

/// Homological and internal-degree limits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub homcap: usize,
    pub degcap: i32,
}

impl Default for Caps {
    fn default() -> Caps {
        Caps { homcap: 8, degcap: 12 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Completeness {
    /// A zero syzygy was reached.
    Exact,
    /// A zero syzygy was reached in every internal degree up to `degree`.
    ExactWithinCap { degree: i32 },
    /// The homological cap was hit with a nonzero syzygy.
    Truncated { homcap: usize, degree: Option<i32> },
}

impl Completeness {
    pub fn is_complete(&self) -> bool {
        !matches!(self, Completeness::Truncated { .. })
    }
}

#[derive(Clone, Debug)]
pub struct Resolution {
    alg: Algebra,
    module: Representation,
    window: Option<i32>,
    stages: Vec<FreeModule>,
    /// `images[i][j]`: image of generator `j` of `P_i` in `P_{i-1}` (in the
    /// module when `i = 0`).
    images: Vec<Vec<(Block, SVec)>>,
    maps: Vec<ModuleMap>,
    kernels: Vec<Subspaces>,
    complete: Completeness,
    notes: Vec<String>,
}

/// `m` with every block above `d` removed.
pub fn restrict(m: &Representation, d: i32) -> Representation {
    let dims = m.dims().iter().filter(|(b, _)| b.1 <= d).map(|(b, n)| (*b, *n)).collect();
    let act = m
        .actions()
        .iter()
        .filter(|(&(a, s), _)| m.target_block(a, s).1 <= d)
        .map(|(k, v)| (*k, v.clone()))
        .collect();
    let t = Some(m.truncated_above().map_or(d, |t| t.min(d)));
    Representation::build(m.algebra(), dims, act, t).expect("restriction keeps shapes")
}

fn generators(x: &Representation, k_space: &Subspaces) -> Vec<(Block, SVec)> {
    let f = *x.field();
    let q = x.algebra().quiver();
    let mut rad: Subspaces = BTreeMap::new();
    for (&b, e) in k_space {
        for (a, ar) in q.arrows().iter().enumerate() {
            if ar.source != b.0 {
                continue;
            }
            let t = x.target_block(a as u32, b.1);
            if !k_space.contains_key(&t) {
                continue;
            }
            let r = rad.entry(t).or_insert_with(|| Echelon::new(f, x.dim_at(t)));
            for v in e.rows() {
                r.insert(&x.apply_arrow(a as u32, b.1, v));
            }
        }
    }
    let mut out = Vec::new();
    for (&b, e) in k_space {
        let mut r = rad.remove(&b).unwrap_or_else(|| Echelon::new(f, x.dim_at(b)));
        for v in e.rref() {
            if r.insert(&v) {
                out.push((b, v));
            }
        }
    }
    out
}

impl Resolution {
    pub fn compute(m: &Representation, caps: &Caps) -> Result<Resolution> {
        let alg = m.algebra().clone();
        let f = *alg.field();
        let mut notes = Vec::new();
        let window = match (alg.cap(), m.degree_range()) {
            (Some(cap), Some((lo, _))) => {
                let mut d = caps.degcap;
                if d > lo + cap as i32 {
                    d = lo + cap as i32;
                    notes.push(format!("degree cap clamped to {d} by the algebra cap {cap}"));
                }
                if let Some(t) = m.truncated_above() {
                    if t < d {
                        d = t;
                        notes.push(format!("degree cap clamped to {d} by the module truncation"));
                    }
                }
                Some(d)
            }
            (Some(_), None) => Some(caps.degcap),
            _ => None,
        };
        let module = match window {
            Some(d) => restrict(m, d),
            None => m.clone(),
        };
        let mut ambient = module.clone();
        let mut kspace: Subspaces = module
            .dims()
            .iter()
            .map(|(b, n)| (*b, Echelon::from_vectors(f, *n, &(0..*n as u32).map(sv_unit).collect::<Vec<_>>())))
            .collect();
        let mut stages = Vec::new();
        let mut images = Vec::new();
        let mut maps = Vec::new();
        let mut kernels = Vec::new();
        let complete;
        let mut i = 0;
        loop {
            let gens = generators(&ambient, &kspace);
            if gens.is_empty() {
                complete = match window {
                    Some(d) => Completeness::ExactWithinCap { degree: d },
                    None => Completeness::Exact,
                };
                break;
            }
            let free = FreeModule::new(&alg, gens.iter().map(|(b, _)| *b).collect(), window);
            let map = free.map_to(&ambient, &gens);
            let ker: Subspaces = map.kernel_space(&f).into_iter().filter(|(_, e)| e.rank() > 0).collect();
            ambient = free.rep().clone();
            stages.push(free);
            images.push(gens);
            maps.push(map);
            kernels.push(ker.clone());
            kspace = ker;
            if i == caps.homcap {
                if kspace.is_empty() {
                    complete = match window {
                        Some(d) => Completeness::ExactWithinCap { degree: d },
                        None => Completeness::Exact,
                    };
                } else {
                    complete = Completeness::Truncated { homcap: caps.homcap, degree: window };
                }
                break;
            }
            i += 1;
        }
        Ok(Resolution { alg, module, window, stages, images, maps, kernels, complete, notes })
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn module(&self) -> &Representation {
        &self.module
    }

    /// Largest internal degree covered (graded mode).
    pub fn window(&self) -> Option<i32> {
        self.window
    }

    pub fn completeness(&self) -> &Completeness {
        &self.complete
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    /// Number of computed stages `P_0, …`.
    pub fn num_stages(&self) -> usize {
        self.stages.len()
    }

    /// `P_i`; stages past a complete resolution are zero.
    pub fn stage(&self, i: usize) -> Option<&FreeModule> {
        self.stages.get(i)
    }

    pub fn stage_gens(&self, i: usize) -> Result<&[(u32, i32)]> {
        match self.stages.get(i) {
            Some(s) => Ok(s.gens()),
            None if self.complete.is_complete() => Ok(&[]),
            None => Err(Error::ShallowResolution(format!("stage {i} was not computed"))),
        }
    }

    /// Whether stage `i` is known (computed, or zero because the resolution
    /// stopped).
    pub fn knows_stage(&self, i: usize) -> bool {
        i < self.stages.len() || self.complete.is_complete()
    }

    /// Generators per stage.
    pub fn betti(&self) -> Vec<Vec<(u32, i32)>> {
        self.stages.iter().map(|s| s.gens().to_vec()).collect()
    }

    /// Length when complete.
    pub fn length(&self) -> Option<usize> {
        self.complete.is_complete().then(|| self.stages.len().saturating_sub(1))
    }

    pub fn images(&self, i: usize) -> &[(Block, SVec)] {
        &self.images[i]
    }

    /// Differential `d_i : P_i -> P_{i-1}` (the augmentation for `i = 0`).
    pub fn map(&self, i: usize) -> &ModuleMap {
        &self.maps[i]
    }

    /// `d_i` as a matrix of algebra elements: entry `[j][h]` is the
    /// coefficient of generator `h` of `P_{i-1}` in the image of generator
    /// `j` of `P_i`.
    pub fn differential_elems(&self, i: usize) -> Vec<BTreeMap<u32, Elem>> {
        assert!(i >= 1);
        let tgt = &self.stages[i - 1];
        self.images[i].iter().map(|(b, v)| tgt.to_elems(*b, v)).collect()
    }

    /// `Ω^i M`; `Ω^0 M = M`.
    pub fn syzygy(&self, i: usize) -> Option<Representation> {
        if i == 0 {
            return Some(self.module.clone());
        }
        if i <= self.kernels.len() {
            Some(self.stages[i - 1].rep().sub_rep(&self.kernels[i - 1]).0)
        } else if self.complete.is_complete() {
            Some(Representation::zero(&self.alg))
        } else {
            None
        }
    }

    /// Every differential maps generators into the radical.
    pub fn is_minimal(&self) -> bool {
        for i in 1..self.stages.len() {
            let tgt = &self.stages[i - 1];
            for (b, v) in &self.images[i] {
                for (j, p) in v.iter().map(|(x, _)| &tgt.labels(*b)[*x as usize]) {
                    let _ = j;
                    if p.is_trivial() {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// `d_{i-1} ∘ d_i = 0` for all computed stages (including the
    /// augmentation).
    pub fn is_complex(&self) -> bool {
        let f = self.alg.field();
        (1..self.maps.len()).all(|i| self.maps[i - 1].compose(f, &self.maps[i]).is_zero())
    }

    /// Exactness at every computed stage within the window, and surjectivity
    /// of the augmentation.
    pub fn is_exact(&self) -> bool {
        let f = self.alg.field();
        if self.maps.is_empty() {
            return self.module.is_zero();
        }
        if self.maps[0].rank(f) != self.module.dim() {
            return false;
        }
        for i in 1..self.maps.len() {
            for (b, n) in self.stages[i - 1].rep().dims() {
                let ker = *n - self.maps[i - 1].block(*b).rank(f);
                let im = self.maps[i].block(*b).rank(f);
                if ker != im {
                    return false;
                }
            }
        }
        true
    }

    /// Smallest `(j, k)` with `j < k` and `Ω^k ≅ Ω^j ≠ 0` among computed
    /// syzygies.
    pub fn periodicity(&self) -> Option<(usize, usize)> {
        let syz: Vec<Representation> = (0..=self.kernels.len()).filter_map(|i| self.syzygy(i)).collect();
        for k in 1..syz.len() {
            for j in 0..k {
                if syz[k].is_zero() || syz[k].dims() != syz[j].dims() {
                    continue;
                }
                if matches!(syz[k].is_isomorphic(&syz[j]), Ok(crate::repr::Iso::Yes(_))) {
                    return Some((j, k));
                }
            }
        }
        None
    }
}

/// Projective dimension as far as it is known.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pd {
    Exact(usize),
    AtLeast(usize),
}

impl Pd {
    pub fn exact(&self) -> Option<usize> {
        match self {
            Pd::Exact(n) => Some(*n),
            Pd::AtLeast(_) => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Pd::Exact(n) => format!("{n}"),
            Pd::AtLeast(n) => format!(">={n}"),
        }
    }
}

impl Resolution {
    /// A zero module has projective dimension 0 by convention here.
    pub fn projective_dimension(&self) -> Pd {
        match self.length() {
            Some(n) => Pd::Exact(n),
            None => Pd::AtLeast(self.stages.len()),
        }
    }
}

pub fn minimal_resolution(m: &Representation, caps: &Caps) -> Result<Resolution> {
    Resolution::compute(m, caps)
}

pub fn projective_dimension(m: &Representation, caps: &Caps) -> Result<Pd> {
    Ok(Resolution::compute(m, caps)?.projective_dimension())
}

/// Maximum over the simples at degree 0, with the per-vertex values.
pub fn global_dimension(alg: &Algebra, caps: &Caps) -> Result<(Pd, Vec<Pd>)> {
    let mut per = Vec::new();
    for v in 0..alg.num_vertices() as u32 {
        per.push(projective_dimension(&Representation::simple(alg, v, 0)?, caps)?);
    }
    let max_exact = per.iter().map(|p| match p {
        Pd::Exact(n) | Pd::AtLeast(n) => *n,
    });
    let m = max_exact.max().unwrap_or(0);
    let total = if per.iter().any(|p| matches!(p, Pd::AtLeast(_))) { Pd::AtLeast(m) } else { Pd::Exact(m) };
    Ok((total, per))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::presentation::{Mode, Presentation};
    use crate::quiver::Quiver;

    fn one_vertex(loops: &[&str], rels: &[&[(i64, &str)]], mode: Mode) -> Algebra {
        let mut q = Quiver::new();
        q.add_vertex("1").unwrap();
        for l in loops {
            q.add_arrow(l, "1", "1", 1).unwrap();
        }
        let k = Field::Rationals;
        let rs = rels.iter().map(|r| Presentation::relation(&q, &k, r).unwrap()).collect();
        Algebra::new(&Presentation::new(k, q, rs, mode).unwrap()).unwrap()
    }

    #[test]
    fn b2_simple_has_linear_resolution() {
        let a = one_vertex(&["x", "y"], &[&[(1, "x.x"), (1, "y.y")]], Mode::Graded { cap: 8 });
        let s = Representation::simple(&a, 0, 0).unwrap();
        let r = Resolution::compute(&s, &Caps { homcap: 6, degcap: 8 }).unwrap();
        assert_eq!(r.betti(), alloc::vec![alloc::vec![(0, 0)], alloc::vec![(0, 1), (0, 1)], alloc::vec![(0, 2)]]);
        assert_eq!(r.completeness(), &Completeness::ExactWithinCap { degree: 8 });
        assert!(r.is_minimal() && r.is_complex() && r.is_exact());
    }

    #[test]
    fn dual_numbers_are_periodic() {
        let a = one_vertex(&["x"], &[&[(1, "x.x")]], Mode::Finite);
        let s = Representation::simple(&a, 0, 0).unwrap();
        let r = Resolution::compute(&s, &Caps { homcap: 4, degcap: 12 }).unwrap();
        assert_eq!(r.projective_dimension(), Pd::AtLeast(5));
        assert!(r.is_minimal() && r.is_complex() && r.is_exact());
        assert_eq!(r.periodicity(), Some((0, 1)));
    }

    #[test]
    fn projective_has_length_zero() {
        let a = one_vertex(&["x"], &[&[(1, "x.x.x")]], Mode::Finite);
        let p = Representation::projective(&a, 0, 0).unwrap();
        let r = Resolution::compute(&p, &Caps::default()).unwrap();
        assert_eq!(r.projective_dimension(), Pd::Exact(0));
        let rad = p.radical().0;
        let r = Resolution::compute(&rad, &Caps { homcap: 1, degcap: 12 }).unwrap();
        assert_eq!(r.betti()[0].len(), 1);
        assert_eq!(r.syzygy(1).unwrap().dim(), 1);
    }
}
