//! Yoneda Ext-algebras `Ext^*(T, T)` of a sum of simples, truncated at a
//! homological degree.
//!
//! For minimal resolutions `Ext^i(S_a, S_b)` has the generators of `P_i(S_a)`
//! at vertex `b` as a dual basis. Products are read off from lifted chain
//! maps.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::ext::{generator_coefficient, lift_chain_map, ExtClass};
use crate::linalg::{sv_unit, SVec};
use crate::repr::{Representation, SimpleSet};
use crate::resolution::{Caps, Completeness, Resolution};
use crate::sca::Sca;

/// Basis element of the Yoneda algebra: the class dual to generator `gen`
/// of `P_degree(S_source)`, which lies at the vertex of `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YonedaTag {
    pub source: usize,
    pub target: usize,
    pub degree: usize,
    pub internal: i32,
    pub gen: u32,
}

#[derive(Clone, Debug)]
pub struct YonedaAlgebra {
    /// Graded by homological degree; `x·y` is "first `x`, then `y`".
    pub sca: Sca,
    pub tags: Vec<YonedaTag>,
    pub cap: usize,
    /// True when every resolution ended by `cap`, so nothing is missing.
    pub total_dim_certified: bool,
}

impl YonedaAlgebra {
    /// Dimensions by homological degree `0..=cap`.
    pub fn graded_dims(&self) -> Vec<usize> {
        let mut out = alloc::vec![0; self.cap + 1];
        for t in &self.tags {
            out[t.degree] += 1;
        }
        out
    }
}

/// `⊕_{i ≤ cap} Ext^i(T, T)` for `T` the sum of the given simples.
pub fn yoneda_algebra(alg: &Algebra, t: &SimpleSet, cap: usize, caps: &Caps) -> Result<YonedaAlgebra> {
    let simples: Vec<(u32, i32)> = t.0.clone();
    let caps = Caps { homcap: caps.homcap.max(cap + 1), degcap: caps.degcap };
    let mut res = Vec::with_capacity(simples.len());
    for &(v, d) in &simples {
        let s = Representation::simple(alg, v, d)?;
        let r = Resolution::compute(&s, &caps)?;
        if !r.knows_stage(cap) {
            return Err(Error::ShallowResolution(format!(
                "resolution of the simple at vertex {} is inconclusive before degree {cap}",
                alg.quiver().vertex_name(v)
            )));
        }
        res.push(r);
    }
    let certified = res
        .iter()
        .all(|r| matches!(r.completeness(), Completeness::Exact) && r.length().is_some_and(|l| l <= cap));
    let position = |v: u32| simples.iter().position(|s| s.0 == v);

    let mut tags = Vec::new();
    for i in 0..=cap {
        for (a, r) in res.iter().enumerate() {
            let gens = r.stage_gens(i).map(|g| g.to_vec()).unwrap_or_default();
            for (g, &(v, s)) in gens.iter().enumerate() {
                if let Some(b) = position(v) {
                    tags.push(YonedaTag { source: a, target: b, degree: i, internal: s - simples[b].1, gen: g as u32 });
                }
            }
        }
    }
    let index: BTreeMap<(usize, usize, u32), u32> =
        tags.iter().enumerate().map(|(n, x)| ((x.degree, x.source, x.gen), n as u32)).collect();

    let mut mult: BTreeMap<(u32, u32), SVec> = BTreeMap::new();
    for (xi, x) in tags.iter().enumerate() {
        let r = &res[x.source];
        let gens = r.stage_gens(x.degree)?;
        let images = gens
            .iter()
            .enumerate()
            .map(|(h, &(v, s))| {
                let b = (v, s - x.internal);
                if h as u32 == x.gen {
                    (b, sv_unit(0))
                } else {
                    (b, Vec::new())
                }
            })
            .collect();
        let class = ExtClass { degree: x.degree, internal: x.internal, images };
        let target = &res[x.target];
        let lift = lift_chain_map(r, &class, target, cap - x.degree)?;
        for (yi, y) in tags.iter().enumerate() {
            if y.source != x.target || x.degree + y.degree > cap {
                continue;
            }
            let deg = x.degree + y.degree;
            let mut out: SVec = Vec::new();
            for (h, img) in lift.maps[y.degree].iter().enumerate() {
                let c = generator_coefficient(target, y.degree, img, y.gen);
                if !c.is_zero() {
                    let z = index.get(&(deg, x.source, h as u32)).copied().ok_or_else(|| {
                        Error::Invalid("product lands outside the chosen simples".into())
                    })?;
                    out.push((z, c));
                }
            }
            if !out.is_empty() {
                out.sort_unstable_by_key(|e| e.0);
                mult.insert((xi as u32, yi as u32), out);
            }
        }
    }
    let q = alg.quiver();
    let names: Vec<String> = simples.iter().map(|(v, _)| String::from(q.vertex_name(*v))).collect();
    let labels = tags
        .iter()
        .map(|x| format!("E{}:{}->{}#{}", x.degree, names[x.source], names[x.target], x.gen))
        .collect();
    let degrees = Some(tags.iter().map(|x| x.degree as i32).collect());
    let idempotents = (0..simples.len())
        .map(|a| sv_unit(index[&(0, a, 0)]))
        .collect();
    let sca = Sca::new(*alg.field(), labels, degrees, mult, idempotents, names)?;
    Ok(YonedaAlgebra { sca, tags, cap, total_dim_certified: certified })
}
