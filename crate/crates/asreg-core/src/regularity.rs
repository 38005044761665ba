//! Membership in `H^n`, the n-simple condition on both sides, the
//! regularity certificate and the duality identities that follow from it.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::ext::{ext_dim, ext_lambda_dims, tor_dim, transpose};
use crate::repr::Representation;
use crate::resolution::{Caps, Pd, Resolution};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    In,
    Out(String),
    Inconclusive(String),
}

/// `pd M = n` and `Ext^i(M, Λ) = 0` for `i < n`.
pub fn check_h_membership(m: &Representation, n: usize, caps: &Caps) -> Result<Membership> {
    let res = Resolution::compute(m, caps)?;
    membership_from(&res, n)
}

fn membership_from(res: &Resolution, n: usize) -> Result<Membership> {
    match res.projective_dimension() {
        Pd::AtLeast(k) if k > n => return Ok(Membership::Out(format!("pd >= {k}"))),
        Pd::AtLeast(k) => return Ok(Membership::Inconclusive(format!("pd >= {k} within caps"))),
        Pd::Exact(p) if p != n => return Ok(Membership::Out(format!("pd = {p}"))),
        Pd::Exact(_) => {}
    }
    for i in 0..n {
        let e = ext_lambda_dims(res, i)?;
        if e.total() > 0 {
            return Ok(Membership::Out(format!("Ext^{i}(M, Λ) has dimension {}", e.total())));
        }
    }
    Ok(Membership::In)
}

/// Outcome of computing `tr^n` of a simple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TrOutcome {
    Simple { vertex: u32, degree: i32 },
    NonSimple(Vec<usize>),
    NotApplicable,
}

#[derive(Clone, Debug)]
pub struct SimpleRecord {
    pub vertex: u32,
    pub pd: Pd,
    /// `(i, dim Ext^i(S, Λ))` for `i < n`.
    pub ext_vanishing: Vec<(usize, usize)>,
    pub transpose: TrOutcome,
    /// Vertices of the simple submodules of `tr^n S`.
    pub socle_vertices: Vec<u32>,
    /// Whether `tr^n S` contains a simple of `H^n` of the other side.
    pub contains_hn_simple: Option<bool>,
    /// `(j, k)` with `Ω^k S ≅ Ω^j S`, when the resolution was cut off.
    pub periodicity: Option<(usize, usize)>,
    pub tr_module: Option<Representation>,
}

impl SimpleRecord {
    pub fn in_hn(&self) -> bool {
        self.ext_vanishing.iter().all(|e| e.1 == 0)
    }
}

#[derive(Clone, Debug)]
pub struct SideReport {
    pub opposite: bool,
    pub gldim: Pd,
    pub simples: Vec<SimpleRecord>,
}

impl SideReport {
    /// Simples of projective dimension `n` lying in `H^n`.
    pub fn hn_vertices(&self, n: usize) -> BTreeSet<u32> {
        self.simples.iter().filter(|s| s.pd == Pd::Exact(n) && s.in_hn()).map(|s| s.vertex).collect()
    }
}

/// Resolves every simple; for the simples of maximal projective dimension
/// `n ≥ 1` computes `Ext^i(S, Λ)` for `i < n` and `tr^n S`.
pub fn n_simple_condition(alg: &Algebra, caps: &Caps) -> Result<SideReport> {
    let mut ress = Vec::new();
    for v in 0..alg.num_vertices() as u32 {
        ress.push(Resolution::compute(&Representation::simple(alg, v, 0)?, caps)?);
    }
    let pds: Vec<Pd> = ress.iter().map(|r| r.projective_dimension()).collect();
    let top = pds.iter().map(|p| match p {
        Pd::Exact(n) | Pd::AtLeast(n) => *n,
    });
    let m = top.max().unwrap_or(0);
    let gldim = if pds.iter().any(|p| matches!(p, Pd::AtLeast(_))) { Pd::AtLeast(m) } else { Pd::Exact(m) };
    let mut simples = Vec::new();
    for (v, res) in ress.iter().enumerate() {
        let pd = pds[v];
        let mut rec = SimpleRecord {
            vertex: v as u32,
            pd,
            ext_vanishing: Vec::new(),
            transpose: TrOutcome::NotApplicable,
            socle_vertices: Vec::new(),
            contains_hn_simple: None,
            periodicity: None,
            tr_module: None,
        };
        if matches!(pd, Pd::AtLeast(_)) {
            rec.periodicity = res.periodicity();
        }
        if let Pd::Exact(n) = gldim {
            if n >= 1 && pd == Pd::Exact(n) {
                for i in 0..n {
                    rec.ext_vanishing.push((i, ext_lambda_dims(res, i)?.total()));
                }
                let tr = transpose(res, n)?.module;
                rec.transpose = if tr.dim() == 1 {
                    let (&(w, e), _) = tr.dims().iter().next().unwrap();
                    TrOutcome::Simple { vertex: w, degree: e }
                } else {
                    TrOutcome::NonSimple(tr.dim_vector())
                };
                let soc: BTreeSet<u32> = tr.socle().0.dims().keys().map(|b| b.0).collect();
                rec.socle_vertices = soc.into_iter().collect();
                rec.tr_module = Some(tr);
            }
        }
        simples.push(rec);
    }
    Ok(SideReport { opposite: alg.is_opposite(), gldim, simples })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Regular { within_cap: bool },
    NotRegular(String),
    Inconclusive(String),
    /// Global dimension 0.
    Semisimple,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Regular { within_cap: false } => "regular",
            Verdict::Regular { within_cap: true } => "regular-within-cap",
            Verdict::NotRegular(_) => "not_regular",
            Verdict::Inconclusive(_) => "inconclusive_at_cap",
            Verdict::Semisimple => "degenerate: semisimple",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub n: Option<usize>,
    pub graded: bool,
    pub sides: [SideReport; 2],
    pub both_sides_checked: bool,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

pub fn certify_as_regular(alg: &Algebra, caps: &Caps) -> Result<Certificate> {
    let left = n_simple_condition(alg, caps)?;
    let right = n_simple_condition(&alg.opposite(), caps)?;
    let graded = alg.is_graded();
    let name = |v: u32| alg.quiver().vertex_name(v);
    let mut notes = Vec::new();
    if graded {
        notes.push(String::from(
            "graded mode: Noetherianity is assumed, and every statement holds within the degree window",
        ));
    }
    let mut sides = [left, right];
    let (nl, nr) = (sides[0].gldim, sides[1].gldim);
    let verdict = match (nl, nr) {
        (Pd::Exact(a), Pd::Exact(b)) if a != b => {
            notes.push(format!("global dimensions differ across sides ({a} vs {b}); this indicates a computation error"));
            Verdict::Inconclusive(String::from("global dimension mismatch"))
        }
        (Pd::Exact(0), Pd::Exact(0)) => Verdict::Semisimple,
        (Pd::Exact(n), Pd::Exact(_)) => {
            let hn = [sides[0].hn_vertices(n), sides[1].hn_vertices(n)];
            for s in 0..2 {
                for rec in sides[s].simples.iter_mut() {
                    if rec.pd == Pd::Exact(n) {
                        rec.contains_hn_simple = Some(rec.socle_vertices.iter().any(|w| hn[1 - s].contains(w)));
                    }
                }
            }
            let mut witness = None;
            'outer: for (s, side) in sides.iter().enumerate() {
                let tag = if s == 0 { "" } else { "^op" };
                for rec in side.simples.iter().filter(|r| r.pd == Pd::Exact(n)) {
                    if let Some((i, d)) = rec.ext_vanishing.iter().find(|e| e.1 > 0) {
                        witness = Some(format!("Ext^{i}(S{tag}_{}, Λ) has dimension {d}", name(rec.vertex)));
                        break 'outer;
                    }
                    if rec.contains_hn_simple != Some(true) {
                        witness = Some(format!(
                            "tr^{n}(S{tag}_{}) has no simple submodule in H^{n} of the other side",
                            name(rec.vertex)
                        ));
                        break 'outer;
                    }
                }
            }
            match witness {
                Some(w) => Verdict::NotRegular(w),
                None => Verdict::Regular { within_cap: graded },
            }
        }
        _ => {
            for side in &sides {
                for rec in &side.simples {
                    if let Some((j, k)) = rec.periodicity {
                        let tag = if side.opposite { "^op" } else { "" };
                        let v = name(rec.vertex);
                        notes.push(format!("Ω^{k} S{tag}_{v} ≅ Ω^{j} S{tag}_{v}: periodic resolution"));
                    }
                }
            }
            Verdict::Inconclusive(String::from("global dimension not reached within the homological cap"))
        }
    };
    let n = match nl {
        Pd::Exact(n) => Some(n),
        Pd::AtLeast(_) => None,
    };
    Ok(Certificate { n, graded, sides, both_sides_checked: true, verdict, notes })
}

/// The map `S ↦ D tr^n S` on simples of projective dimension `n`, as
/// `(vertex, degree)` pairs, with its cycles on vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplePermutation {
    pub map: Vec<((u32, i32), (u32, i32))>,
    pub cycles: Vec<Vec<u32>>,
}

pub fn d_tr_permutation(cert: &Certificate) -> Result<SimplePermutation> {
    if !matches!(cert.verdict, Verdict::Regular { .. }) {
        return Err(Error::Invalid("the permutation needs a regular certificate".into()));
    }
    let mut map = Vec::new();
    for rec in &cert.sides[0].simples {
        match rec.transpose {
            TrOutcome::Simple { vertex, degree } => map.push(((rec.vertex, 0), (vertex, -degree))),
            TrOutcome::NonSimple(_) => {
                return Err(Error::Invalid(format!("tr^n of simple {} is not simple", rec.vertex)));
            }
            TrOutcome::NotApplicable => {}
        }
    }
    let next: BTreeMap<u32, u32> = map.iter().map(|(a, b)| (a.0, b.0)).collect();
    let mut seen = BTreeSet::new();
    let mut cycles = Vec::new();
    for &start in next.keys() {
        if seen.contains(&start) {
            continue;
        }
        let mut cyc = Vec::new();
        let mut cur = start;
        while seen.insert(cur) {
            cyc.push(cur);
            match next.get(&cur) {
                Some(&n) => cur = n,
                None => break,
            }
        }
        cycles.push(cyc);
    }
    Ok(SimplePermutation { map, cycles })
}

/// One row `(i, left, right)` per homological degree.
pub type DimTable = Vec<(usize, usize, usize)>;

pub fn table_passes(t: &DimTable) -> bool {
    t.iter().all(|r| r.1 == r.2)
}

/// `D tr^n M`.
pub fn d_tr(m: &Representation, n: usize, caps: &Caps) -> Result<Representation> {
    let res = Resolution::compute(m, caps)?;
    transpose(&res, n)?.module.dual()
}

/// `dim Ext^i(M, L)` against `dim Ext^{n-i}(L, D tr^n M)`.
pub fn serre_duality_check(m: &Representation, l: &Representation, n: usize, caps: &Caps) -> Result<DimTable> {
    let rm = Resolution::compute(m, caps)?;
    let rl = Resolution::compute(l, caps)?;
    let dtr = transpose(&rm, n)?.module.dual()?;
    (0..=n).map(|i| Ok((i, ext_dim(&rm, l, i)?, ext_dim(&rl, &dtr, n - i)?))).collect()
}

/// `(dim End(M), dim Ext^n(M, D tr^n M))`.
pub fn almost_split_dim_check(m: &Representation, n: usize, caps: &Caps) -> Result<(usize, usize)> {
    let rm = Resolution::compute(m, caps)?;
    let dtr = transpose(&rm, n)?.module.dual()?;
    Ok((m.hom_dim(m)?, ext_dim(&rm, &dtr, n)?))
}

/// `dim Tor_i(tr^n M, L)` against `dim Ext^{n-i}(M, L)`.
pub fn tor_ext_check(m: &Representation, l: &Representation, n: usize, caps: &Caps) -> Result<DimTable> {
    let rm = Resolution::compute(m, caps)?;
    let rl = Resolution::compute(l, caps)?;
    let tr = transpose(&rm, n)?.module;
    (0..=n).map(|i| Ok((i, tor_dim(&tr, &rl, i)?, ext_dim(&rm, l, n - i)?))).collect()
}
