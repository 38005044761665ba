//! Graded free modules `⊕ e_v A ⟨s⟩` and maps between them.
//!
//! A free module carries its representation, restricted to internal degrees
//! at most `max_degree` when given, and a label `(generator, normal word)`
//! for every basis vector.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::algebra::{Algebra, Block};
use crate::field::Scalar;
use crate::linalg::{Mat, SVec};
use crate::quiver::{elem_normalize, Elem, Path};
use crate::repr::{ModuleMap, Representation};

#[derive(Clone, Debug)]
pub struct FreeModule {
    alg: Algebra,
    gens: Vec<(u32, i32)>,
    max_degree: Option<i32>,
    rep: Representation,
    labels: BTreeMap<Block, Vec<(u32, Path)>>,
    index: BTreeMap<(u32, Path), u32>,
}

impl FreeModule {
    /// Generators are `(vertex, degree)`; generator `j` spans `e_v A`
    /// placed so that `e_v` sits in the given degree.
    pub fn new(alg: &Algebra, gens: Vec<(u32, i32)>, max_degree: Option<i32>) -> FreeModule {
        let graded = alg.is_graded();
        let gens: Vec<(u32, i32)> = gens.into_iter().map(|(v, s)| (v, if graded { s } else { 0 })).collect();
        let keep = |d: i32| max_degree.is_none_or(|m| d <= m);
        let mut labels: BTreeMap<Block, Vec<(u32, Path)>> = BTreeMap::new();
        let mut offset: BTreeMap<(u32, Block), u32> = BTreeMap::new();
        for (j, &(v, s)) in gens.iter().enumerate() {
            let pd = alg.projective_data(v);
            for (&(w, d), words) in &pd.blocks {
                let b = (w, d + s);
                if !keep(b.1) {
                    continue;
                }
                let l = labels.entry(b).or_default();
                offset.insert((j as u32, b), l.len() as u32);
                l.extend(words.iter().map(|p| (j as u32, p.clone())));
            }
        }
        let mut index = BTreeMap::new();
        for ls in labels.values() {
            for (i, l) in ls.iter().enumerate() {
                index.insert(l.clone(), i as u32);
            }
        }
        let dims: BTreeMap<Block, usize> = labels.iter().map(|(b, l)| (*b, l.len())).collect();
        let mut act = BTreeMap::new();
        let q = alg.quiver();
        for (&b, ls) in &labels {
            for (a, ar) in q.arrows().iter().enumerate() {
                if ar.source != b.0 {
                    continue;
                }
                let a = a as u32;
                let t = (ar.target, b.1 + alg.arrow_shift(a));
                let Some(&nt) = dims.get(&t) else { continue };
                let cols: Vec<SVec> = ls
                    .iter()
                    .map(|(j, p)| {
                        let (v, s) = gens[*j as usize];
                        let pd = alg.projective_data(v);
                        match pd.act.get(&(a, b.1 - s)) {
                            Some(m) => {
                                let off = offset[&(*j, t)];
                                m.cols[pd.index[p] as usize].iter().map(|(i, x)| (i + off, *x)).collect()
                            }
                            None => Vec::new(),
                        }
                    })
                    .collect();
                let m = Mat::from_cols(nt, cols);
                if !m.is_zero() {
                    act.insert((a, b.1), m);
                }
            }
        }
        let mut trunc = alg.cap().and_then(|c| gens.iter().map(|g| g.1 + c as i32).min());
        if let Some(m) = max_degree {
            trunc = Some(trunc.map_or(m, |t| t.min(m)));
        }
        let rep = Representation::build(alg, dims, act, trunc).expect("free module shapes are consistent");
        FreeModule { alg: alg.clone(), gens, max_degree, rep, labels, index }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn gens(&self) -> &[(u32, i32)] {
        &self.gens
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.max_degree
    }

    pub fn rep(&self) -> &Representation {
        &self.rep
    }

    pub fn labels(&self, b: Block) -> &[(u32, Path)] {
        self.labels.get(&b).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// Block and position of the basis vector `generator · word`.
    pub fn position(&self, j: u32, p: &Path) -> Option<(Block, u32)> {
        let (_, s) = self.gens[j as usize];
        let b = (p.end, s + self.alg.path_degree(p));
        self.index.get(&(j, p.clone())).map(|&i| (b, i))
    }

    /// Block and position of generator `j` itself.
    pub fn generator_position(&self, j: u32) -> Option<(Block, u32)> {
        let (v, _) = self.gens[j as usize];
        self.position(j, &Path::trivial(v))
    }

    /// Splits a vector of block `b` into one algebra element per generator.
    pub fn to_elems(&self, b: Block, v: &[(u32, Scalar)]) -> BTreeMap<u32, Elem> {
        let k = self.alg.field();
        let ls = self.labels(b);
        let mut out: BTreeMap<u32, Vec<(Path, Scalar)>> = BTreeMap::new();
        for (i, x) in v {
            let (j, p) = &ls[*i as usize];
            out.entry(*j).or_default().push((p.clone(), *x));
        }
        out.into_iter().map(|(j, t)| (j, elem_normalize(k, t))).collect()
    }

    /// `generator_j · e` as a vector; terms beyond `max_degree` are dropped.
    pub fn elem_vector(&self, j: u32, e: &Elem) -> BTreeMap<Block, SVec> {
        let mut out: BTreeMap<Block, SVec> = BTreeMap::new();
        for (p, c) in e {
            if let Some((b, i)) = self.position(j, p) {
                out.entry(b).or_default().push((i, *c));
            }
        }
        for v in out.values_mut() {
            v.sort_unstable_by_key(|t| t.0);
        }
        out
    }

    /// The map to `target` sending generator `j` to `images[j]`, extended
    /// along normal words one arrow at a time.
    pub fn map_to(&self, target: &Representation, images: &[(Block, SVec)]) -> ModuleMap {
        let q = self.alg.quiver();
        let mut cols: BTreeMap<(u32, Path), SVec> = BTreeMap::new();
        let mut blocks: BTreeMap<Block, Vec<SVec>> = BTreeMap::new();
        // prefixes of normal words are normal, so a pass by length sees them first
        let mut by_len: Vec<&(u32, Path)> = self.labels.values().flatten().collect();
        by_len.sort_by_key(|t| t.1.len());
        for (j, p) in by_len {
            let col = if p.is_trivial() {
                images[*j as usize].1.clone()
            } else {
                let last = *p.word.last().unwrap();
                let prefix = q.path_or_trivial(&p.word[..p.word.len() - 1], p.start);
                let (_, s) = self.gens[*j as usize];
                let pb = s + self.alg.path_degree(&prefix);
                let prev = cols.get(&(*j, prefix)).cloned().unwrap_or_default();
                target.apply_arrow(last, pb, &prev)
            };
            cols.insert((*j, p.clone()), col);
        }
        for (&b, ls) in &self.labels {
            let v: Vec<SVec> = ls.iter().map(|l| cols.remove(l).unwrap_or_default()).collect();
            blocks.insert(b, v);
        }
        let mats = blocks
            .into_iter()
            .map(|(b, c)| (b, Mat::from_cols(target.dim_at(b), c)))
            .filter(|(_, m)| !m.is_zero())
            .collect();
        ModuleMap { src: self.rep.dims().clone(), tgt: target.dims().clone(), blocks: mats }
    }
}
