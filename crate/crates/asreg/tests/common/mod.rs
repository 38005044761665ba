//! Brute-force oracles. Everything here works modulo a large prime with its
//! own elimination routine and shares no code with the library beyond
//! reading its data structures.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use asreg_core::field::Scalar;
use asreg_core::repr::Representation;
use asreg_core::sca::Sca;

pub const P: u64 = 1_000_000_007;

pub fn md(x: i128) -> u64 {
    x.rem_euclid(P as i128) as u64
}

pub fn mul(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

pub fn add(a: u64, b: u64) -> u64 {
    (a + b) % P
}

pub fn sub(a: u64, b: u64) -> u64 {
    (a + P - b) % P
}

pub fn pow(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a);
        }
        a = mul(a, a);
        e >>= 1;
    }
    r
}

pub fn inv(a: u64) -> u64 {
    assert!(a != 0);
    pow(a, P - 2)
}

/// Reduction of a rational scalar; panics if `P` divides the denominator.
pub fn of(s: &Scalar) -> u64 {
    mul(md(s.numer()), inv(md(s.denom())))
}

/// Rank of a dense matrix over `F_P`.
pub fn rank(mut rows: Vec<Vec<u64>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, p);
        let iv = inv(rows[r][c]);
        let pivot: Vec<u64> = rows[r].iter().map(|x| mul(*x, iv)).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x = sub(*x, mul(f, *y));
                }
            }
        }
        rows[r] = pivot;
        r += 1;
    }
    r
}

pub fn det_nonzero(m: Vec<Vec<u64>>) -> bool {
    let n = m.len();
    rank(m) == n
}

/// Incremental sparse elimination; rows are maps from column to value.
#[derive(Default)]
pub struct SparseSpan {
    pivots: HashMap<u64, BTreeMap<u64, u64>>,
}

impl SparseSpan {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Adds `v`, returning whether the span grew.
    pub fn insert(&mut self, mut v: BTreeMap<u64, u64>) -> bool {
        loop {
            let Some((&lead, &c)) = v.iter().next_back() else { return false };
            match self.pivots.get(&lead) {
                Some(row) => {
                    for (&k, &x) in row {
                        let e = v.entry(k).or_insert(0);
                        *e = sub(*e, mul(c, x));
                        if *e == 0 {
                            v.remove(&k);
                        }
                    }
                }
                None => {
                    let iv = inv(c);
                    for x in v.values_mut() {
                        *x = mul(*x, iv);
                    }
                    self.pivots.insert(lead, v);
                    return true;
                }
            }
        }
    }
}

/// Hilbert function of `T(V)/(R)` for `dim V = n`, with `R` a list of
/// relations given as `(word, coefficient)` terms over letters `0..n`.
/// Degree `d` is `V^{⊗d}` modulo the span of all `w r w'`.
pub fn tensor_hilbert(n: usize, rels: &[Vec<(Vec<usize>, u64)>], upto: usize) -> Vec<usize> {
    let code = |w: &[usize]| w.iter().fold(0u64, |acc, &x| acc * n as u64 + x as u64);
    let words = |len: usize| -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for _ in 0..len {
            out = out.into_iter().flat_map(|w| (0..n).map(move |x| [w.clone(), vec![x]].concat())).collect();
        }
        out
    };
    let mut h = Vec::with_capacity(upto + 1);
    for d in 0..=upto {
        let mut span = SparseSpan::default();
        for r in rels {
            let len = r[0].0.len();
            assert!(r.iter().all(|t| t.0.len() == len), "relations must be homogeneous");
            if len > d {
                continue;
            }
            for left in 0..=d - len {
                for a in words(left) {
                    for b in words(d - len - left) {
                        let mut v = BTreeMap::new();
                        for (w, c) in r {
                            let full = [a.as_slice(), w.as_slice(), b.as_slice()].concat();
                            let e: &mut u64 = v.entry(code(&full)).or_insert(0);
                            *e = add(*e, *c);
                        }
                        v.retain(|_, x| *x != 0);
                        span.insert(v);
                    }
                }
            }
        }
        h.push(n.pow(d as u32) - span.rank());
    }
    h
}

/// Integer relations reduced modulo `P`.
pub fn rels_mod(rels: &[Vec<(Vec<usize>, i64)>]) -> Vec<Vec<(Vec<usize>, u64)>> {
    rels.iter().map(|r| r.iter().map(|(w, c)| (w.clone(), md(*c as i128))).collect()).collect()
}

/// Null space basis of a dense matrix over `F_P`.
pub fn kernel(rows: &[Vec<u64>], ncols: usize) -> Vec<Vec<u64>> {
    let mut m: Vec<Vec<u64>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, p);
        let iv = inv(m[r][c]);
        for x in m[r].iter_mut() {
            *x = mul(*x, iv);
        }
        let pivot = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x = sub(*x, mul(f, *y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0; ncols];
        v[free] = 1;
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = sub(0, m[i][free]);
        }
        out.push(v);
    }
    out
}

/// Quadratic dual of a one-vertex quadratic algebra on `n` letters:
/// the orthogonal complement of the relations in `V ⊗ V` under the pairing
/// with `⟨ab, cd⟩ = δ`, read in the opposite order.
pub fn quadratic_dual(n: usize, rels: &[Vec<(Vec<usize>, u64)>]) -> Vec<Vec<(Vec<usize>, u64)>> {
    let rows: Vec<Vec<u64>> = rels
        .iter()
        .map(|r| {
            let mut v = vec![0; n * n];
            for (w, c) in r {
                assert_eq!(w.len(), 2, "relations must be quadratic");
                v[w[0] * n + w[1]] = add(v[w[0] * n + w[1]], *c);
            }
            v
        })
        .collect();
    let perp = if rows.is_empty() { kernel(&[vec![0; n * n]], n * n) } else { kernel(&rows, n * n) };
    perp.into_iter()
        .map(|v| {
            v.iter()
                .enumerate()
                .filter(|(_, c)| **c != 0)
                .map(|(i, c)| (vec![i % n, i / n], *c))
                .collect()
        })
        .collect()
}

/// Structure constants of an algebra reduced modulo `P`:
/// `table[i][j]` is the dense product of basis elements `i` and `j`.
pub fn sca_table(a: &Sca) -> Vec<Vec<Vec<u64>>> {
    let n = a.dim();
    let mut t = vec![vec![vec![0; n]; n]; n];
    for (&(i, j), v) in a.table() {
        for (k, c) in v {
            t[i as usize][j as usize][*k as usize] = of(c);
        }
    }
    t
}

/// Whether some linear form `φ` makes `(x, y) ↦ φ(xy)` nondegenerate,
/// trying a few pseudo-random forms. A hit proves the algebra Frobenius.
pub fn has_frobenius_form(a: &Sca) -> bool {
    let t = sca_table(a);
    let n = a.dim();
    let mut seed = 0x2545_f491_4f6c_dd1du64;
    for _ in 0..8 {
        let phi: Vec<u64> = (0..n)
            .map(|_| {
                seed ^= seed << 13;
                seed ^= seed >> 7;
                seed ^= seed << 17;
                seed % P
            })
            .collect();
        let gram: Vec<Vec<u64>> = (0..n)
            .map(|i| (0..n).map(|j| t[i][j].iter().zip(&phi).fold(0, |s, (x, y)| add(s, mul(*x, *y)))).collect())
            .collect();
        if det_nonzero(gram) {
            return true;
        }
    }
    false
}

/// Whether the trace form `tr(L_x L_y)` is nondegenerate; in
/// characteristic 0 this proves semisimplicity.
pub fn trace_form_nondegenerate(a: &Sca) -> bool {
    let t = sca_table(a);
    let n = a.dim();
    // left multiplication matrices
    let left: Vec<Vec<Vec<u64>>> =
        (0..n).map(|i| (0..n).map(|r| (0..n).map(|c| t[i][c][r]).collect()).collect()).collect();
    let trace_prod = |x: &Vec<Vec<u64>>, y: &Vec<Vec<u64>>| {
        let mut s = 0;
        for r in 0..n {
            for c in 0..n {
                s = add(s, mul(x[r][c], y[c][r]));
            }
        }
        s
    };
    let gram = (0..n).map(|i| (0..n).map(|j| trace_prod(&left[i], &left[j])).collect()).collect();
    det_nonzero(gram)
}

/// `dim Z(A)` modulo `P`; an upper bound for the rational value.
pub fn center_dim(a: &Sca) -> usize {
    let t = sca_table(a);
    let n = a.dim();
    // z = Σ z_i b_i central iff Σ z_i (b_i b_j - b_j b_i) = 0 for all j
    let mut rows = Vec::new();
    for j in 0..n {
        for k in 0..n {
            rows.push((0..n).map(|i| sub(t[i][j][k], t[j][i][k])).collect());
        }
    }
    n - rank(rows)
}

/// `dim eAe` for a dense vector `e`.
pub fn corner_dim(a: &Sca, e: &[u64]) -> usize {
    let t = sca_table(a);
    let n = a.dim();
    let times = |x: &[u64], y: &[u64]| {
        let mut out = vec![0; n];
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            for j in 0..n {
                if y[j] == 0 {
                    continue;
                }
                let c = mul(x[i], y[j]);
                for k in 0..n {
                    out[k] = add(out[k], mul(c, t[i][j][k]));
                }
            }
        }
        out
    };
    let rows = (0..n)
        .map(|b| {
            let mut u = vec![0; n];
            u[b] = 1;
            times(&times(e, &u), e)
        })
        .collect();
    rank(rows)
}

/// `dim Hom(M, N)` for degree-0 representations, by solving
/// `f_t M_a = N_a f_s` directly.
pub fn hom_dim(m: &Representation, n: &Representation) -> usize {
    let blocks: Vec<(u32, i32)> = m.dims().keys().copied().collect();
    let mut offset = BTreeMap::new();
    let mut unknowns = 0;
    for b in &blocks {
        offset.insert(*b, unknowns);
        unknowns += m.dim_at(*b) * n.dim_at(*b);
    }
    let var = |b: (u32, i32), r: usize, c: usize| offset[&b] + r * m.dim_at(b) + c;
    let mut rows: Vec<Vec<u64>> = Vec::new();
    let arrows = m.algebra().quiver().num_arrows() as u32;
    // equations per arrow and source block of M
    for a in 0..arrows {
        let sources: Vec<(u32, i32)> = (0..m.algebra().num_vertices() as u32).map(|v| (v, 0)).collect();
        for s in sources {
            let (ms, ns) = (m.dim_at(s), n.dim_at(s));
            let t = target_of(m, a, s);
            let Some(t) = t else { continue };
            let (mt, nt) = (m.dim_at(t), n.dim_at(t));
            if nt == 0 || ms == 0 {
                continue;
            }
            let am = dense(m, a, s, mt, ms);
            let an = dense(n, a, s, nt, ns);
            // (f_t am - an f_s)[r][c] = 0
            for r in 0..nt {
                for c in 0..ms {
                    let mut row = vec![0; unknowns];
                    for k in 0..mt {
                        if am[k][c] != 0 {
                            let i = var(t, r, k);
                            row[i] = add(row[i], am[k][c]);
                        }
                    }
                    for k in 0..ns {
                        if an[r][k] != 0 {
                            let i = var(s, k, c);
                            row[i] = sub(row[i], an[r][k]);
                        }
                    }
                    rows.push(row);
                }
            }
        }
    }
    if unknowns == 0 {
        return 0;
    }
    unknowns - rank(rows)
}

fn target_of(m: &Representation, a: u32, s: (u32, i32)) -> Option<(u32, i32)> {
    let alg = m.algebra();
    let arrow = alg.quiver().arrow(a);
    let (from, to) = if alg.is_opposite() { (arrow.target, arrow.source) } else { (arrow.source, arrow.target) };
    (from == s.0).then_some((to, s.1))
}

fn dense(m: &Representation, a: u32, s: (u32, i32), rows: usize, cols: usize) -> Vec<Vec<u64>> {
    match m.action(a, s.1) {
        Some(mat) => mat.to_dense().iter().map(|r| r.iter().map(of).collect()).collect(),
        _ => vec![vec![0; cols]; rows],
    }
}
