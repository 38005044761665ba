//! Small named algebras used by tests, examples and the command line.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::Algebra;
use crate::error::Result;
use crate::field::Field;
use crate::presentation::{Mode, Presentation};
use crate::quiver::{elem_normalize, Quiver};
use crate::repr::Representation;

fn loops(n: usize) -> (Quiver, Vec<String>) {
    let mut q = Quiver::new();
    q.add_vertex("1").expect("fresh quiver");
    let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    for x in &names {
        q.add_arrow(x, "1", "1", 1).expect("fresh names");
    }
    (q, names)
}

/// `K[x]/(x^m)`.
pub fn truncated_polynomial(k: Field, m: usize) -> Result<Presentation> {
    let mut q = Quiver::new();
    q.add_vertex("1")?;
    q.add_arrow("x", "1", "1", 1)?;
    let word = vec!["x"; m].join(".");
    let r = Presentation::relation(&q, &k, &[(1, &word)])?;
    Presentation::new(k, q, vec![r], Mode::Finite)
}

/// Path algebra of `1 ⇉ 2` with arrows `a1 … an`.
pub fn kronecker(k: Field, n: usize) -> Result<Presentation> {
    let mut q = Quiver::new();
    q.add_vertex("1")?;
    q.add_vertex("2")?;
    for i in 1..=n {
        q.add_arrow(&format!("a{i}"), "1", "2", 1)?;
    }
    Presentation::new(k, q, vec![], Mode::Finite)
}

/// `K[x_1, …, x_n] / (x_i x_j for i ≠ j, x_i² − x_2² for i ≠ 2)`, as a
/// quotient of the free algebra on `n ≥ 2` loops.
pub fn a_n(k: Field, n: usize) -> Result<Presentation> {
    let (q, xs) = loops(n);
    let mut rels = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                rels.push(Presentation::relation(&q, &k, &[(1, &format!("{}.{}", xs[i], xs[j]))])?);
            }
        }
        if i != 1 {
            let sq = format!("{}.{}", xs[i], xs[i]);
            let two = format!("{}.{}", xs[1], xs[1]);
            rels.push(Presentation::relation(&q, &k, &[(1, &sq), (-1, &two)])?);
        }
    }
    Presentation::new(k, q, rels, Mode::Finite)
}

/// `K⟨x_1, …, x_n⟩ / (Σ x_i²)`, graded up to `cap`.
pub fn b_n(k: Field, n: usize, cap: u32) -> Result<Presentation> {
    let (q, xs) = loops(n);
    let mut terms = Vec::new();
    for x in &xs {
        terms.push((q.parse_path(&format!("{x}.{x}"))?, k.one()));
    }
    let r = elem_normalize(&k, terms);
    Presentation::new(k, q, vec![r], Mode::Graded { cap })
}

/// Exterior algebra on two generators `x, y`.
pub fn exterior2(k: Field) -> Result<Presentation> {
    let mut q = Quiver::new();
    q.add_vertex("1")?;
    q.add_arrow("x", "1", "1", 1)?;
    q.add_arrow("y", "1", "1", 1)?;
    let rels = vec![
        Presentation::relation(&q, &k, &[(1, "x.x")])?,
        Presentation::relation(&q, &k, &[(1, "y.y")])?,
        Presentation::relation(&q, &k, &[(1, "x.y"), (1, "y.x")])?,
    ];
    Presentation::new(k, q, rels, Mode::Finite)
}

/// `K(1 ⇄ 2)/(αβα, βαβ)` with arrows `alpha: 1 → 2`, `beta: 2 → 1`.
pub fn two_cycle_cubed(k: Field) -> Result<Presentation> {
    let mut q = Quiver::new();
    q.add_vertex("1")?;
    q.add_vertex("2")?;
    q.add_arrow("alpha", "1", "2", 1)?;
    q.add_arrow("beta", "2", "1", 1)?;
    let rels = vec![
        Presentation::relation(&q, &k, &[(1, "alpha.beta.alpha")])?,
        Presentation::relation(&q, &k, &[(1, "beta.alpha.beta")])?,
    ];
    Presentation::new(k, q, rels, Mode::Finite)
}

/// The indecomposables `U = K[x]/(x)`, `L = K[x]/(x²)` and `Σ` over
/// `Σ = K[x]/(x³)`, named `U`, `L`, `Sigma`.
pub fn truncated_polynomial_modules(sigma: &Algebra) -> Result<Vec<(String, Representation)>> {
    let p = Representation::projective(sigma, 0, 0)?;
    Ok(vec![
        (String::from("U"), Representation::simple(sigma, 0, 0)?),
        (String::from("L"), p.loewy_quotient(2)),
        (String::from("Sigma"), p),
    ])
}
