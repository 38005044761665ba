//! Heuristic growth classification of a finite window of Hilbert data.
//!
//! This looks only at the values it is given. It never decides
//! Gelfand-Kirillov dimension; every verdict is a heuristic reading of the
//! observed tail.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

pub const MIN_VALUES: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Growth {
    /// The sequence has reached zero.
    Finite,
    /// Finite differences of order `d + 1` vanish on the tail.
    Polynomial(u32),
    /// Successive ratios on the tail are stable and at least 3/2; the last
    /// ratio `num / den` is the estimate.
    Exponential { num: u128, den: u128 },
    Inconclusive,
}

impl Growth {
    pub fn label(&self) -> String {
        match self {
            Growth::Finite => "finite".into(),
            Growth::Polynomial(d) => format!("polynomial({d})"),
            Growth::Exponential { num, den } => format!("exponential(ratio {})", decimal(*num, *den, 3)),
            Growth::Inconclusive => "inconclusive".into(),
        }
    }
}

/// `num / den` rounded down to `digits` decimals, using integers only.
pub fn decimal(num: u128, den: u128, digits: u32) -> String {
    let whole = num / den;
    let mut rem = num % den;
    let mut s = format!("{whole}.");
    for _ in 0..digits {
        rem *= 10;
        s.push(char::from(b'0' + (rem / den) as u8));
        rem %= den;
    }
    s
}

pub fn classify_growth(h: &[usize]) -> Result<Growth> {
    if h.len() < MIN_VALUES {
        return Err(Error::Invalid(format!(
            "growth classification needs at least {MIN_VALUES} values, got {}",
            h.len()
        )));
    }
    if *h.last().unwrap() == 0 {
        return Ok(Growth::Finite);
    }
    let tail: Vec<i128> = h[h.len() / 2..].iter().map(|&x| x as i128).collect();
    let mut diff = tail.clone();
    let mut d = 0u32;
    // need at least two entries of the (d+1)-st difference to trust it
    while diff.len() >= 3 {
        let next: Vec<i128> = diff.windows(2).map(|w| w[1] - w[0]).collect();
        if next.iter().all(|&x| x == 0) {
            return Ok(Growth::Polynomial(d));
        }
        diff = next;
        d += 1;
    }
    if tail.iter().all(|&x| x > 0) {
        // ratios r_i = t_{i+1} / t_i compared exactly as fractions
        let ratios: Vec<(i128, i128)> = tail.windows(2).map(|w| (w[1], w[0])).collect();
        let big = ratios.iter().all(|&(n, d)| 2 * n >= 3 * d);
        let min = *ratios.iter().min_by(|a, b| (a.0 * b.1).cmp(&(b.0 * a.1))).unwrap();
        let max = *ratios.iter().max_by(|a, b| (a.0 * b.1).cmp(&(b.0 * a.1))).unwrap();
        // (max - min) / min <= 1/10
        let stable = 10 * (max.0 * min.1 - min.0 * max.1) <= min.0 * max.1;
        if big && stable {
            let (n, d) = *ratios.last().unwrap();
            return Ok(Growth::Exponential { num: n as u128, den: d as u128 });
        }
    }
    Ok(Growth::Inconclusive)
}
