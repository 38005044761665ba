//! Exact ground fields: the rationals and prime fields.
//!
//! Every scalar in the crate is a [`Scalar`]. Over `F_p` the scalar is an
//! integer in `0..p` stored with denominator one, so both fields share one
//! element type and arithmetic dispatches on the [`Field`] value. Rational
//! arithmetic is checked; an `i128` overflow panics instead of wrapping.

use core::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, Signed, Zero};

use crate::error::{Error, Result};

/// An exact scalar. Over a prime field only integers in `0..p` occur.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scalar(Ratio<i128>);

impl Scalar {
    pub const ZERO: Scalar = Scalar(Ratio::new_raw(0, 1));
    pub const ONE: Scalar = Scalar(Ratio::new_raw(1, 1));

    pub fn numer(&self) -> i128 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i128 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.numer().is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.denom().is_one()
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

/// Which exact field the computation runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rationals,
    Prime(u64),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cold]
fn overflow() -> ! {
    panic!("rational coefficient overflowed i128; exact arithmetic cannot continue")
}

impl Field {
    /// `F_p`; fails unless `p` is prime.
    pub fn prime(p: u64) -> Result<Field> {
        if p > (1u64 << 62) {
            return Err(Error::Invalid(alloc::format!("prime {p} is too large")));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        Scalar::ZERO
    }

    pub fn one(&self) -> Scalar {
        Scalar::ONE
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        self.from_i128(n as i128)
    }

    fn from_i128(&self, n: i128) -> Scalar {
        match self {
            Field::Rationals => Scalar(Ratio::from_integer(n)),
            Field::Prime(p) => Scalar(Ratio::from_integer(n.rem_euclid(*p as i128))),
        }
    }

    /// `n / d`, or `None` when `d` vanishes in the field.
    pub fn from_frac(&self, n: i64, d: i64) -> Option<Scalar> {
        let d = self.from_i64(d);
        let inv = self.inv(&d)?;
        Some(self.mul(&self.from_i64(n), &inv))
    }

    /// Reinterprets a scalar read from text (any rational) in this field.
    pub fn embed(&self, s: &Scalar) -> Option<Scalar> {
        match self {
            Field::Rationals => Some(*s),
            Field::Prime(_) => {
                let d = self.from_i128(s.denom());
                let inv = self.inv(&d)?;
                Some(self.mul(&self.from_i128(s.numer()), &inv))
            }
        }
    }

    #[inline]
    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match self {
            Field::Rationals => {
                if a.is_integer() && b.is_integer() {
                    match a.numer().checked_add(b.numer()) {
                        Some(n) => Scalar(Ratio::new_raw(n, 1)),
                        None => overflow(),
                    }
                } else {
                    Scalar(a.0.checked_add(&b.0).unwrap_or_else(|| overflow()))
                }
            }
            Field::Prime(p) => {
                let p = *p as i128;
                let mut s = a.numer() + b.numer();
                if s >= p {
                    s -= p;
                }
                Scalar(Ratio::new_raw(s, 1))
            }
        }
    }

    #[inline]
    pub fn neg(&self, a: &Scalar) -> Scalar {
        match self {
            Field::Rationals => Scalar(Ratio::new_raw(
                a.numer().checked_neg().unwrap_or_else(|| overflow()),
                a.denom(),
            )),
            Field::Prime(p) => {
                if a.is_zero() {
                    *a
                } else {
                    Scalar(Ratio::new_raw(*p as i128 - a.numer(), 1))
                }
            }
        }
    }

    #[inline]
    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match self {
            Field::Rationals => {
                if a.is_integer() && b.is_integer() {
                    match a.numer().checked_sub(b.numer()) {
                        Some(n) => Scalar(Ratio::new_raw(n, 1)),
                        None => overflow(),
                    }
                } else {
                    Scalar(a.0.checked_sub(&b.0).unwrap_or_else(|| overflow()))
                }
            }
            Field::Prime(_) => self.add(a, &self.neg(b)),
        }
    }

    #[inline]
    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match self {
            Field::Rationals => {
                if a.is_integer() && b.is_integer() {
                    match a.numer().checked_mul(b.numer()) {
                        Some(n) => Scalar(Ratio::new_raw(n, 1)),
                        None => overflow(),
                    }
                } else {
                    Scalar(a.0.checked_mul(&b.0).unwrap_or_else(|| overflow()))
                }
            }
            Field::Prime(p) => {
                let p = *p as i128;
                Scalar(Ratio::new_raw((a.numer() * b.numer()) % p, 1))
            }
        }
    }

    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        if a.is_zero() {
            return None;
        }
        match self {
            Field::Rationals => Some(Scalar(a.0.recip())),
            Field::Prime(p) => {
                let p = *p as i128;
                let g = a.numer().extended_gcd(&p);
                debug_assert!(g.gcd.is_one());
                Some(Scalar(Ratio::new_raw(g.x.rem_euclid(p), 1)))
            }
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Option<Scalar> {
        Some(self.mul(a, &self.inv(b)?))
    }

    /// Display form that prints prime-field elements in the symmetric range.
    pub fn signed_repr(&self, a: &Scalar) -> Scalar {
        match self {
            Field::Rationals => *a,
            Field::Prime(p) => {
                let p = *p as i128;
                if a.numer() > p / 2 {
                    Scalar(Ratio::new_raw(a.numer() - p, 1))
                } else {
                    *a
                }
            }
        }
    }

    /// Whether `a` prints with a minus sign (over `F_p`, whether its
    /// symmetric representative is negative).
    pub fn is_negative_repr(&self, a: &Scalar) -> bool {
        self.signed_repr(a).0.is_negative()
    }

    /// Primitive `m`-th root of unity in the field, if one exists.
    pub fn root_of_unity(&self, m: u64) -> Option<Scalar> {
        if m == 0 {
            return None;
        }
        if m == 1 {
            return Some(self.one());
        }
        match self {
            Field::Rationals => (m == 2).then(|| self.from_i64(-1)),
            Field::Prime(p) => {
                if (p - 1) % m != 0 {
                    return None;
                }
                (2..*p).find_map(|g| {
                    let g = self.from_i64(g as i64);
                    let z = self.pow(&g, (p - 1) / m);
                    // order exactly m
                    let primitive = (1..m).all(|k| self.pow(&z, k) != self.one())
                        && self.pow(&z, m) == self.one();
                    primitive.then_some(z)
                })
            }
        }
    }

    pub fn pow(&self, a: &Scalar, mut e: u64) -> Scalar {
        let mut base = *a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F {p}"),
        }
    }
}

/// Parses `"3"`, `"-2"` or `"p/q"` into a rational scalar.
pub fn parse_rational(s: &str) -> Option<Scalar> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<i128>().ok()?, d.trim().parse::<i128>().ok()?),
        None => (s.parse::<i128>().ok()?, 1),
    };
    if d == 0 {
        return None;
    }
    Some(Scalar(Ratio::new(n, d)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_arithmetic_is_exact() {
        let q = Field::Rationals;
        let a = q.from_frac(1, 3).unwrap();
        let b = q.from_frac(1, 6).unwrap();
        assert_eq!(q.add(&a, &b), q.from_frac(1, 2).unwrap());
        assert_eq!(q.mul(&a, &b), q.from_frac(1, 18).unwrap());
        assert_eq!(q.inv(&a).unwrap(), q.from_i64(3));
        assert!(q.inv(&q.zero()).is_none());
    }

    #[test]
    fn prime_field_inverse_and_negation() {
        let f = Field::prime(7).unwrap();
        for n in 1..7 {
            let a = f.from_i64(n);
            assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
            assert_eq!(f.add(&a, &f.neg(&a)), f.zero());
        }
        assert_eq!(f.from_i64(-1), f.from_i64(6));
        assert_eq!(f.from_frac(1, 2).unwrap(), f.from_i64(4));
        assert!(f.from_frac(1, 7).is_none());
    }

    #[test]
    fn non_prime_rejected() {
        assert!(matches!(Field::prime(9), Err(Error::NotPrime(9))));
        assert!(Field::prime(2).is_ok());
    }

    #[test]
    fn roots_of_unity() {
        assert_eq!(Field::Rationals.root_of_unity(2), Some(Field::Rationals.from_i64(-1)));
        assert_eq!(Field::Rationals.root_of_unity(3), None);
        let f = Field::prime(7).unwrap();
        let z = f.root_of_unity(3).unwrap();
        assert_eq!(f.pow(&z, 3), f.one());
        assert_ne!(z, f.one());
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("-3/6"), Some(Field::Rationals.from_frac(-1, 2).unwrap()));
        assert_eq!(parse_rational("4"), Some(Field::Rationals.from_i64(4)));
        assert_eq!(parse_rational("1/0"), None);
    }
}
