//! Exact coefficient domains: Q, prime fields, finite extensions and etale
//! towers over them, plus the polynomial and linear algebra built on top.

pub mod etale;
pub mod factor;
pub mod galois;
pub mod intfactor;
pub mod matrix;
pub mod poly;
pub mod prime;
pub mod rational;
pub mod series;
pub mod zech;

use std::fmt::{self, Debug, Display};
use std::hash::Hash;

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;

use crate::error::{Error, Result};

pub use etale::EtaleAlgebra;
pub use galois::GaloisField;
pub use prime::PrimeField;
pub use rational::Rationals;

/// A commutative ring with explicit element type.
///
/// The ring value carries whatever context arithmetic needs (a modulus, a
/// tower description), so elements stay plain data.
pub trait Ring: Clone + Send + Sync {
    type Elem: Clone + PartialEq + Eq + Hash + Ord + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// `sum a_i * b_i`; implementations may delay reductions.
    fn sum_of_products(&self, terms: &[(&Self::Elem, &Self::Elem)]) -> Self::Elem {
        let mut acc = self.zero();
        for (a, b) in terms {
            acc = self.add(&acc, &self.mul(a, b));
        }
        acc
    }

    fn scale_i64(&self, a: &Self::Elem, n: i64) -> Self::Elem {
        self.mul(a, &self.from_i64(n))
    }
}

/// A field: every nonzero element is invertible.
pub trait Field: Ring {
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn characteristic(&self) -> u64;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }
}

/// A finite field of odd characteristic, presented over its prime field.
pub trait FiniteField: Field {
    fn p(&self) -> u64;
    /// Degree over the prime field.
    fn degree(&self) -> usize;
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;
    /// Coordinates over F_p in the power basis of the defining modulus.
    fn coords(&self, a: &Self::Elem) -> Vec<u64>;
    fn from_coords(&self, c: &[u64]) -> Self::Elem;

    fn order(&self) -> BigUint {
        num_traits::pow(BigUint::from(self.p()), self.degree())
    }

    fn pow_big(&self, a: &Self::Elem, e: &BigUint) -> Self::Elem {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    fn frobenius(&self, a: &Self::Elem) -> Self::Elem {
        self.pow(a, self.p())
    }

    /// Element whose base-p digits are the coordinates, low digit first.
    fn from_index(&self, mut i: u64) -> Self::Elem {
        let p = self.p();
        let c: Vec<u64> = (0..self.degree())
            .map(|_| {
                let d = i % p;
                i /= p;
                d
            })
            .collect();
        self.from_coords(&c)
    }

    /// Euler's criterion; `a` must be nonzero.
    fn is_square_ff(&self, a: &Self::Elem) -> bool {
        let e = (self.order() - BigUint::one()) >> 1;
        self.is_one(&self.pow_big(a, &e))
    }

    /// The first non-square in index order. In even degree every element
    /// of the prime field is a square, so the search starts past them.
    fn first_nonsquare(&self) -> Self::Elem {
        let mut i = if self.degree() % 2 == 0 { self.p() } else { 2 };
        loop {
            let a = self.from_index(i);
            if !self.is_zero(&a) && !self.is_square_ff(&a) {
                return a;
            }
            i += 1;
        }
    }
}

/// Fields for which square classes are decidable, so Grothendieck-Witt
/// classes over them can be normalized and compared.
pub trait GwField: Field {
    fn handle(&self) -> FieldHandle;
    /// `None` if `a` is not a square, otherwise a square root.
    fn sqrt(&self, a: &Self::Elem) -> Result<Option<Self::Elem>>;
    /// A representative of the square class of `a`; canonical over finite
    /// fields, a reduced integer over Q.
    fn class_rep(&self, a: &Self::Elem) -> Result<Self::Elem>;
    /// Sign under the real embedding, when there is one.
    fn real_sign(&self, _a: &Self::Elem) -> Option<i32> {
        None
    }
    fn format(&self, a: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Result<Self::Elem>;

    fn is_square(&self, a: &Self::Elem) -> Result<bool> {
        if self.is_zero(a) {
            return Err(Error::ZeroInput);
        }
        Ok(self.sqrt(a)?.is_some())
    }

    /// Whether the diagonal forms `a` and `b` have the same local invariants
    /// at every finite place; `None` when the field has none to compare.
    fn hasse_agree(&self, _a: &[Self::Elem], _b: &[Self::Elem]) -> Result<Option<bool>> {
        Ok(None)
    }

    /// Whether `a` and `b` lie in the same square class.
    fn same_class(&self, a: &Self::Elem, b: &Self::Elem) -> Result<bool> {
        self.is_square(&self.mul(a, b))
    }
}

/// Serializable description of a base field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldHandle {
    Rationals,
    PrimeField(u64),
    FiniteExtension { p: u64, modulus: Vec<u64> },
}

impl FieldHandle {
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldHandle::Rationals => 0,
            FieldHandle::PrimeField(p) => *p,
            FieldHandle::FiniteExtension { p, .. } => *p,
        }
    }

    pub fn parse(s: &str) -> Result<FieldHandle> {
        let err = |m: &str| Error::Parse {
            location: format!("field '{s}'"),
            message: m.to_string(),
        };
        let s = s.trim();
        if s == "Q" {
            return Ok(FieldHandle::Rationals);
        }
        let rest = s.strip_prefix('F').ok_or_else(|| err("expected Q or F<p>"))?;
        match rest.split_once('^') {
            None => {
                let p = rest.parse::<u64>().map_err(|_| err("bad prime"))?;
                Ok(FieldHandle::PrimeField(p))
            }
            Some((p, tail)) => {
                let p = p.parse::<u64>().map_err(|_| err("bad prime"))?;
                let (e, coeffs) = tail.split_once(':').ok_or_else(|| err("missing modulus"))?;
                let e = e.parse::<usize>().map_err(|_| err("bad degree"))?;
                let body = coeffs
                    .trim()
                    .strip_prefix('[')
                    .and_then(|c| c.strip_suffix(']'))
                    .ok_or_else(|| err("modulus must be [c0,...,ce]"))?;
                let modulus = body
                    .split(',')
                    .map(|c| c.trim().parse::<u64>().map_err(|_| err("bad coefficient")))
                    .collect::<Result<Vec<_>>>()?;
                if modulus.len() != e + 1 {
                    return Err(err("modulus length must be degree + 1"));
                }
                Ok(FieldHandle::FiniteExtension { p, modulus })
            }
        }
    }
}

impl Display for FieldHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldHandle::Rationals => write!(f, "Q"),
            FieldHandle::PrimeField(p) => write!(f, "F{p}"),
            FieldHandle::FiniteExtension { p, modulus } => {
                let c: Vec<String> = modulus.iter().map(|c| c.to_string()).collect();
                write!(f, "F{p}^{}:[{}]", modulus.len() - 1, c.join(","))
            }
        }
    }
}

/// Rejects characteristics 2 and 5.
pub fn check_characteristic(c: u64) -> Result<()> {
    if c == 2 || c == 5 {
        Err(Error::BadCharacteristic(c))
    } else {
        Ok(())
    }
}

/// Deterministic primality test for u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut a: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, a);
            }
            a = mulmod(a, a);
            e >>= 1;
        }
        r
    };
    'outer: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Big-integer power of a small base.
pub fn big_pow(p: u64, e: usize) -> BigUint {
    let mut r = BigUint::one();
    for _ in 0..e {
        r *= p;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn handle_round_trip() {
        for s in ["Q", "F7", "F7^2:[4,0,1]"] {
            let h = FieldHandle::parse(s).unwrap();
            assert_eq!(h.to_string(), s);
        }
        assert!(FieldHandle::parse("F7^3:[1,1]").is_err());
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..60).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        assert!(is_prime_u64(1_000_000_007));
        assert!(!is_prime_u64(1_000_000_007 * 3));
    }

    #[test]
    fn characteristic_guard() {
        assert!(check_characteristic(2).is_err());
        assert!(check_characteristic(5).is_err());
        assert!(check_characteristic(7).is_ok());
    }
}
