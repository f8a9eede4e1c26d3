//! Finite fields F_{p^d} = F_p[a]/(m(a)) with elements as fixed-length
//! coordinate vectors.
//!
//! Multiplication accumulates unreduced products in u64 as long as the
//! bound `(p-1)^2 * count` allows, which for the small primes used in the
//! Fermat pipeline means one reduction per product sum.

use num_bigint::BigUint;
use rand::Rng;

use super::factor::is_irreducible;
use super::prime::tonelli_shanks;
use super::{check_characteristic, poly, Field, FieldHandle, FiniteField, GwField, PrimeField, Ring};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct GaloisField {
    prime: PrimeField,
    p: u64,
    /// Monic modulus, low to high, length d + 1.
    modulus: Vec<u64>,
    d: usize,
    /// Nonzero lower terms of `-modulus` as (index, p - m_i).
    tail: Vec<(usize, u64)>,
    /// How many products of reduced residues fit in a u64 accumulator.
    lazy_cap: u64,
    nonsquare: Vec<u64>,
}

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}
impl Eq for GaloisField {}

impl GaloisField {
    /// The field defined by a monic irreducible modulus over F_p.
    pub fn new(p: u64, modulus: Vec<u64>) -> Result<GaloisField> {
        check_characteristic(p)?;
        let prime = PrimeField::new(p)?;
        let mut m: Vec<u64> = modulus.iter().map(|c| c % p).collect();
        poly::trim(&prime, &mut m);
        if m.len() < 2 || m.last() != Some(&1) {
            return Err(Error::NotIrreducible(p));
        }
        if !is_irreducible(&prime, &m) {
            return Err(Error::NotIrreducible(p));
        }
        Ok(Self::new_unchecked(prime, m))
    }

    /// Skips the irreducibility test; the caller guarantees it.
    pub(crate) fn new_unchecked(prime: PrimeField, modulus: Vec<u64>) -> GaloisField {
        let p = prime.p();
        let d = modulus.len() - 1;
        let tail = (0..d)
            .filter(|&i| modulus[i] != 0)
            .map(|i| (i, p - modulus[i]))
            .collect();
        let sq = (p - 1) * (p - 1);
        let mut f = GaloisField {
            prime,
            p,
            modulus,
            d,
            tail,
            lazy_cap: (u64::MAX / sq.max(1)).max(1),
            nonsquare: Vec::new(),
        };
        f.nonsquare = f.first_nonsquare();
        f
    }

    pub fn from_handle(h: &FieldHandle) -> Result<GaloisField> {
        match h {
            FieldHandle::PrimeField(p) => GaloisField::new(*p, vec![0, 1]),
            FieldHandle::FiniteExtension { p, modulus } => GaloisField::new(*p, modulus.clone()),
            FieldHandle::Rationals => Err(Error::Unsupported("Q is not a finite field".into())),
        }
    }

    pub fn prime_field(&self) -> &PrimeField {
        &self.prime
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// The class of the generator `a`.
    pub fn generator(&self) -> Vec<u64> {
        let mut g = vec![0; self.d];
        if self.d == 1 {
            g[0] = (self.p - self.modulus[0]) % self.p;
        } else {
            g[1] = 1;
        }
        g
    }

    pub fn from_prime(&self, c: u64) -> Vec<u64> {
        let mut v = vec![0; self.d];
        v[0] = c % self.p;
        v
    }

    /// Reduces an accumulator of length up to 2d - 1 whose entries are
    /// already below p.
    fn reduce_acc(&self, acc: &mut [u64]) -> Vec<u64> {
        let p = self.p;
        let d = self.d;
        let n = acc.len();
        let cap = self.lazy_cap;
        // each slot receives at most one product per reduction step above it
        let plain = (n as u64) < cap;
        for k in (d..n).rev() {
            let c = acc[k] % p;
            if c == 0 {
                continue;
            }
            for &(i, t) in &self.tail {
                let j = k - d + i;
                if plain {
                    acc[j] += c * t;
                } else {
                    acc[j] = (acc[j] + c * t % p) % p;
                }
            }
        }
        acc[..d].iter().map(|c| c % p).collect()
    }

    fn accumulate(&self, terms: &[(&Vec<u64>, &Vec<u64>)]) -> Vec<u64> {
        let d = self.d;
        let p = self.p;
        let mut acc = vec![0u64; 2 * d - 1];
        let cap = self.lazy_cap;
        let mut count = 0u64;
        for (a, b) in terms {
            if count + d as u64 > cap {
                for c in acc.iter_mut() {
                    *c %= p;
                }
                count = 1;
            }
            count += d as u64;
            for (i, &ai) in a.iter().enumerate() {
                if ai == 0 {
                    continue;
                }
                let row = &mut acc[i..i + d];
                for (slot, &bj) in row.iter_mut().zip(b.iter()) {
                    *slot += ai * bj;
                }
            }
        }
        for c in acc.iter_mut() {
            *c %= p;
        }
        self.reduce_acc(&mut acc)
    }
}

impl Ring for GaloisField {
    type Elem = Vec<u64>;

    fn zero(&self) -> Vec<u64> {
        vec![0; self.d]
    }
    fn one(&self) -> Vec<u64> {
        self.from_prime(1)
    }
    fn from_i64(&self, n: i64) -> Vec<u64> {
        self.from_prime(self.prime.reduce_i64(n))
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| self.prime.add(x, y)).collect()
    }
    fn sub(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| self.prime.sub(x, y)).collect()
    }
    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        a.iter().map(|x| self.prime.neg(x)).collect()
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        if self.d == 1 {
            return vec![a[0] * b[0] % self.p];
        }
        self.accumulate(&[(a, b)])
    }
    fn is_zero(&self, a: &Vec<u64>) -> bool {
        a.iter().all(|&c| c == 0)
    }
    fn sum_of_products(&self, terms: &[(&Vec<u64>, &Vec<u64>)]) -> Vec<u64> {
        if terms.is_empty() {
            return self.zero();
        }
        self.accumulate(terms)
    }
    fn scale_i64(&self, a: &Vec<u64>, n: i64) -> Vec<u64> {
        let c = self.prime.reduce_i64(n);
        a.iter().map(|x| x * c % self.p).collect()
    }
}

impl Field for GaloisField {
    fn inv(&self, a: &Vec<u64>) -> Option<Vec<u64>> {
        if self.is_zero(a) {
            return None;
        }
        let f = poly::trimmed(&self.prime, a.clone());
        let (g, s, _) = poly::ext_gcd(&self.prime, &f, &self.modulus);
        debug_assert_eq!(g, vec![1]);
        let mut out = s;
        out.resize(self.d, 0);
        Some(out)
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
}

impl FiniteField for GaloisField {
    fn p(&self) -> u64 {
        self.p
    }
    fn degree(&self) -> usize {
        self.d
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<u64> {
        (0..self.d).map(|_| rng.gen_range(0..self.p)).collect()
    }
    fn coords(&self, a: &Vec<u64>) -> Vec<u64> {
        a.clone()
    }
    fn from_coords(&self, c: &[u64]) -> Vec<u64> {
        let mut v: Vec<u64> = c.iter().map(|x| x % self.p).collect();
        v.resize(self.d, 0);
        v
    }
}

impl GwField for GaloisField {
    fn handle(&self) -> FieldHandle {
        if self.d == 1 {
            FieldHandle::PrimeField(self.p)
        } else {
            FieldHandle::FiniteExtension {
                p: self.p,
                modulus: self.modulus.clone(),
            }
        }
    }
    fn sqrt(&self, a: &Vec<u64>) -> Result<Option<Vec<u64>>> {
        if self.is_zero(a) {
            return Err(Error::ZeroInput);
        }
        Ok(tonelli_shanks(self, a, &self.nonsquare))
    }
    fn class_rep(&self, a: &Vec<u64>) -> Result<Vec<u64>> {
        if self.is_zero(a) {
            return Err(Error::ZeroInput);
        }
        Ok(if self.is_square_ff(a) {
            self.one()
        } else {
            self.nonsquare.clone()
        })
    }
    fn is_square(&self, a: &Vec<u64>) -> Result<bool> {
        if self.is_zero(a) {
            return Err(Error::ZeroInput);
        }
        Ok(self.is_square_ff(a))
    }
    fn format(&self, a: &Vec<u64>) -> String {
        if self.d == 1 {
            return a[0].to_string();
        }
        let c: Vec<String> = a.iter().map(|x| x.to_string()).collect();
        format!("[{}]", c.join(","))
    }
    fn parse(&self, s: &str) -> Result<Vec<u64>> {
        let err = || Error::Parse {
            location: format!("element '{s}'"),
            message: "expected an integer or [c0,...]".into(),
        };
        let s = s.trim();
        if let Some(body) = s.strip_prefix('[').and_then(|b| b.strip_suffix(']')) {
            let c = body
                .split(',')
                .map(|t| t.trim().parse::<i64>().map(|n| self.prime.reduce_i64(n)))
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| err())?;
            if c.len() > self.d {
                return Err(err());
            }
            Ok(self.from_coords(&c))
        } else {
            let n: i64 = s.parse().map_err(|_| err())?;
            Ok(self.from_i64(n))
        }
    }
}

impl GaloisField {
    /// `a^((q-1)/2)` as a sign, for nonzero `a`.
    pub fn legendre(&self, a: &Vec<u64>) -> i32 {
        let e: BigUint = (self.order() - 1u32) >> 1;
        if self.is_one(&self.pow_big(a, &e)) {
            1
        } else {
            -1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rejects_reducible_modulus() {
        // x^2 - 2 over F7 splits since 2 = 3^2
        assert!(GaloisField::new(7, vec![5, 0, 1]).is_err());
        assert!(GaloisField::new(7, vec![4, 0, 1]).is_ok());
    }

    #[test]
    fn field_axioms_random() {
        let f = GaloisField::new(3, vec![2, 1, 0, 0, 1]).unwrap(); // x^4 + x + 2
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let a = f.random(&mut rng);
            let b = f.random(&mut rng);
            let c = f.random(&mut rng);
            assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
            if !f.is_zero(&a) {
                assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
            }
            let sp = f.sum_of_products(&[(&a, &b), (&b, &c)]);
            assert_eq!(sp, f.add(&f.mul(&a, &b), &f.mul(&b, &c)));
        }
    }

    #[test]
    fn frobenius_norm_matches_power() {
        // norm = a^(1 + q + ... + q^(e-1)) lands in F_p
        let f = GaloisField::new(7, vec![5, 0, 0, 1]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let a = f.random(&mut rng);
            let n = f.pow(&a, 1 + 7 + 49);
            assert!(n[1..].iter().all(|&c| c == 0));
        }
    }

    #[test]
    fn large_prime_accumulation() {
        let p = 2_147_483_647u64;
        let (f, c) = (3..)
            .find_map(|c| GaloisField::new(p, vec![p - c, 0, 1]).ok().map(|f| (f, c)))
            .unwrap();
        let a = vec![p - 1, p - 2];
        let b = vec![p - 3, p - 4];
        let pp = p as u128;
        let c0 = ((p - 1) as u128 * (p - 3) as u128) % pp;
        let c1 = ((p - 1) as u128 * (p - 4) as u128 + (p - 2) as u128 * (p - 3) as u128) % pp;
        let c2 = ((p - 2) as u128 * (p - 4) as u128) % pp;
        let r0 = (c0 + c2 * c as u128) % pp;
        assert_eq!(f.mul(&a, &b), vec![r0 as u64, c1 as u64]);
    }
}
