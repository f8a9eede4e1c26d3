//! Exponential and logarithm tables for small finite fields, used to
//! evaluate binary forms at every point of `F_{p^m}` quickly.
//!
//! Elements are handled in two encodings: the dense index
//! `sum c_j p^j` of the coordinate vector, and a packed word with one
//! 10-bit lane per coordinate. Packed words can be scaled by small
//! integers and summed without carries as long as lanes stay below 1024,
//! which holds for up to five terms when `p <= 13`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::factor::is_irreducible;
use super::{FiniteField, GaloisField, PrimeField, Ring};
use crate::error::{Error, Result};

pub const LANE_BITS: u32 = 10;
const LANE_MASK: u64 = (1 << LANE_BITS) - 1;
/// Largest field size accepted for table construction.
pub const MAX_ORDER: u64 = 5_000_000;

#[derive(Clone, Debug)]
pub struct LogField {
    field: GaloisField,
    p: u64,
    m: usize,
    /// `q - 1`, the order of the multiplicative group.
    n: u32,
    /// Packed coordinates of `g^k`.
    exp: Vec<u64>,
    /// Discrete log by dense index; `u32::MAX` for zero.
    log: Vec<u32>,
    pw: Vec<u32>,
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// A degree-`m` modulus over F_p whose root generates the unit group.
pub fn primitive_modulus(fp: &PrimeField, m: usize) -> Vec<u64> {
    let p = fp.p();
    let n = p.pow(m as u32) - 1;
    let factors = prime_factors(n);
    let primitive = |f: &Vec<u64>| -> bool {
        if !is_irreducible(fp, f) {
            return false;
        }
        let k = GaloisField::new_unchecked(fp.clone(), f.clone());
        let x = k.generator();
        factors.iter().all(|r| !k.is_one(&k.pow(&x, n / r)))
    };
    if m == 1 {
        let g = (2..p).find(|&g| factors.iter().all(|r| fp.pow(&g, (p - 1) / r) != 1)).unwrap_or(1);
        return vec![(p - g) % p, 1];
    }
    for j in 1..m {
        for a in 0..p {
            for b in 1..p {
                let mut f = vec![0u64; m + 1];
                f[m] = 1;
                f[j] = a;
                f[0] = b;
                if primitive(&f) {
                    return f;
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p ^ (m as u64) << 32);
    loop {
        let mut f: Vec<u64> = (0..m).map(|_| fp.random(&mut rng)).collect();
        f.push(1);
        if primitive(&f) {
            return f;
        }
    }
}

impl LogField {
    pub fn new(p: u64, m: usize) -> Result<LogField> {
        let fp = PrimeField::new(p)?;
        if p > 13 || m > 6 {
            return Err(Error::BudgetExceeded(format!("log tables need p <= 13 and degree <= 6, got F{p}^{m}")));
        }
        let q = p.pow(m as u32);
        if q > MAX_ORDER {
            return Err(Error::BudgetExceeded(format!("F{p}^{m} has {q} elements")));
        }
        let modulus = primitive_modulus(&fp, m);
        let field = GaloisField::new_unchecked(fp, modulus.clone());
        let n = (q - 1) as u32;
        let pw: Vec<u32> = (0..m).map(|j| p.pow(j as u32) as u32).collect();
        let mut exp = vec![0u64; n as usize];
        let mut log = vec![u32::MAX; q as usize];
        let mut e = vec![0u64; m];
        e[0] = 1;
        for k in 0..n {
            let dense: u32 = e.iter().zip(&pw).map(|(&c, &w)| c as u32 * w).sum();
            exp[k as usize] = pack(&e);
            log[dense as usize] = k;
            // multiply by the generator: shift and reduce by the monic modulus
            let carry = e[m - 1];
            for j in (1..m).rev() {
                e[j] = e[j - 1];
            }
            e[0] = 0;
            for j in 0..m {
                e[j] = (e[j] + carry * ((p - modulus[j]) % p)) % p;
            }
        }
        Ok(LogField { field, p, m, n, exp, log, pw })
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }
    pub fn degree(&self) -> usize {
        self.m
    }
    /// Order of the unit group.
    pub fn units(&self) -> u32 {
        self.n
    }

    /// Packed coordinates of `g^k`.
    #[inline]
    pub fn exp_packed(&self, k: u32) -> u64 {
        self.exp[k as usize]
    }

    /// Dense index of a packed word with lanes below 1024.
    #[inline]
    pub fn dense_of_packed(&self, mut w: u64) -> u32 {
        let mut d = 0u32;
        for j in 0..self.m {
            d += ((w & LANE_MASK) % self.p) as u32 * self.pw[j];
            w >>= LANE_BITS;
        }
        d
    }

    /// Discrete log of a dense index, `None` for zero.
    #[inline]
    pub fn log_of_dense(&self, d: u32) -> Option<u32> {
        let l = self.log[d as usize];
        (l != u32::MAX).then_some(l)
    }

    pub fn dense(&self, a: &[u64]) -> u32 {
        a.iter().zip(&self.pw).map(|(&c, &w)| c as u32 * w).sum()
    }

    pub fn element_of_dense(&self, d: u32) -> Vec<u64> {
        self.field.from_index(d as u64)
    }

    /// `g^k` as a field element.
    pub fn element_of_log(&self, k: u32) -> Vec<u64> {
        unpack(self.exp[(k % self.n) as usize], self.m)
    }
}

pub fn pack(c: &[u64]) -> u64 {
    c.iter().rev().fold(0u64, |acc, &x| (acc << LANE_BITS) | x)
}

pub fn unpack(mut w: u64, m: usize) -> Vec<u64> {
    (0..m)
        .map(|_| {
            let x = w & LANE_MASK;
            w >>= LANE_BITS;
            x
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_are_consistent() {
        let t = LogField::new(7, 3).unwrap();
        let k = t.field().clone();
        let g = k.generator();
        assert_eq!(t.units(), 342);
        for e in [0u32, 1, 5, 100, 341] {
            let a = t.element_of_log(e);
            assert_eq!(a, k.pow(&g, e as u64));
            assert_eq!(t.log_of_dense(t.dense(&a)), Some(e));
        }
        assert_eq!(t.log_of_dense(0), None);
        // packed sums reduce lane-wise
        let a = t.element_of_log(17);
        let b = t.element_of_log(200);
        let w = 3 * t.exp_packed(17) + 5 * t.exp_packed(200);
        let expect = k.add(&k.mul(&k.from_prime(3), &a), &k.mul(&k.from_prime(5), &b));
        assert_eq!(t.element_of_dense(t.dense_of_packed(w)), expect);
    }

    #[test]
    fn budget_guard() {
        assert!(matches!(LogField::new(17, 6), Err(Error::BudgetExceeded(_))));
    }
}
