//! Prime fields F_p with p < 2^31.

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;

use super::{check_characteristic, is_prime_u64, Field, FieldHandle, FiniteField, GwField, Ring};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
    nonsquare: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<PrimeField> {
        check_characteristic(p)?;
        if !is_prime_u64(p) || p >= 1 << 31 {
            return Err(Error::Unsupported(format!("{p} is not a prime below 2^31")));
        }
        let mut f = PrimeField { p, nonsquare: 0 };
        f.nonsquare = f.first_nonsquare();
        Ok(f)
    }

    #[inline]
    pub fn reduce_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    pub fn nonsquare(&self) -> u64 {
        self.nonsquare
    }
}

impl Ring for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, n: i64) -> u64 {
        self.reduce_i64(n)
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn sum_of_products(&self, terms: &[(&u64, &u64)]) -> u64 {
        let mut acc: u128 = 0;
        for (a, b) in terms {
            acc += (**a * **b) as u128;
        }
        (acc % self.p as u128) as u64
    }
}

impl Field for PrimeField {
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        let (mut r0, mut r1) = (self.p as i64, *a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Some(self.reduce_i64(t0))
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
}

impl FiniteField for PrimeField {
    fn p(&self) -> u64 {
        self.p
    }
    fn degree(&self) -> usize {
        1
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }
    fn coords(&self, a: &u64) -> Vec<u64> {
        vec![*a]
    }
    fn from_coords(&self, c: &[u64]) -> u64 {
        c.first().copied().unwrap_or(0) % self.p
    }
    fn order(&self) -> BigUint {
        BigUint::from(self.p)
    }
    fn is_square_ff(&self, a: &u64) -> bool {
        self.pow(a, (self.p - 1) / 2) == 1
    }
}

/// Tonelli-Shanks square root in any odd-order finite field; `z` must be a
/// non-square.
pub fn tonelli_shanks<F: FiniteField>(f: &F, a: &F::Elem, z: &F::Elem) -> Option<F::Elem> {
    if f.is_zero(a) {
        return Some(f.zero());
    }
    if !f.is_square_ff(a) {
        return None;
    }
    let qm1 = f.order() - BigUint::one();
    let s = qm1.trailing_zeros().unwrap_or(0);
    let t = &qm1 >> s;
    let mut m = s;
    let mut c = f.pow_big(z, &t);
    let mut x = f.pow_big(a, &((&t + BigUint::one()) >> 1));
    let mut b = f.pow_big(a, &t);
    while !f.is_one(&b) {
        let mut i = 0;
        let mut b2 = b.clone();
        while !f.is_one(&b2) {
            b2 = f.mul(&b2, &b2);
            i += 1;
        }
        let mut g = c.clone();
        for _ in 0..(m - i - 1) {
            g = f.mul(&g, &g);
        }
        x = f.mul(&x, &g);
        c = f.mul(&g, &g);
        b = f.mul(&b, &c);
        m = i;
    }
    Some(x)
}

impl GwField for PrimeField {
    fn handle(&self) -> FieldHandle {
        FieldHandle::PrimeField(self.p)
    }
    fn sqrt(&self, a: &u64) -> Result<Option<u64>> {
        if *a == 0 {
            return Err(Error::ZeroInput);
        }
        Ok(tonelli_shanks(self, a, &self.nonsquare))
    }
    fn class_rep(&self, a: &u64) -> Result<u64> {
        if *a == 0 {
            return Err(Error::ZeroInput);
        }
        Ok(if self.is_square_ff(a) { 1 } else { self.nonsquare })
    }
    fn is_square(&self, a: &u64) -> Result<bool> {
        if *a == 0 {
            return Err(Error::ZeroInput);
        }
        Ok(self.is_square_ff(a))
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
    fn parse(&self, s: &str) -> Result<u64> {
        s.trim().parse::<i64>().map(|n| self.reduce_i64(n)).map_err(|_| Error::Parse {
            location: format!("F{} element '{s}'", self.p),
            message: "expected an integer".into(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squares_mod_seven() {
        let f = PrimeField::new(7).unwrap();
        // exhaustive table of squares
        let squares: Vec<u64> = (1..7).map(|x| x * x % 7).collect();
        for a in 1..7u64 {
            let is_sq = squares.contains(&a);
            let r = f.sqrt(&a).unwrap();
            assert_eq!(r.is_some(), is_sq);
            if let Some(r) = r {
                assert_eq!(r * r % 7, a);
            }
        }
        let r = f.sqrt(&2).unwrap().unwrap();
        assert!(r == 3 || r == 4);
        assert_eq!(f.sqrt(&3).unwrap(), None);
        assert_eq!(f.nonsquare(), 3);
    }

    #[test]
    fn inverse() {
        let f = PrimeField::new(101).unwrap();
        for a in 1..101u64 {
            assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), 1);
        }
        assert_eq!(PrimeField::new(7).unwrap().inv(&2), Some(4));
    }

    #[test]
    fn sqrt_with_high_two_adicity() {
        // 97 - 1 = 2^5 * 3
        let f = PrimeField::new(97).unwrap();
        for a in 1..97u64 {
            if let Some(r) = f.sqrt(&a).unwrap() {
                assert_eq!(r * r % 97, a);
            }
        }
    }

    #[test]
    fn rejects_bad_characteristic() {
        assert!(PrimeField::new(5).is_err());
        assert!(PrimeField::new(2).is_err());
        assert!(PrimeField::new(9).is_err());
    }
}
