//! Cyclic layers `K[w]/(w^m - c)` over a finite field `K`, stored flat
//! over F_p so that products accumulate in machine words and reduce once.
//!
//! The flat index of `w^i a^j` (with `a` the generator of `K`) is
//! `i * d + j`, which matches the chunking of an `EtaleAlgebra` over `K`.

use crate::error::{Error, Result};
use crate::rings::poly;
use crate::rings::{EtaleAlgebra, FiniteField, GaloisField, Ring};

#[derive(Clone, Debug)]
pub struct Layer {
    k: GaloisField,
    p: u64,
    d: usize,
    m: usize,
    /// `w^m = c`.
    c: Vec<u64>,
    /// `p - modulus_i` for the lower coefficients of the modulus of `K`.
    tail: Vec<u64>,
    /// Products that fit in a u64 accumulator between reductions.
    flush: usize,
}

impl Layer {
    /// `K[w]/(w^m - c)`; etale because `c` is a unit and `p` does not
    /// divide `m`.
    pub fn new(k: &GaloisField, m: usize, c: Vec<u64>) -> Result<Layer> {
        let p = k.p();
        if k.is_zero(&c) {
            return Err(Error::NotAUnit("w^m = 0 is not etale".into()));
        }
        if m as u64 % p == 0 {
            return Err(Error::NotEtale { level: 1 });
        }
        let d = k.degree();
        let tail = k.modulus()[..d].iter().map(|&x| (p - x) % p).collect();
        let per = (m * d) as u64 * (p - 1) * (p - 1);
        let flush = (u64::MAX / per.max(1)).min(1 << 20) as usize;
        Ok(Layer { k: k.clone(), p, d, m, c, tail, flush })
    }

    pub fn field(&self) -> &GaloisField {
        &self.k
    }
    pub fn degree(&self) -> usize {
        self.m
    }
    /// `c` with `w^m = c`.
    pub fn constant(&self) -> &[u64] {
        &self.c
    }
    /// Dimension over F_p.
    pub fn flat_dim(&self) -> usize {
        self.m * self.d
    }

    /// Embeds an element of `K`.
    pub fn embed(&self, a: &[u64]) -> Vec<u64> {
        let mut v = vec![0; self.m * self.d];
        v[..self.d].copy_from_slice(a);
        v
    }

    pub fn w(&self) -> Vec<u64> {
        if self.m == 1 {
            return self.embed(&self.c);
        }
        let mut v = vec![0; self.m * self.d];
        v[self.d] = 1;
        v
    }

    /// Coefficients of `1, w, ..., w^{m-1}` as elements of `K`.
    pub fn components(&self, a: &[u64]) -> Vec<Vec<u64>> {
        a.chunks(self.d).map(|c| c.to_vec()).collect()
    }

    /// `s a` for `s` in `K`.
    pub fn scale_k(&self, a: &[u64], s: &[u64]) -> Vec<u64> {
        let mut out = Vec::with_capacity(a.len());
        for chunk in a.chunks(self.d) {
            if chunk.iter().all(|&x| x == 0) {
                out.extend(std::iter::repeat_n(0, self.d));
            } else {
                out.extend(self.k.mul(&chunk.to_vec(), &s.to_vec()));
            }
        }
        out
    }

    /// The same algebra as a one-level tower over `K`.
    pub fn to_etale(&self) -> Result<EtaleAlgebra<GaloisField>> {
        let mut modulus = vec![self.k.neg(&self.c)];
        for _ in 1..self.m {
            modulus.push(self.k.zero());
        }
        modulus.push(self.k.one());
        EtaleAlgebra::simple(self.k.clone(), "w", modulus)
    }

    pub fn invert(&self, a: &[u64]) -> Result<Vec<u64>> {
        let alg = self.to_etale()?;
        Ok(alg.invert(&self.components(a))?.concat())
    }

    /// Whether `a` is a nonzero square in every field factor, by Euler's
    /// criterion modulo each irreducible factor of `w^m - c`.
    pub fn is_square_everywhere<R: rand::Rng + ?Sized>(&self, a: &[u64], rng: &mut R) -> bool {
        let k = &self.k;
        let mut modulus = vec![k.neg(&self.c)];
        modulus.extend((1..self.m).map(|_| k.zero()));
        modulus.push(k.one());
        let q = k.order();
        let x = self.components(a);
        crate::rings::factor::factor(k, &modulus, rng).into_iter().all(|(g, _)| {
            let e = g.len() - 1;
            let r = poly::rem(k, &x, &g);
            if r.is_empty() {
                return false;
            }
            let exp = (num_traits::pow(q.clone(), e) - 1u32) >> 1;
            poly::powmod(k, &r, &exp, &g) == vec![k.one()]
        })
    }

    fn reduce(&self, raw: &mut [u64]) -> Vec<u64> {
        let (p, d, m) = (self.p, self.d, self.m);
        let wd = 2 * d - 1;
        for x in raw.iter_mut() {
            *x %= p;
        }
        // a-degree reduction inside every w-coefficient
        let mut coeffs: Vec<Vec<u64>> = Vec::with_capacity(2 * m - 1);
        for i in 0..2 * m - 1 {
            let row = &mut raw[i * wd..(i + 1) * wd];
            for k in (d..wd).rev() {
                let top = row[k];
                if top == 0 {
                    continue;
                }
                row[k] = 0;
                for (j, &t) in self.tail.iter().enumerate() {
                    if t != 0 {
                        row[k - d + j] = (row[k - d + j] + top * t) % p;
                    }
                }
            }
            coeffs.push(row[..d].to_vec());
        }
        for i in (m..2 * m - 1).rev() {
            if coeffs[i].iter().all(|&x| x == 0) {
                continue;
            }
            let t = self.k.mul(&coeffs[i], &self.c);
            coeffs[i - m] = self.k.add(&coeffs[i - m], &t);
        }
        coeffs.truncate(m);
        coeffs.concat()
    }
}

impl Ring for Layer {
    type Elem = Vec<u64>;

    fn zero(&self) -> Vec<u64> {
        vec![0; self.m * self.d]
    }
    fn one(&self) -> Vec<u64> {
        let mut v = self.zero();
        v[0] = 1;
        v
    }
    fn from_i64(&self, n: i64) -> Vec<u64> {
        let mut v = self.zero();
        v[0] = n.rem_euclid(self.p as i64) as u64;
        v
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }
    fn sub(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + self.p - y) % self.p).collect()
    }
    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        a.iter().map(|x| (self.p - x) % self.p).collect()
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        self.sum_of_products(&[(a, b)])
    }
    fn is_zero(&self, a: &Vec<u64>) -> bool {
        a.iter().all(|&x| x == 0)
    }
    fn scale_i64(&self, a: &Vec<u64>, n: i64) -> Vec<u64> {
        let c = n.rem_euclid(self.p as i64) as u64;
        a.iter().map(|x| x * c % self.p).collect()
    }

    fn sum_of_products(&self, terms: &[(&Vec<u64>, &Vec<u64>)]) -> Vec<u64> {
        let (d, m) = (self.d, self.m);
        let wd = 2 * d - 1;
        let mut raw = vec![0u64; (2 * m - 1) * wd];
        let mut nz_a: Vec<(usize, u64)> = Vec::with_capacity(m * d);
        for (count, (a, b)) in terms.iter().enumerate() {
            if count > 0 && count % self.flush == 0 {
                for x in raw.iter_mut() {
                    *x %= self.p;
                }
            }
            nz_a.clear();
            nz_a.extend(a.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, &x)| (i, x)));
            if nz_a.is_empty() {
                continue;
            }
            for (jb, &y) in b.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let (wb, ab) = (jb / d, jb % d);
                for &(ja, x) in &nz_a {
                    let (wa, aa) = (ja / d, ja % d);
                    raw[(wa + wb) * wd + aa + ab] += x * y;
                }
            }
        }
        self.reduce(&mut raw)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::PrimeField;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn agrees_with_the_generic_tower() {
        let k = GaloisField::new(7, vec![5, 0, 0, 1]).unwrap(); // a^3 + a + 3
        let c = vec![2, 5, 1];
        let layer = Layer::new(&k, 5, c.clone()).unwrap();
        let alg = layer.to_etale().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let x: Vec<u64> = (0..15).map(|_| PrimeField::new(7).unwrap().random(&mut rng)).collect();
            let y: Vec<u64> = (0..15).map(|_| PrimeField::new(7).unwrap().random(&mut rng)).collect();
            let direct = layer.mul(&x, &y);
            let generic = alg.mul(&layer.components(&x), &layer.components(&y)).concat();
            assert_eq!(direct, generic);
            let z = layer.sum_of_products(&[(&x, &y), (&y, &y)]);
            assert_eq!(z, layer.add(&direct, &layer.mul(&y, &y)));
        }
        let w = layer.w();
        assert_eq!(layer.pow(&w, 5), layer.embed(&c));
        let inv = layer.invert(&layer.add(&w, &layer.one())).unwrap();
        assert_eq!(layer.mul(&inv, &layer.add(&w, &layer.one())), layer.one());
    }

    #[test]
    fn squares_are_detected_per_factor() {
        let k = GaloisField::new(11, vec![0, 1]).unwrap();
        // w^2 - 3 splits over F_11 (5^2 = 3): w is a square in neither factor
        // or both, and w^2 = 3 is a square in both
        let layer = Layer::new(&k, 2, vec![3]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(layer.is_square_everywhere(&layer.embed(&[3]), &mut rng));
        assert!(layer.is_square_everywhere(&layer.mul(&layer.w(), &layer.w()), &mut rng));
        // 2 is a non-square mod 11
        assert!(!layer.is_square_everywhere(&layer.embed(&[2]), &mut rng));
    }
}
