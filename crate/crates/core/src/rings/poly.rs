//! Dense univariate polynomials, coefficients low to high, no trailing
//! zeros. The zero polynomial is the empty vector.

use num_bigint::BigUint;

use super::{Field, Ring};

pub type Poly<E> = Vec<E>;

pub fn trim<R: Ring>(r: &R, f: &mut Poly<R::Elem>) {
    while f.last().is_some_and(|c| r.is_zero(c)) {
        f.pop();
    }
}

pub fn trimmed<R: Ring>(r: &R, mut f: Poly<R::Elem>) -> Poly<R::Elem> {
    trim(r, &mut f);
    f
}

pub fn degree<E>(f: &[E]) -> Option<usize> {
    f.len().checked_sub(1)
}

pub fn constant<R: Ring>(r: &R, c: R::Elem) -> Poly<R::Elem> {
    trimmed(r, vec![c])
}

/// The monomial `x^n`.
pub fn monomial<R: Ring>(r: &R, n: usize) -> Poly<R::Elem> {
    let mut f = vec![r.zero(); n + 1];
    f[n] = r.one();
    f
}

pub fn add<R: Ring>(r: &R, f: &[R::Elem], g: &[R::Elem]) -> Poly<R::Elem> {
    let n = f.len().max(g.len());
    let z = r.zero();
    let out = (0..n)
        .map(|i| r.add(f.get(i).unwrap_or(&z), g.get(i).unwrap_or(&z)))
        .collect();
    trimmed(r, out)
}

pub fn sub<R: Ring>(r: &R, f: &[R::Elem], g: &[R::Elem]) -> Poly<R::Elem> {
    let n = f.len().max(g.len());
    let z = r.zero();
    let out = (0..n)
        .map(|i| r.sub(f.get(i).unwrap_or(&z), g.get(i).unwrap_or(&z)))
        .collect();
    trimmed(r, out)
}

pub fn neg<R: Ring>(r: &R, f: &[R::Elem]) -> Poly<R::Elem> {
    f.iter().map(|c| r.neg(c)).collect()
}

pub fn scale<R: Ring>(r: &R, f: &[R::Elem], c: &R::Elem) -> Poly<R::Elem> {
    trimmed(r, f.iter().map(|a| r.mul(a, c)).collect())
}

pub fn mul<R: Ring>(r: &R, f: &[R::Elem], g: &[R::Elem]) -> Poly<R::Elem> {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let n = f.len() + g.len() - 1;
    let mut out = Vec::with_capacity(n);
    let mut terms = Vec::with_capacity(f.len().min(g.len()));
    for k in 0..n {
        terms.clear();
        let lo = k.saturating_sub(g.len() - 1);
        let hi = k.min(f.len() - 1);
        for i in lo..=hi {
            terms.push((&f[i], &g[k - i]));
        }
        out.push(r.sum_of_products(&terms));
    }
    trimmed(r, out)
}

pub fn eval<R: Ring>(r: &R, f: &[R::Elem], x: &R::Elem) -> R::Elem {
    let mut acc = r.zero();
    for c in f.iter().rev() {
        acc = r.add(&r.mul(&acc, x), c);
    }
    acc
}

pub fn derivative<R: Ring>(r: &R, f: &[R::Elem]) -> Poly<R::Elem> {
    let out = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| r.scale_i64(c, i as i64))
        .collect();
    trimmed(r, out)
}

/// Quotient and remainder; `g` must be nonzero.
pub fn divrem<F: Field>(k: &F, f: &[F::Elem], g: &[F::Elem]) -> (Poly<F::Elem>, Poly<F::Elem>) {
    let dg = degree(g).expect("division by the zero polynomial");
    let lc_inv = k.inv(&g[dg]).expect("leading coefficient is nonzero");
    let mut rem: Vec<F::Elem> = f.to_vec();
    if rem.len() <= dg {
        return (Vec::new(), rem);
    }
    let mut quo = vec![k.zero(); rem.len() - dg];
    for i in (dg..rem.len()).rev() {
        if k.is_zero(&rem[i]) {
            continue;
        }
        let c = k.mul(&rem[i], &lc_inv);
        for j in 0..dg {
            let t = k.mul(&c, &g[j]);
            rem[i - dg + j] = k.sub(&rem[i - dg + j], &t);
        }
        rem[i] = k.zero();
        quo[i - dg] = c;
    }
    rem.truncate(dg);
    trim(k, &mut rem);
    (trimmed(k, quo), rem)
}

pub fn rem<F: Field>(k: &F, f: &[F::Elem], g: &[F::Elem]) -> Poly<F::Elem> {
    divrem(k, f, g).1
}

pub fn monic<F: Field>(k: &F, f: &[F::Elem]) -> Poly<F::Elem> {
    match f.last() {
        None => Vec::new(),
        Some(lc) => {
            let inv = k.inv(lc).expect("nonzero leading coefficient");
            f.iter().map(|c| k.mul(c, &inv)).collect()
        }
    }
}

/// Monic greatest common divisor (zero if both inputs vanish).
pub fn gcd<F: Field>(k: &F, f: &[F::Elem], g: &[F::Elem]) -> Poly<F::Elem> {
    let mut a = f.to_vec();
    let mut b = g.to_vec();
    trim(k, &mut a);
    trim(k, &mut b);
    while !b.is_empty() {
        let r = rem(k, &a, &b);
        a = b;
        b = r;
    }
    monic(k, &a)
}

/// Returns `(g, s, t)` with `s f + t h = g`, `g` monic.
pub fn ext_gcd<F: Field>(
    k: &F,
    f: &[F::Elem],
    h: &[F::Elem],
) -> (Poly<F::Elem>, Poly<F::Elem>, Poly<F::Elem>) {
    let (mut r0, mut r1) = (trimmed(k, f.to_vec()), trimmed(k, h.to_vec()));
    let (mut s0, mut s1) = (constant(k, k.one()), Vec::new());
    let (mut t0, mut t1) = (Vec::new(), constant(k, k.one()));
    while !r1.is_empty() {
        let (q, r) = divrem(k, &r0, &r1);
        let s2 = sub(k, &s0, &mul(k, &q, &s1));
        let t2 = sub(k, &t0, &mul(k, &q, &t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    if let Some(lc) = r0.last() {
        let inv = k.inv(lc).unwrap();
        (scale(k, &r0, &inv), scale(k, &s0, &inv), scale(k, &t0, &inv))
    } else {
        (r0, s0, t0)
    }
}

pub fn mulmod<F: Field>(k: &F, a: &[F::Elem], b: &[F::Elem], m: &[F::Elem]) -> Poly<F::Elem> {
    rem(k, &mul(k, a, b), m)
}

pub fn powmod<F: Field>(k: &F, base: &[F::Elem], e: &BigUint, m: &[F::Elem]) -> Poly<F::Elem> {
    let base = rem(k, base, m);
    let mut acc = rem(k, &constant(k, k.one()), m);
    for i in (0..e.bits()).rev() {
        acc = mulmod(k, &acc, &acc, m);
        if e.bit(i) {
            acc = mulmod(k, &acc, &base, m);
        }
    }
    acc
}

/// Exact quotient, `None` if `g` does not divide `f`.
pub fn div_exact<F: Field>(k: &F, f: &[F::Elem], g: &[F::Elem]) -> Option<Poly<F::Elem>> {
    let (q, r) = divrem(k, f, g);
    r.is_empty().then_some(q)
}

/// Polynomials over a ring, themselves a ring.
#[derive(Clone, Debug)]
pub struct PolyRing<R: Ring> {
    pub base: R,
}

impl<R: Ring> Ring for PolyRing<R> {
    type Elem = Poly<R::Elem>;

    fn zero(&self) -> Self::Elem {
        Vec::new()
    }
    fn one(&self) -> Self::Elem {
        constant(&self.base, self.base.one())
    }
    fn from_i64(&self, n: i64) -> Self::Elem {
        constant(&self.base, self.base.from_i64(n))
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        add(&self.base, a, b)
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        sub(&self.base, a, b)
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        neg(&self.base, a)
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        mul(&self.base, a, b)
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::PrimeField;

    #[test]
    fn division_identity() {
        let k = PrimeField::new(7).unwrap();
        let f = vec![3, 1, 4, 1, 5, 2];
        let g = vec![2, 6, 1];
        let (q, r) = divrem(&k, &f, &g);
        assert_eq!(add(&k, &mul(&k, &q, &g), &r), f);
        assert!(r.len() < g.len());
    }

    #[test]
    fn gcd_and_bezout() {
        let k = PrimeField::new(11).unwrap();
        // (x - 1)(x - 2) and (x - 2)(x - 3)
        let f = mul(&k, &[10, 1], &[9, 1]);
        let h = mul(&k, &[9, 1], &[8, 1]);
        assert_eq!(gcd(&k, &f, &h), vec![9, 1]);
        let (g, s, t) = ext_gcd(&k, &f, &h);
        assert_eq!(add(&k, &mul(&k, &s, &f), &mul(&k, &t, &h)), g);
    }

    #[test]
    fn derivative_and_eval() {
        let k = PrimeField::new(13).unwrap();
        let f = vec![1, 2, 3];
        assert_eq!(derivative(&k, &f), vec![2, 6]);
        assert_eq!(eval(&k, &f, &2), (1 + 4 + 12) % 13);
    }
}
