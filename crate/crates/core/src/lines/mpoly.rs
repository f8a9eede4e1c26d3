//! Sparse polynomials in a fixed number of variables.

use std::collections::BTreeMap;

use crate::rings::Ring;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly<E, const N: usize> {
    pub terms: BTreeMap<[u8; N], E>,
}

impl<E: Clone, const N: usize> MPoly<E, N> {
    pub fn zero() -> Self {
        MPoly { terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant<R: Ring<Elem = E>>(r: &R, c: E) -> Self {
        let mut p = Self::zero();
        p.add_term(r, [0; N], c);
        p
    }

    /// `sum_i c_i X_i`.
    pub fn linear<R: Ring<Elem = E>>(r: &R, c: &[E]) -> Self {
        let mut p = Self::zero();
        for (i, ci) in c.iter().enumerate() {
            let mut e = [0; N];
            e[i] = 1;
            p.add_term(r, e, ci.clone());
        }
        p
    }

    pub fn add_term<R: Ring<Elem = E>>(&mut self, r: &R, e: [u8; N], c: E) {
        if r.is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(old) => {
                let s = r.add(old, &c);
                if r.is_zero(&s) {
                    self.terms.remove(&e);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn coeff<R: Ring<Elem = E>>(&self, r: &R, e: &[u8; N]) -> E {
        self.terms.get(e).cloned().unwrap_or_else(|| r.zero())
    }

    pub fn add<R: Ring<Elem = E>>(&self, r: &R, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(r, *e, c.clone());
        }
        out
    }

    pub fn scale<R: Ring<Elem = E>>(&self, r: &R, c: &E) -> Self {
        let mut out = Self::zero();
        for (e, a) in &self.terms {
            out.add_term(r, *e, r.mul(a, c));
        }
        out
    }

    pub fn mul<R: Ring<Elem = E>>(&self, r: &R, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ea, a) in &self.terms {
            for (eb, b) in &other.terms {
                let mut e = [0; N];
                for i in 0..N {
                    e[i] = ea[i] + eb[i];
                }
                out.add_term(r, e, r.mul(a, b));
            }
        }
        out
    }

    pub fn eval<R: Ring<Elem = E>>(&self, r: &R, x: &[E; N]) -> E {
        let maxdeg = self.terms.keys().flat_map(|e| e.iter().copied()).max().unwrap_or(0) as usize;
        let powers: Vec<Vec<E>> = x
            .iter()
            .map(|xi| {
                let mut v = vec![r.one()];
                for _ in 0..maxdeg {
                    v.push(r.mul(v.last().unwrap(), xi));
                }
                v
            })
            .collect();
        let mut acc = r.zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for i in 0..N {
                if e[i] > 0 {
                    t = r.mul(&t, &powers[i][e[i] as usize]);
                }
            }
            acc = r.add(&acc, &t);
        }
        acc
    }

    /// Substitutes `X_i -> forms[i]`.
    pub fn substitute<R: Ring<Elem = E>, const M: usize>(&self, r: &R, forms: &[MPoly<E, M>; N]) -> MPoly<E, M> {
        // images of monomials, each one form times a smaller image
        let mut images: BTreeMap<[u8; N], MPoly<E, M>> = BTreeMap::new();
        images.insert([0; N], MPoly::constant(r, r.one()));
        let mut out = MPoly::zero();
        for (e, c) in &self.terms {
            let img = Self::image(r, forms, &mut images, *e);
            for (f, a) in &img.terms {
                out.add_term(r, *f, r.mul(a, c));
            }
        }
        out
    }

    fn image<R: Ring<Elem = E>, const M: usize>(
        r: &R,
        forms: &[MPoly<E, M>; N],
        images: &mut BTreeMap<[u8; N], MPoly<E, M>>,
        e: [u8; N],
    ) -> MPoly<E, M> {
        if let Some(m) = images.get(&e) {
            return m.clone();
        }
        let i = e.iter().position(|&x| x > 0).expect("the constant monomial is seeded");
        let mut prev = e;
        prev[i] -= 1;
        let m = Self::image(r, forms, images, prev).mul(r, &forms[i]);
        images.insert(e, m.clone());
        m
    }

    /// Partial derivative in `X_i`.
    pub fn derivative<R: Ring<Elem = E>>(&self, r: &R, i: usize) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = *e;
                f[i] -= 1;
                out.add_term(r, f, r.scale_i64(c, e[i] as i64));
            }
        }
        out
    }

    pub fn map<G: Ring>(&self, g: &G, f: impl Fn(&E) -> G::Elem) -> MPoly<G::Elem, N> {
        let mut out = MPoly::zero();
        for (e, c) in &self.terms {
            out.add_term(g, *e, f(c));
        }
        out
    }
}

/// Exponent vectors of total degree `d` in `N` variables, in lexicographic
/// order.
pub fn monomials<const N: usize>(d: u8) -> Vec<[u8; N]> {
    fn rec<const N: usize>(i: usize, left: u8, cur: &mut [u8; N], out: &mut Vec<[u8; N]>) {
        if i == N - 1 {
            cur[i] = left;
            out.push(*cur);
            return;
        }
        for a in (0..=left).rev() {
            cur[i] = a;
            rec(i + 1, left - a, cur, out);
        }
    }
    let mut out = Vec::new();
    let mut cur = [0u8; N];
    rec(0, d, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::PrimeField;

    #[test]
    fn substitution_and_eval() {
        let k = PrimeField::new(7).unwrap();
        assert_eq!(monomials::<5>(5).len(), 126);
        // f = X0^2 X1 with X0 -> a + b, X1 -> a - b
        let mut f = MPoly::<u64, 2>::zero();
        f.add_term(&k, [2, 1], 1);
        let a_plus_b = MPoly::<u64, 2>::linear(&k, &[1, 1]);
        let a_minus_b = MPoly::<u64, 2>::linear(&k, &[1, 6]);
        let g = f.substitute(&k, &[a_plus_b, a_minus_b]);
        for (x, y) in [(1u64, 2u64), (3, 5), (6, 0)] {
            let direct = f.eval(&k, &[(x + y) % 7, (x + 7 - y) % 7]);
            assert_eq!(g.eval(&k, &[x, y]), direct);
        }
    }
}
