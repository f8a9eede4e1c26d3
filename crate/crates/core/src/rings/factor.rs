//! Polynomial factorization over finite fields: squarefree decomposition,
//! distinct-degree and equal-degree splitting, root finding.

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;

use super::poly::{self, Poly};
use super::FiniteField;

fn x_poly<F: FiniteField>(k: &F) -> Poly<F::Elem> {
    poly::monomial(k, 1)
}

/// `h^q mod f`.
fn frob_mod<F: FiniteField>(k: &F, h: &[F::Elem], f: &[F::Elem]) -> Poly<F::Elem> {
    poly::powmod(k, h, &k.order(), f)
}

/// Ben-Or irreducibility test: no factor of degree up to n/2.
pub fn is_irreducible<F: FiniteField>(k: &F, f: &[F::Elem]) -> bool {
    let n = match poly::degree(f) {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(n) => n,
    };
    let f = poly::monic(k, f);
    let x = x_poly(k);
    let mut h = poly::rem(k, &x, &f);
    for _ in 1..=n / 2 {
        h = frob_mod(k, &h, &f);
        let g = poly::gcd(k, &poly::sub(k, &h, &x), &f);
        if poly::degree(&g) != Some(0) {
            return false;
        }
    }
    true
}

/// `c(x) = sum c_{ip} x^{ip}` to `sum c_{ip}^{1/p} x^i`.
fn pth_root<F: FiniteField>(k: &F, c: &[F::Elem]) -> Poly<F::Elem> {
    let p = k.p() as usize;
    let e = k.order() / BigUint::from(k.p());
    c.iter()
        .step_by(p)
        .map(|a| k.pow_big(a, &e))
        .collect()
}

/// Squarefree decomposition of a nonzero polynomial: monic factors with
/// multiplicities, product equal to the monic input.
pub fn squarefree_decomposition<F: FiniteField>(k: &F, f: &[F::Elem]) -> Vec<(Poly<F::Elem>, usize)> {
    let f = poly::monic(k, f);
    let mut out = Vec::new();
    if poly::degree(&f).unwrap_or(0) == 0 {
        return out;
    }
    let one = poly::constant(k, k.one());
    let df = poly::derivative(k, &f);
    let mut c = poly::gcd(k, &f, &df);
    let mut w = poly::div_exact(k, &f, &c).unwrap();
    let mut i = 1;
    while w != one {
        let y = poly::gcd(k, &w, &c);
        let fac = poly::div_exact(k, &w, &y).unwrap();
        if poly::degree(&fac).unwrap_or(0) > 0 {
            out.push((fac, i));
        }
        w = y;
        c = poly::div_exact(k, &c, &w).unwrap();
        i += 1;
    }
    if c != one {
        let root = pth_root(k, &c);
        for (g, m) in squarefree_decomposition(k, &root) {
            out.push((g, m * k.p() as usize));
        }
    }
    out
}

pub fn is_squarefree<F: FiniteField>(k: &F, f: &[F::Elem]) -> bool {
    let df = poly::derivative(k, f);
    poly::degree(&poly::gcd(k, f, &df)) == Some(0)
}

/// Distinct-degree factorization of a monic squarefree polynomial.
pub fn distinct_degree<F: FiniteField>(k: &F, f: &[F::Elem]) -> Vec<(Poly<F::Elem>, usize)> {
    let mut f = poly::monic(k, f);
    let x = x_poly(k);
    let mut h = poly::rem(k, &x, &f);
    let mut out = Vec::new();
    let mut i = 1;
    while poly::degree(&f).unwrap_or(0) >= 2 * i {
        h = frob_mod(k, &h, &f);
        let g = poly::gcd(k, &poly::sub(k, &h, &x), &f);
        if poly::degree(&g).unwrap_or(0) > 0 {
            f = poly::div_exact(k, &f, &g).unwrap();
            h = poly::rem(k, &h, &f);
            out.push((g, i));
        }
        i += 1;
    }
    if let Some(d) = poly::degree(&f) {
        if d > 0 {
            out.push((f, d));
        }
    }
    out
}

/// Splits a monic squarefree product of irreducibles of degree `d`.
pub fn equal_degree<F: FiniteField, R: Rng + ?Sized>(
    k: &F,
    f: &[F::Elem],
    d: usize,
    rng: &mut R,
) -> Vec<Poly<F::Elem>> {
    let n = poly::degree(f).unwrap();
    if n == d {
        return vec![poly::monic(k, f)];
    }
    let e = (num_traits::pow(k.order(), d) - BigUint::one()) >> 1;
    let one = poly::constant(k, k.one());
    loop {
        let a: Poly<F::Elem> = poly::trimmed(k, (0..n).map(|_| k.random(rng)).collect());
        if poly::degree(&a).unwrap_or(0) == 0 {
            continue;
        }
        let b = poly::sub(k, &poly::powmod(k, &a, &e, f), &one);
        let g = poly::gcd(k, &b, f);
        let dg = poly::degree(&g).unwrap_or(0);
        if dg > 0 && dg < n {
            let h = poly::div_exact(k, f, &g).unwrap();
            let mut out = equal_degree(k, &g, d, rng);
            out.extend(equal_degree(k, &h, d, rng));
            return out;
        }
    }
}

/// Monic irreducible factors with multiplicities, sorted by degree then
/// coefficients.
pub fn factor<F: FiniteField, R: Rng + ?Sized>(
    k: &F,
    f: &[F::Elem],
    rng: &mut R,
) -> Vec<(Poly<F::Elem>, usize)> {
    let mut out = Vec::new();
    for (g, m) in squarefree_decomposition(k, f) {
        for (h, d) in distinct_degree(k, &g) {
            for irr in equal_degree(k, &h, d, rng) {
                out.push((irr, m));
            }
        }
    }
    out.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
    out
}

/// Distinct roots in the field, sorted.
pub fn roots<F: FiniteField, R: Rng + ?Sized>(k: &F, f: &[F::Elem], rng: &mut R) -> Vec<F::Elem> {
    if poly::degree(f).unwrap_or(0) == 0 {
        return Vec::new();
    }
    let f = poly::monic(k, f);
    let x = x_poly(k);
    let h = frob_mod(k, &poly::rem(k, &x, &f), &f);
    let g = poly::gcd(k, &poly::sub(k, &h, &x), &f);
    if poly::degree(&g).unwrap_or(0) == 0 {
        return Vec::new();
    }
    let mut out: Vec<F::Elem> = equal_degree(k, &g, 1, rng)
        .into_iter()
        .map(|l| k.neg(&l[0]))
        .collect();
    out.sort();
    out
}

/// First irreducible `x^n + a x^j + b` in a fixed search order, falling
/// back to seeded random search.
pub fn find_irreducible<F: FiniteField, R: Rng + ?Sized>(k: &F, n: usize, rng: &mut R) -> Poly<F::Elem> {
    assert!(n >= 1);
    if n == 1 {
        return poly::monomial(k, 1);
    }
    let small = k.order() <= BigUint::from(64u32);
    if small {
        let q = k.order().to_u64_digits().first().copied().unwrap_or(0);
        for j in 1..n {
            for ai in 1..q {
                for bi in 1..q {
                    let mut f = poly::monomial(k, n);
                    f[j] = k.from_index(ai);
                    f[0] = k.from_index(bi);
                    if is_irreducible(k, &f) {
                        return f;
                    }
                }
            }
        }
    }
    loop {
        let mut f: Poly<F::Elem> = (0..n).map(|_| k.random(rng)).collect();
        f.push(k.one());
        if is_irreducible(k, &f) {
            return f;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::{GaloisField, PrimeField, Ring};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn product<F: FiniteField>(k: &F, fs: &[(Poly<F::Elem>, usize)]) -> Poly<F::Elem> {
        let mut acc = poly::constant(k, k.one());
        for (f, m) in fs {
            for _ in 0..*m {
                acc = poly::mul(k, &acc, f);
            }
        }
        acc
    }

    #[test]
    fn x5_minus_1_splitting_pattern() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut degs = |p: u64| {
            let k = PrimeField::new(p).unwrap();
            let f = vec![p - 1, 0, 0, 0, 0, 1];
            let mut d: Vec<usize> = factor(&k, &f, &mut rng).iter().map(|(g, _)| g.len() - 1).collect();
            d.sort();
            d
        };
        assert_eq!(degs(11), vec![1, 1, 1, 1, 1]);
        assert_eq!(degs(7), vec![1, 4]);
        assert_eq!(degs(19), vec![1, 2, 2]);
    }

    #[test]
    fn factor_reassembles_with_repeated_factors() {
        let k = PrimeField::new(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        // (x^2 + 1)^3 (x + 2)^4 (x^3 + 2x + 1)
        let a = vec![1, 0, 1];
        let b = vec![2, 1];
        let c = vec![1, 2, 0, 1];
        let f = product(&k, &[(a.clone(), 3), (b.clone(), 4), (c.clone(), 1)]);
        let fs = factor(&k, &f, &mut rng);
        assert_eq!(product(&k, &fs), f);
        assert!(fs.iter().all(|(g, _)| is_irreducible(&k, g)));
        assert_eq!(fs.len(), 3);
    }

    #[test]
    fn roots_in_extension() {
        let k = GaloisField::new(7, vec![5, 0, 0, 1]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        // x^3 - 2 has the generator as a root, and its conjugates
        let f: Vec<Vec<u64>> = vec![k.from_prime(5), k.zero(), k.zero(), k.one()];
        let r = roots(&k, &f, &mut rng);
        assert_eq!(r.len(), 3);
        assert!(r.contains(&k.generator()));
        for x in &r {
            assert!(k.is_zero(&poly::eval(&k, &f, x)));
        }
    }

    #[test]
    fn irreducible_search() {
        let k = PrimeField::new(13).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for n in 1..9 {
            let f = find_irreducible(&k, n, &mut rng);
            assert_eq!(f.len(), n + 1);
            assert!(is_irreducible(&k, &f));
        }
    }
}
