//! Sampling deformation directions `G` that pass every certificate.
//!
//! A uniformly random `G` fails one of the 750 multiplicity-5 conditions
//! with high probability when p is small (at p = 11 all 375 crossing lines
//! are rational). The sampler starts from product-shaped coefficients
//! `c_e = prod_k phi_k(e_k)` on monomials with exponents at most 3. On
//! such a `G` the `u^3 v^2` coefficient over the split `{i, j}, {m, n}`
//! factors as `F_ij(-z1) F_mn(-z2) phi_r(0)` with
//! `F_ij(x) = sum_a phi_i(d - a) phi_j(a) x^a`, so the multiplicity-5
//! conditions reduce to `gcd(F_ij, x^5 + 1) = 1` for every ordered pair.
//! Local moves then repair the multiplicity-2 certificates while every
//! multiplicity-5 condition keeps holding.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::orbits::{self, mult2_orbits_for_pair, mult5_functional, pair_choices, pairs};
use super::DeformationSpec;
use crate::error::{Error, Result};
use crate::lines::mpoly::monomials;
use crate::lines::quintic::Quintic;
use crate::rings::poly;
use crate::rings::{FiniteField, GaloisField, PrimeField, Ring};

const MAX_ROW_TRIES: usize = 20_000;
const MAX_RESTARTS: usize = 50;
const MAX_REPAIR: usize = 5_000;
const MAX_WALK: usize = 100_000;
const WALK_NOISE: f64 = 0.1;

/// `phi[k][e]` for exponents `e <= 3`.
type Weights = [[u64; 4]; 5];

/// `sum_{a <= d} phi_i(d - a) phi_j(a) x^a`.
fn pair_poly(fp: &PrimeField, wi: &[u64; 4], wj: &[u64; 4], d: usize) -> Vec<u64> {
    (0..=d).map(|a| fp.mul(&wi[d - a], &wj[a])).collect()
}

/// No root of `F_ij` or `F_ji` is minus a fifth root of unity.
fn rows_compatible(fp: &PrimeField, wi: &[u64; 4], wj: &[u64; 4]) -> bool {
    let x5_plus_1 = vec![1, 0, 0, 0, 0, 1];
    [(wi, wj), (wj, wi)].iter().all(|(a, b)| {
        [2, 3].iter().all(|&d| {
            let f = poly::trimmed(fp, pair_poly(fp, a, b, d));
            !f.is_empty() && poly::gcd(fp, &f, &x5_plus_1).len() == 1
        })
    })
}

fn random_weights<R: Rng>(fp: &PrimeField, rng: &mut R) -> Option<Weights> {
    let p = fp.p();
    let mut w = [[0u64; 4]; 5];
    for k in 0..5 {
        let mut found = false;
        for _ in 0..MAX_ROW_TRIES {
            let row = [rng.gen_range(1..p), rng.gen_range(0..p), rng.gen_range(0..p), rng.gen_range(0..p)];
            if (0..k).all(|j| rows_compatible(fp, &w[j], &row)) {
                w[k] = row;
                found = true;
                break;
            }
        }
        if !found {
            return None;
        }
    }
    Some(w)
}

/// The 750 multiplicity-5 conditions as linear functionals.
struct LinearConditions {
    fields: Vec<GaloisField>,
    /// `(field, [(monomial index, weight)])`.
    conds: Vec<(usize, Vec<(usize, Vec<u64>)>)>,
}

impl LinearConditions {
    fn new(fp: &PrimeField, monos: &[[u8; 5]], seed: u64) -> Result<Self> {
        let roots = orbits::root_pairs(fp, seed)?;
        let fields: Vec<GaloisField> = roots.iter().map(|(k, _)| k.clone()).collect();
        let mut conds = Vec::new();
        for choice in pair_choices() {
            for (fi, (k, zeta)) in roots.iter().enumerate() {
                for s in [2, 3] {
                    let terms = mult5_functional(k, &choice, zeta, s)
                        .into_iter()
                        .map(|(e, w)| (monos.iter().position(|x| *x == e).expect("degree 5 exponent"), w))
                        .collect();
                    conds.push((fi, terms));
                }
            }
        }
        Ok(LinearConditions { fields, conds })
    }

    fn involved(&self, m: usize) -> bool {
        self.conds.iter().any(|(_, t)| t.iter().any(|(x, _)| *x == m))
    }

    fn value(&self, c: usize, coeffs: &[u64]) -> Vec<u64> {
        let (fi, terms) = &self.conds[c];
        let k = &self.fields[*fi];
        let mut v = k.zero();
        for (m, w) in terms {
            v = k.add(&v, &k.mul(w, &k.from_prime(coeffs[*m])));
        }
        v
    }

    fn all_hold(&self, coeffs: &[u64]) -> bool {
        (0..self.conds.len()).all(|c| !self.fields[self.conds[c].0].is_zero(&self.value(c, coeffs)))
    }

    /// Min-conflicts walk from `coeffs`: repeatedly pick a failing
    /// condition and one of its monomials, and give that monomial the
    /// value leaving the fewest failures among the conditions it enters.
    fn walk<R: Rng>(&self, p: u64, coeffs: &mut [u64], rng: &mut R) -> bool {
        let mut by_mono: Vec<Vec<(usize, &Vec<u64>)>> = vec![Vec::new(); coeffs.len()];
        for (c, (_, terms)) in self.conds.iter().enumerate() {
            for (m, w) in terms {
                by_mono[*m].push((c, w));
            }
        }
        let mut values: Vec<Vec<u64>> = (0..self.conds.len()).map(|c| self.value(c, coeffs)).collect();
        let is_zero = |c: usize, v: &Vec<u64>| self.fields[self.conds[c].0].is_zero(v);
        let shifted = |values: &[Vec<u64>], m: usize, delta: u64| -> Vec<(usize, Vec<u64>)> {
            by_mono[m]
                .iter()
                .map(|&(c, w)| {
                    let k = &self.fields[self.conds[c].0];
                    (c, k.add(&values[c], &k.mul(w, &k.from_prime(delta))))
                })
                .collect()
        };
        for _ in 0..MAX_WALK {
            let failing: Vec<usize> = (0..values.len()).filter(|&c| is_zero(c, &values[c])).collect();
            let Some(&c) = failing.choose(rng) else { return true };
            let m = self.conds[c].1.choose(rng).unwrap().0;
            let mut best: Vec<u64> = Vec::new();
            let mut best_zeros = usize::MAX;
            for delta in 0..p {
                let z = shifted(&values, m, delta).iter().filter(|(c, v)| is_zero(*c, v)).count();
                if z < best_zeros {
                    best_zeros = z;
                    best.clear();
                }
                if z == best_zeros {
                    best.push(delta);
                }
            }
            let delta = if rng.gen_bool(WALK_NOISE) { rng.gen_range(0..p) } else { *best.choose(rng).unwrap() };
            for (c, v) in shifted(&values, m, delta) {
                values[c] = v;
            }
            coeffs[m] = (coeffs[m] + delta) % p;
        }
        false
    }
}

fn coefficients(fp: &PrimeField, monos: &[[u8; 5]], w: Option<&Weights>, extra: &[u64]) -> Vec<u64> {
    let Some(w) = w else { return extra.to_vec() };
    monos
        .iter()
        .zip(extra)
        .map(|(e, x)| {
            let base = if e.iter().all(|&a| a <= 3) {
                (0..5).fold(1, |acc, k| fp.mul(&acc, &w[k][e[k] as usize]))
            } else {
                0
            };
            fp.add(&base, x)
        })
        .collect()
}

fn pair_ok(fp: &PrimeField, g: &Quintic<PrimeField>, pair: [usize; 2], others: [usize; 3], seed: u64) -> Result<bool> {
    match mult2_orbits_for_pair(fp, g, pair, others, seed) {
        Ok(orbits) => Ok(orbits.iter().map(|o| o.field.degree()).sum::<usize>() == 50),
        Err(Error::NonGenericDeformation(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// A deformation direction over F_p satisfying every certificate checked
/// by `prepare_orbits`, reproducible from `seed`.
pub fn generic_deformation(p: u64, seed: u64) -> Result<DeformationSpec> {
    if p == 2 || p == 5 {
        return Err(Error::BadCharacteristic(p));
    }
    let fp = PrimeField::new(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let monos = monomials::<5>(5);
    let lin = LinearConditions::new(&fp, &monos, seed)?;
    let free: Vec<bool> = (0..monos.len()).map(|m| !lin.involved(m)).collect();
    let build = |coeffs: &[u64]| Quintic::new(&fp, monos.iter().copied().zip(coeffs.iter().copied()).collect());
    let all_pairs = pairs();
    let touches = |m: usize, pair: [usize; 2]| matches!(monos[m][pair[0]] + monos[m][pair[1]], 2 | 3);
    let failures = |v: &[bool]| v.iter().filter(|&&b| !b).count();

    for _ in 0..MAX_RESTARTS {
        // product weights when they exist (not over F_3), else a walk
        // from random coefficients
        let (mut weights, mut extra) = match random_weights(&fp, &mut rng) {
            Some(w) => (Some(w), free.iter().map(|&f| if f { rng.gen_range(0..p) } else { 0 }).collect()),
            None => {
                let mut c: Vec<u64> = (0..monos.len()).map(|_| rng.gen_range(0..p)).collect();
                if !lin.walk(p, &mut c, &mut rng) {
                    continue;
                }
                (None, c)
            }
        };
        let coeffs = coefficients(&fp, &monos, weights.as_ref(), &extra);
        if !lin.all_hold(&coeffs) {
            return Err(Error::NonGenericDeformation("product weights violate a linear condition".into()));
        }
        let mut g = build(&coeffs)?;
        let mut ok: Vec<bool> = all_pairs.iter().map(|&(pr, o)| pair_ok(&fp, &g, pr, o, seed)).collect::<Result<_>>()?;
        for _ in 0..MAX_REPAIR {
            if failures(&ok) == 0 {
                return DeformationSpec::new(g, seed);
            }
            // either reweight one coordinate or nudge one monomial
            let (mut w2, mut x2) = (weights, extra.clone());
            let touched: Vec<usize> = if let Some(w2) = w2.as_mut().filter(|_| rng.gen_bool(0.5)) {
                let k = rng.gen_range(0..5);
                let e = rng.gen_range(0..4);
                w2[k][e] = rng.gen_range(if e == 0 { 1 } else { 0 }..p);
                if !(0..5).filter(|&j| j != k).all(|j| rows_compatible(&fp, &w2[j], &w2[k])) {
                    continue;
                }
                (0..all_pairs.len()).collect()
            } else {
                let bad: Vec<usize> = (0..ok.len()).filter(|&i| !ok[i]).collect();
                let target = all_pairs[*bad.choose(&mut rng).unwrap()].0;
                let candidates: Vec<usize> = (0..monos.len()).filter(|&m| touches(m, target)).collect();
                let m = *candidates.choose(&mut rng).unwrap();
                x2[m] = fp.add(&x2[m], &rng.gen_range(1..p));
                (0..all_pairs.len()).filter(|&i| touches(m, all_pairs[i].0)).collect()
            };
            let c2 = coefficients(&fp, &monos, w2.as_ref(), &x2);
            if !lin.all_hold(&c2) {
                continue;
            }
            let trial = build(&c2)?;
            let mut new_ok = ok.clone();
            for i in touched {
                let (pr, o) = all_pairs[i];
                new_ok[i] = pair_ok(&fp, &trial, pr, o, seed)?;
            }
            if failures(&new_ok) <= failures(&ok) {
                weights = w2;
                extra = x2;
                ok = new_ok;
                g = trial;
            }
        }
    }
    Err(Error::NonGenericDeformation(format!("no deformation over F_{p} passed every certificate")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fermat::prepare_orbits;

    #[test]
    fn product_weights_factor_the_linear_conditions() {
        let fp = PrimeField::new(11).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let monos = monomials::<5>(5);
        let lin = LinearConditions::new(&fp, &monos, 3).unwrap();
        let w = random_weights(&fp, &mut rng).unwrap();
        assert!(lin.all_hold(&coefficients(&fp, &monos, Some(&w), &vec![0; monos.len()])));
        // zeroing phi_k(0) kills every block with k as the rest coordinate
        let mut bad = w;
        bad[4][0] = 0;
        assert!(!lin.all_hold(&coefficients(&fp, &monos, Some(&bad), &vec![0; monos.len()])));
    }

    #[test]
    fn sampled_deformations_pass_the_certificates() {
        for p in [3, 7] {
            let spec = generic_deformation(p, 1).unwrap();
            let prepared = prepare_orbits(&spec).unwrap();
            let lines: usize = prepared.mult5.iter().map(|o| o.field.degree()).sum();
            assert_eq!(lines, 375);
            let lines: usize = prepared.mult2.iter().map(|o| o.field.degree()).sum();
            assert_eq!(lines, 500);
        }
    }
}
