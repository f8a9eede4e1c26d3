//! Lines of the Fermat quintic that survive a deformation `F + t^s G`,
//! grouped into Galois orbits over F_p, with the genericity certificates
//! each orbit needs.
//!
//! Multiplicity-5 lines lie on two cones `X_j = -z1 X_i`, `X_n = -z2 X_m`
//! (fifth roots of unity `z1, z2`); they are indexed by a split of four
//! coordinates into two pairs and the algebra `F_p[x, y]/(x^5 - 1, y^5 - 1)`.
//! Multiplicity-2 lines `(u : -z u : v : a v : b v)` lie on one cone and
//! are indexed by the points of `1 + a^5 + b^5 = 0` where the `u^3 v^2`
//! coefficient `Q(a, b)` of `G` vanishes.

use crate::error::{Error, Result};
use crate::lines::mpoly::MPoly;
use crate::lines::quintic::Quintic;
use crate::rings::factor;
use crate::rings::matrix::Matrix;
use crate::rings::poly::{self, PolyRing};
use crate::rings::{EtaleAlgebra, Field, FiniteField, GaloisField, PrimeField, Ring};

/// `W(i, j) ∩ W(m, n)`; the chart sends `X_r` to `Y_2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairChoice {
    pub first: [usize; 2],
    pub second: [usize; 2],
    pub rest: usize,
}

impl PairChoice {
    pub fn label(&self) -> String {
        format!("W{}{}∩W{}{}", self.first[0], self.first[1], self.second[0], self.second[1])
    }
}

/// The 15 ways to pick two disjoint pairs of coordinates.
pub fn pair_choices() -> Vec<PairChoice> {
    let mut out = Vec::with_capacity(15);
    for rest in 0..5 {
        let o: Vec<usize> = (0..5).filter(|&i| i != rest).collect();
        for (x, y, z) in [(1, 2, 3), (2, 1, 3), (3, 1, 2)] {
            out.push(PairChoice { first: [o[0], o[x]], second: [o[y], o[z]], rest });
        }
    }
    out
}

/// The 10 pairs `{i, j}`, with the remaining three coordinates in order.
pub fn pairs() -> Vec<([usize; 2], [usize; 3])> {
    let mut out = Vec::with_capacity(10);
    for i in 0..5 {
        for j in i + 1..5 {
            let o: Vec<usize> = (0..5).filter(|&k| k != i && k != j).collect();
            out.push(([i, j], [o[0], o[1], o[2]]));
        }
    }
    out
}

/// `x^5 - 1` with coefficients in a level of dimension `len`.
fn cyclotomic5(p: u64, len: usize) -> Vec<Vec<u64>> {
    (0..6)
        .map(|i| {
            let mut v = vec![0; len];
            v[0] = match i {
                0 => p - 1,
                5 => 1,
                _ => 0,
            };
            v
        })
        .collect()
}

/// A Galois orbit of multiplicity-5 lines: one field factor of the
/// algebra of root-of-unity pairs, for one split.
#[derive(Clone, Debug)]
pub struct Mult5Orbit {
    pub choice: PairChoice,
    pub field: GaloisField,
    pub zeta: [Vec<u64>; 2],
    /// `-g3(0)/10` and `-g4(0)/10`.
    pub a: Vec<u64>,
    pub b: Vec<u64>,
}

impl Mult5Orbit {
    pub fn label(&self) -> String {
        format!("{} deg {}", self.choice.label(), self.field.degree())
    }

    /// `X = B Y` with `X_i = Y_3`, `X_j = Y_0 - z1 Y_3`, `X_m = Y_4`,
    /// `X_n = Y_1 - z2 Y_4`, `X_r = Y_2`.
    pub fn chart(&self) -> Matrix<Vec<u64>> {
        let k = &self.field;
        let c = &self.choice;
        let mut b = vec![vec![k.zero(); 5]; 5];
        let [i, j] = c.first;
        let [m, n] = c.second;
        b[i][3] = k.one();
        b[j][0] = k.one();
        b[j][3] = k.neg(&self.zeta[0]);
        b[m][4] = k.one();
        b[n][1] = k.one();
        b[n][4] = k.neg(&self.zeta[1]);
        b[c.rest][2] = k.one();
        b
    }
}

/// The field factors of `F_p[x, y]/(x^5 - 1, y^5 - 1)`.
pub fn root_pairs(fp: &PrimeField, seed: u64) -> Result<Vec<(GaloisField, [Vec<u64>; 2])>> {
    let p = fp.p();
    let alg = EtaleAlgebra::new(fp.clone(), vec![("x".into(), cyclotomic5(p, 1)), ("y".into(), cyclotomic5(p, 5))])?;
    Ok(alg
        .field_factors(seed)
        .factors
        .into_iter()
        .map(|f| (f.field, [f.images[0].clone(), f.images[1].clone()]))
        .collect())
}

/// Weights of the functional `G -> coefficient of u^{5-s} v^s` of `G` on
/// the line `(u, -z1 u, v, -z2 v, 0)` of a split, one per monomial of `G`
/// that contributes.
pub fn mult5_functional(k: &GaloisField, c: &PairChoice, zeta: &[Vec<u64>; 2], s: usize) -> Vec<([u8; 5], Vec<u64>)> {
    let [i, j] = c.first;
    let [m, n] = c.second;
    let mut out = Vec::new();
    let nz: [Vec<u64>; 2] = [k.neg(&zeta[0]), k.neg(&zeta[1])];
    for bj in 0..=(5 - s) {
        for dn in 0..=s {
            let mut e = [0u8; 5];
            e[i] = (5 - s - bj) as u8;
            e[j] = bj as u8;
            e[m] = (s - dn) as u8;
            e[n] = dn as u8;
            let w = k.mul(&k.pow(&nz[0], bj as u64), &k.pow(&nz[1], dn as u64));
            out.push((e, w));
        }
    }
    out
}

fn apply_functional(k: &GaloisField, g: &Quintic<PrimeField>, f: &[([u8; 5], Vec<u64>)]) -> Vec<u64> {
    let mut acc = k.zero();
    for (e, w) in f {
        if let Some(&c) = g.poly.terms.get(e) {
            acc = k.add(&acc, &k.mul(w, &k.from_prime(c)));
        }
    }
    acc
}

/// Every multiplicity-5 orbit, or the first failed certificate.
pub fn mult5_orbits(fp: &PrimeField, g: &Quintic<PrimeField>, roots: &[(GaloisField, [Vec<u64>; 2])]) -> Result<Vec<Mult5Orbit>> {
    let mut out = Vec::new();
    for choice in pair_choices() {
        for (k, zeta) in roots {
            let tenth = k.neg(&k.inv(&k.from_prime(10 % fp.p())).expect("p is not 2 or 5"));
            let g3 = apply_functional(k, g, &mult5_functional(k, &choice, zeta, 2));
            let g4 = apply_functional(k, g, &mult5_functional(k, &choice, zeta, 3));
            let (a, b) = (k.mul(&g3, &tenth), k.mul(&g4, &tenth));
            for (name, v) in [("a", &a), ("b", &b)] {
                if k.is_zero(v) {
                    return Err(Error::NonGenericDeformation(format!(
                        "{name} = 0 on {} over a factor of degree {}",
                        choice.label(),
                        k.degree()
                    )));
                }
            }
            out.push(Mult5Orbit { choice, field: k.clone(), zeta: zeta.clone(), a, b });
        }
    }
    Ok(out)
}

/// A Galois orbit of multiplicity-2 lines on the cones over one pair.
#[derive(Clone, Debug)]
pub struct Mult2Orbit {
    pub pair: [usize; 2],
    pub others: [usize; 3],
    /// Minimal polynomial over F_p of the root of unity of the cone.
    pub zeta_poly: Vec<u64>,
    pub field: GaloisField,
    pub zeta: Vec<u64>,
    pub a: Vec<u64>,
    pub b: Vec<u64>,
    /// `-g4(0)/10`.
    pub d: Vec<u64>,
    /// `b^4 A - a^4 B` with `A, B` the `Y_1`, `Y_2` partials of `g3` at 0.
    pub cert: Vec<u64>,
}

impl Mult2Orbit {
    pub fn label(&self) -> String {
        format!("W{}{}[{}] deg {}", self.pair[0], self.pair[1], poly_label(&self.zeta_poly), self.field.degree())
    }

    /// `X = B Y` with `X_i = Y_3`, `X_j = Y_0 - z Y_3`, `X_m = Y_4`,
    /// `X_n = Y_1 + a Y_4`, `X_r = Y_2 + b Y_4`.
    pub fn chart(&self) -> Matrix<Vec<u64>> {
        let k = &self.field;
        let [i, j] = self.pair;
        let [m, n, r] = self.others;
        let mut bm = vec![vec![k.zero(); 5]; 5];
        bm[i][3] = k.one();
        bm[j][0] = k.one();
        bm[j][3] = k.neg(&self.zeta);
        bm[m][4] = k.one();
        bm[n][1] = k.one();
        bm[n][4] = self.a.clone();
        bm[r][2] = k.one();
        bm[r][4] = self.b.clone();
        bm
    }
}

/// A polynomial over F_p such as `z^2+3z+1`.
pub fn poly_label(f: &[u64]) -> String {
    let mut parts = Vec::new();
    for (i, &c) in f.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "z".into(),
            _ => format!("z^{i}"),
        };
        parts.push(match (c, i) {
            (_, 0) => c.to_string(),
            (1, _) => mono,
            _ => format!("{c}{mono}"),
        });
    }
    parts.join("+")
}

/// `Q`, `D`, `A`, `B` of a pair as polynomials over F_p in `(z, a, b)`.
struct PairPolys {
    q: MPoly<u64, 3>,
    d: MPoly<u64, 3>,
    pa: MPoly<u64, 3>,
    pb: MPoly<u64, 3>,
}

fn pair_polys(fp: &PrimeField, g: &Quintic<PrimeField>, pair: [usize; 2], others: [usize; 3]) -> PairPolys {
    let [i, j] = pair;
    let [_, n, r] = others;
    let mut out = PairPolys { q: MPoly::zero(), d: MPoly::zero(), pa: MPoly::zero(), pb: MPoly::zero() };
    for (e, &c) in &g.poly.terms {
        let s = e[i] + e[j];
        let sign = if e[j] % 2 == 1 { fp.neg(&c) } else { c };
        let z = e[j] % 5;
        match s {
            3 => {
                out.q.add_term(fp, [z, e[n], e[r]], sign);
                if e[n] > 0 {
                    out.pa.add_term(fp, [z, e[n] - 1, e[r]], fp.scale_i64(&sign, e[n] as i64));
                }
                if e[r] > 0 {
                    out.pb.add_term(fp, [z, e[n], e[r] - 1], fp.scale_i64(&sign, e[r] as i64));
                }
            }
            2 => out.d.add_term(fp, [z, e[n], e[r]], sign),
            _ => {}
        }
    }
    out
}

/// `f(z, a, b)` as a polynomial in `b` over `k`.
fn in_b(k: &GaloisField, f: &MPoly<u64, 3>, z: &[u64], a: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![k.zero(); 6];
    for (e, &c) in &f.terms {
        let t = k.mul(&k.from_prime(c), &k.mul(&k.pow(&z.to_vec(), e[0] as u64), &k.pow(&a.to_vec(), e[1] as u64)));
        out[e[2] as usize] = k.add(&out[e[2] as usize], &t);
    }
    poly::trimmed(k, out)
}

fn eval3(k: &GaloisField, f: &MPoly<u64, 3>, z: &[u64], a: &[u64], b: &[u64]) -> Vec<u64> {
    poly::eval(k, &in_b(k, f, z, a), &b.to_vec())
}

/// Every multiplicity-2 orbit on the cones over one pair, or the first
/// failed certificate.
pub fn mult2_orbits_for_pair(
    fp: &PrimeField,
    g: &Quintic<PrimeField>,
    pair: [usize; 2],
    others: [usize; 3],
    seed: u64,
) -> Result<Vec<Mult2Orbit>> {
    let p = fp.p();
    let polys = pair_polys(fp, g, pair, others);
    let nongeneric = |what: &str, phi: &[u64]| {
        Error::NonGenericDeformation(format!("{what} on W{}{}[{}]", pair[0], pair[1], poly_label(phi)))
    };
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
    let z5 = vec![p - 1, 0, 0, 0, 0, 1];
    let mut out = Vec::new();
    for (phi, _) in factor::factor(fp, &z5, &mut rng) {
        let kz = GaloisField::new(p, phi.clone())?;
        let z0 = kz.generator();
        // Q as a polynomial in b over K[a]
        let mut qb: Vec<Vec<Vec<u64>>> = vec![Vec::new(); 3];
        for (e, &c) in &polys.q.terms {
            let coeff = kz.mul(&kz.from_prime(c), &kz.pow(&z0, e[0] as u64));
            let mono = {
                let mut m = vec![kz.zero(); e[1] as usize + 1];
                m[e[1] as usize] = coeff;
                m
            };
            qb[e[2] as usize] = poly::add(&kz, &qb[e[2] as usize], &mono);
        }
        let mut curve: Vec<Vec<Vec<u64>>> = vec![Vec::new(); 6];
        curve[0] = poly::trimmed(&kz, vec![kz.one(), kz.zero(), kz.zero(), kz.zero(), kz.zero(), kz.one()]);
        curve[5] = vec![kz.one()];
        let ring = PolyRing { base: kz.clone() };
        let res = crate::binforms::resultant(
            &ring,
            &crate::binforms::BinaryForm::new(curve),
            &crate::binforms::BinaryForm::new(qb),
        );
        let res = poly::trimmed(&kz, res);
        if res.len() != 11 {
            return Err(nongeneric("Q meets the Fermat curve at infinity", &phi));
        }
        let res = poly::monic(&kz, &res);
        let tower = vec![
            ("z".to_string(), phi.iter().map(|&c| vec![c]).collect()),
            ("a".to_string(), res.clone()),
        ];
        let alg = match EtaleAlgebra::new(fp.clone(), tower) {
            Ok(alg) => alg,
            Err(Error::NotEtale { .. }) => return Err(nongeneric("Q is tangent to the Fermat curve", &phi)),
            Err(e) => return Err(e),
        };
        let ten = fp.inv(&(10 % p)).expect("p is not 2 or 5");
        for fac in alg.field_factors(seed).factors {
            let k = fac.field.clone();
            let (z, a) = (fac.images[0].clone(), fac.images[1].clone());
            let mut curve_b = vec![k.zero(); 6];
            curve_b[0] = k.add(&k.one(), &k.pow(&a, 5));
            curve_b[5] = k.one();
            let h = poly::monic(&k, &poly::gcd(&k, &curve_b, &in_b(&k, &polys.q, &z, &a)));
            if h.len() != 2 {
                return Err(nongeneric("two lines share a", &phi));
            }
            let b = k.neg(&h[0]);
            let d = k.mul(&k.neg(&eval3(&k, &polys.d, &z, &a, &b)), &k.from_prime(ten));
            let big_a = eval3(&k, &polys.pa, &z, &a, &b);
            let big_b = eval3(&k, &polys.pb, &z, &a, &b);
            let cert = k.sub(&k.mul(&k.pow(&b, 4), &big_a), &k.mul(&k.pow(&a, 4), &big_b));
            for (name, v) in [("a = 0", &a), ("b = 0", &b), ("d = 0", &d), ("b^4 A - a^4 B = 0", &cert)] {
                if k.is_zero(v) {
                    return Err(nongeneric(name, &phi));
                }
            }
            out.push(Mult2Orbit {
                pair,
                others,
                zeta_poly: phi.clone(),
                field: k,
                zeta: z,
                a,
                b,
                d,
                cert,
            });
        }
    }
    Ok(out)
}

/// Every multiplicity-2 orbit.
pub fn mult2_orbits(fp: &PrimeField, g: &Quintic<PrimeField>, seed: u64) -> Result<Vec<Mult2Orbit>> {
    let mut out = Vec::new();
    for (pair, others) in pairs() {
        let orbits = mult2_orbits_for_pair(fp, g, pair, others, seed)?;
        let lines: usize = orbits.iter().map(|o| o.field.degree()).sum();
        if lines != 50 {
            return Err(Error::NonGenericDeformation(format!("W{}{} carries {lines} lines, expected 50", pair[0], pair[1])));
        }
        out.extend(orbits);
    }
    Ok(out)
}
