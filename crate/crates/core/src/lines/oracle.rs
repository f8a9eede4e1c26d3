//! Double points of the Gauss map `C = (P_1 : P_2 : P_3)` by exhaustive
//! search over `P^1(F_{p^4})` and `P^1(F_{p^6})`, their Segre degrees, and
//! the Type of a line.
//!
//! Collisions are found by evaluating `C` at every point with log tables
//! and sorting normalized image keys. Multiplicities come from the double
//! point scheme: in the coordinates `(s, p)` of the pair quadratic
//! `x^2 - s x + p`, write `P_i(x) = alpha_i + beta_i x` modulo the
//! quadratic; the scheme is cut out by the 2x2 minors of
//! `(alpha_i, beta_i)` and contains the cusps on its diagonal
//! `s^2 = 4p`. The multiplicity of a point is the length of its local ring.

use std::collections::HashSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::mpoly::MPoly;
use super::normal::format_relation;
use crate::binforms::{self, BinaryForm};
use crate::error::{Error, Result};
use crate::gw::GwForm;
use crate::rings::factor::{factor, roots};
use crate::rings::matrix::{self, Matrix};
use crate::rings::zech::LogField;
use crate::rings::{Field, FiniteField, GaloisField, PrimeField, Ring};

type Elem = Vec<u64>;

/// One Frobenius orbit of double points, described at a representative.
#[derive(Clone, Debug)]
pub struct DoublePointOrbit {
    /// Field in which the representative was found, `F_{p^4}` or `F_{p^6}`.
    pub ambient: GaloisField,
    /// `[L_M : k]`, the size of the orbit.
    pub residue_degree: usize,
    /// Normalized image point `M`.
    pub image: [Elem; 3],
    /// Pair divisor `u^2 - s uv + p v^2` in the reparametrized coordinates.
    pub pair: BinaryForm<Elem>,
    pub multiplicity: usize,
    /// Degree `alpha_M` of the Segre involution, in `L_M`.
    pub alpha: Elem,
    /// `N_{L_M/k}(alpha_M)`.
    pub norm: u64,
    /// Whether the two preimages coincide.
    pub cusp: bool,
    /// `P_1, P_2, P_3` in the reparametrized coordinates, over `ambient`.
    pub forms: [BinaryForm<Elem>; 3],
}

#[derive(Clone, Debug)]
pub enum DoublePoints {
    Orbits(Vec<DoublePointOrbit>),
    /// `C` factors through the double cover `(Q_1 : Q_2)`.
    Cover { q1: BinaryForm<u64>, q2: BinaryForm<u64> },
}

/// Log tables for `F_{p^4}` and `F_{p^6}`; building them dominates setup,
/// so one oracle serves many lines over the same prime.
#[derive(Clone, Debug)]
pub struct Oracle {
    fp: PrimeField,
    small: LogField,
    large: LogField,
}

enum Collisions {
    Fibers(Vec<Vec<u32>>),
    Cover,
}

/// At most three double points, so at most six colliding points.
const MAX_COLLIDING: usize = 6;
const MAX_LENGTH_ORDER: usize = 12;

impl Oracle {
    pub fn new(p: u64) -> Result<Oracle> {
        let fp = PrimeField::new(p)?;
        crate::rings::check_characteristic(p)?;
        if p < 7 {
            return Err(Error::Unsupported(format!(
                "the double point search needs p >= 7 to move the pairs off infinity, got {p}"
            )));
        }
        Ok(Oracle { fp, small: LogField::new(p, 4)?, large: LogField::new(p, 6)? })
    }

    pub fn prime_field(&self) -> &PrimeField {
        &self.fp
    }

    pub fn double_points(&self, p: &[BinaryForm<u64>; 3]) -> Result<DoublePoints> {
        let k = &self.fp;
        if let Some(rel) = binforms::kernel_relation(k, p) {
            return Err(Error::NotSimple { relation: format_relation(&rel) });
        }
        let small = match collisions(&self.small, p)? {
            Collisions::Cover => return self.cover(p).map(|(q1, q2)| DoublePoints::Cover { q1, q2 }),
            Collisions::Fibers(f) => f,
        };
        let large = match collisions(&self.large, p)? {
            Collisions::Cover => return self.cover(p).map(|(q1, q2)| DoublePoints::Cover { q1, q2 }),
            Collisions::Fibers(f) => f,
        };
        for fiber in small.iter().chain(&large) {
            if fiber.len() != 2 {
                return Err(Error::InconsistentMultiplicity(fiber.len()));
            }
        }
        let cusps = cusp_form(k, p)?;

        // move a rational point that is neither on a pair nor a cusp to infinity
        let kf = self.small.field();
        let mut bad: Vec<Option<u64>> = Vec::new();
        for fiber in &small {
            for &i in fiber {
                let (u, v) = point(&self.small, i);
                if kf.is_zero(&v) {
                    bad.push(None);
                } else {
                    let x = kf.mul(&u, &kf.inv(&v).unwrap());
                    if x[1..].iter().all(|&c| c == 0) {
                        bad.push(Some(x[0]));
                    }
                }
            }
        }
        let r = std::iter::once(None)
            .chain((0..k.p()).map(Some))
            .find(|r| {
                let (u, v) = match r {
                    None => (1, 0),
                    Some(r0) => (*r0, 1),
                };
                !bad.contains(r) && !k.is_zero(&binforms::eval(k, &cusps, &u, &v))
            })
            .ok_or_else(|| Error::Unsupported("no rational point off the double points".into()))?;
        // (u, v) = g (u', v') with g(1:0) = r
        let (a, b, c, d) = match r {
            None => (1, 0, 0, 1),
            Some(r0) => (r0, 1, 1, 0),
        };
        let pm: [BinaryForm<u64>; 3] = std::array::from_fn(|i| compose(k, &p[i], [a, b, c, d]));
        let minors = z_minors(k, &pm);
        let cusps = cusp_form(k, &pm)?;

        let mut orbits = Vec::new();
        let mut total = 0;
        for (table, fibers, degrees) in [(&self.small, &small, [1usize, 2]), (&self.large, &large, [3, 3])] {
            let kf = table.field();
            let mut seen: HashSet<(Elem, Elem)> = HashSet::new();
            for fiber in fibers {
                let xs: Vec<Elem> = fiber
                    .iter()
                    .map(|&i| {
                        let (u, v) = point(table, i);
                        let u2 = kf.sub(&kf.scale_i64(&u, d as i64), &kf.scale_i64(&v, b as i64));
                        let v2 = kf.sub(&kf.scale_i64(&v, a as i64), &kf.scale_i64(&u, c as i64));
                        kf.mul(&u2, &kf.inv(&v2).expect("pairs avoid infinity"))
                    })
                    .collect();
                let s = kf.add(&xs[0], &xs[1]);
                let pp = kf.mul(&xs[0], &xs[1]);
                if seen.contains(&(s.clone(), pp.clone())) {
                    continue;
                }
                let orbit = frobenius_orbit(kf, &s, &pp);
                let e = orbit.len();
                seen.extend(orbit);
                if e > 3 {
                    return Err(Error::InconsistentMultiplicity(e));
                }
                if !degrees.contains(&e) {
                    continue;
                }
                let o = self.orbit(kf, &pm, &minors, &xs[0], s, pp, e, false)?;
                total += e * o.multiplicity;
                orbits.push(o);
            }
        }
        let kx = binforms::dehomogenize(k, &cusps);
        if kx.len() > 1 {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            for (f, _) in factor(k, &kx, &mut rng) {
                let e = f.len() - 1;
                let table = match e {
                    1 | 2 => &self.small,
                    3 => &self.large,
                    _ => return Err(Error::InconsistentMultiplicity(e)),
                };
                let kf = table.field();
                let fe: Vec<Elem> = f.iter().map(|&c| kf.from_prime(c)).collect();
                let x0 = roots(kf, &fe, &mut rng).into_iter().next().expect("irreducible factor splits");
                let s = kf.add(&x0, &x0);
                let pp = kf.mul(&x0, &x0);
                let o = self.orbit(kf, &pm, &minors, &x0, s, pp, e, true)?;
                total += e * o.multiplicity;
                orbits.push(o);
            }
        }
        if total != 3 {
            return Err(Error::InconsistentMultiplicity(total));
        }
        Ok(DoublePoints::Orbits(orbits))
    }

    #[allow(clippy::too_many_arguments)]
    fn orbit(
        &self,
        kf: &GaloisField,
        pm: &[BinaryForm<u64>; 3],
        minors: &[MPoly<u64, 2>],
        x: &Elem,
        s: Elem,
        pp: Elem,
        e: usize,
        cusp: bool,
    ) -> Result<DoublePointOrbit> {
        let multiplicity = local_length(kf, minors, &s, &pp)?;
        if multiplicity == 0 {
            return Err(Error::InconsistentMultiplicity(0));
        }
        let pe: [BinaryForm<Elem>; 3] = std::array::from_fn(|i| embed_form(kf, &pm[i]));
        let one = kf.one();
        let mut image: [Elem; 3] = std::array::from_fn(|i| binforms::eval(kf, &pe[i], x, &one));
        let j = (0..3).find(|&j| !kf.is_zero(&image[j])).ok_or(Error::BasePointFound)?;
        let inv = kf.inv(&image[j]).unwrap();
        for m in image.iter_mut() {
            *m = kf.mul(m, &inv);
        }
        let psi = standard_psi(kf, &image);
        let (q, alpha) = segre_degree(kf, &pe, &psi)?;
        let expected = BinaryForm::new(vec![one.clone(), kf.neg(&s), pp.clone()]);
        if q != expected {
            return Err(Error::BasePointFound);
        }
        let p = self.fp.p();
        let exponent = (p.pow(e as u32) - 1) / (p - 1);
        let n = kf.pow(&alpha, exponent);
        if n[1..].iter().any(|&c| c != 0) {
            return Err(Error::Unsupported("norm left the prime field".into()));
        }
        Ok(DoublePointOrbit {
            ambient: kf.clone(),
            residue_degree: e,
            image,
            pair: expected,
            multiplicity,
            alpha,
            norm: n[0],
            cusp,
            forms: pe,
        })
    }

    /// Two fibers over rational points give the pencil; every `P_i` must
    /// lie in `span{Q_1^2, Q_1 Q_2, Q_2^2}`.
    fn cover(&self, p: &[BinaryForm<u64>; 3]) -> Result<(BinaryForm<u64>, BinaryForm<u64>)> {
        let k = &self.fp;
        let mut pts: Vec<(Vec<u64>, (u64, u64))> = Vec::new();
        for r in std::iter::once((1, 0)).chain((0..k.p()).map(|x| (x, 1))) {
            let mut img: Vec<u64> = p.iter().map(|f| binforms::eval(k, f, &r.0, &r.1)).collect();
            let j = img.iter().position(|&c| c != 0).ok_or(Error::BasePointFound)?;
            let inv = k.inv(&img[j]).unwrap();
            for c in img.iter_mut() {
                *c = k.mul(c, &inv);
            }
            pts.push((img, r));
        }
        pts.sort();
        let mut pairs = Vec::new();
        for w in pts.chunk_by(|a, b| a.0 == b.0) {
            if w.len() == 2 {
                let lin = |(u, v): (u64, u64)| BinaryForm::new(vec![v, k.neg(&u)]);
                pairs.push(binforms::mul(k, &lin(w[0].1), &lin(w[1].1)));
            }
        }
        if pairs.len() < 2 {
            return Err(Error::DegenerateCover);
        }
        let (q1, q2) = (pairs[0].clone(), pairs[1].clone());
        if k.is_zero(&binforms::resultant(k, &q1, &q2)) {
            return Err(Error::DegenerateCover);
        }
        let basis = [binforms::mul(k, &q1, &q1), binforms::mul(k, &q1, &q2), binforms::mul(k, &q2, &q2)];
        for f in p {
            let m: Matrix<u64> = (0..5)
                .map(|row| basis.iter().map(|b| b.coeffs[row]).chain(std::iter::once(f.coeffs[row])).collect())
                .collect();
            if matrix::rank(k, &m) != 3 {
                return Err(Error::DegenerateCover);
            }
        }
        Ok((q1, q2))
    }

    /// `<prod N(alpha_M)^{mult}>`, or `<Res(Q_1, Q_2)>` for a cover.
    pub fn type_of_line(&self, p: &[BinaryForm<u64>; 3]) -> Result<GwForm<PrimeField>> {
        let k = &self.fp;
        let t = match self.double_points(p)? {
            DoublePoints::Orbits(orbits) => orbits
                .iter()
                .fold(1u64, |acc, o| k.mul(&acc, &k.pow(&o.norm, o.multiplicity as u64))),
            DoublePoints::Cover { q1, q2 } => binforms::resultant(k, &q1, &q2),
        };
        GwForm::rank_one(k, &t)
    }
}

/// `psi` with rows `e_j` and `e_k - M_k e_j`, sending `M` to `(1 : 0 : 0)`.
pub fn standard_psi(k: &GaloisField, image: &[Elem; 3]) -> Matrix<Elem> {
    let j = (0..3).find(|&j| !k.is_zero(&image[j])).expect("image point is nonzero");
    let inv = k.inv(&image[j]).unwrap();
    let mut rows = vec![(0..3).map(|c| if c == j { k.one() } else { k.zero() }).collect::<Vec<_>>()];
    for kk in (0..3).filter(|&c| c != j) {
        let mut row = vec![k.zero(); 3];
        row[kk] = k.one();
        row[j] = k.neg(&k.mul(&image[kk], &inv));
        rows.push(row);
    }
    rows
}

/// With `P'' = psi P`: the pair divisor `Q = gcd(P''_2, P''_3)` and
/// `alpha = Res(P''_2 / Q, P''_3 / Q)`.
pub fn segre_degree<F: Field>(
    k: &F,
    p: &[BinaryForm<F::Elem>; 3],
    psi: &Matrix<F::Elem>,
) -> Result<(BinaryForm<F::Elem>, F::Elem)> {
    let comb = |row: &[F::Elem]| {
        let mut acc = binforms::zero(k, 4);
        for (c, f) in row.iter().zip(p) {
            acc = binforms::add(k, &acc, &binforms::scale(k, f, c));
        }
        acc
    };
    let p2 = comb(&psi[1]);
    let p3 = comb(&psi[2]);
    let (q, a2, a3) = binforms::gcd_and_divide(k, &p2, &p3).map_err(|_| Error::BasePointFound)?;
    if q.degree() != 2 {
        return Err(Error::BasePointFound);
    }
    let alpha = binforms::resultant(k, &a2, &a3);
    if k.is_zero(&alpha) {
        return Err(Error::BasePointFound);
    }
    Ok((q, alpha))
}

/// Homogeneous coordinates of search point `i`: `g^i`, then `0`, then
/// infinity.
fn point(t: &LogField, i: u32) -> (Elem, Elem) {
    let k = t.field();
    let n = t.units();
    if i < n {
        (t.element_of_log(i), k.one())
    } else if i == n {
        (k.zero(), k.one())
    } else {
        (k.one(), k.zero())
    }
}

/// Normalized projective key of an image point from the logs of its
/// coordinates (`u32::MAX` for zero).
fn image_key(logs: [u32; 3], n: u32) -> Option<u64> {
    let lead = logs.iter().position(|&l| l != u32::MAX)?;
    let rel = |l: u32| if l == u32::MAX { n as u64 } else { ((l + n - logs[lead]) % n) as u64 };
    let (a, b) = match lead {
        0 => (rel(logs[1]), rel(logs[2])),
        1 => (rel(logs[2]), 0),
        _ => (0, 0),
    };
    Some(((lead as u64) << 60) | (a << 30) | b)
}

fn collisions(t: &LogField, p: &[BinaryForm<u64>; 3]) -> Result<Collisions> {
    let n = t.units();
    let c: [[u64; 5]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| p[i].coeffs[j]));
    let mut keys: Vec<u64> = Vec::with_capacity(n as usize + 2);
    // e[d] = (i * d) mod n, the log of x^d at x = g^i
    let mut e = [0u32; 5];
    for _ in 0..n {
        let mut logs = [u32::MAX; 3];
        for (i, ci) in c.iter().enumerate() {
            let mut w = 0u64;
            for (j, &cij) in ci.iter().enumerate() {
                if cij != 0 {
                    w += cij * t.exp_packed(e[4 - j]);
                }
            }
            logs[i] = t.log_of_dense(t.dense_of_packed(w)).unwrap_or(u32::MAX);
        }
        keys.push(image_key(logs, n).ok_or(Error::BasePointFound)?);
        for (d, ed) in e.iter_mut().enumerate().skip(1) {
            *ed += d as u32;
            if *ed >= n {
                *ed -= n;
            }
        }
    }
    for j in [4usize, 0] {
        // x = 0 reads the v^4 coefficients, infinity the u^4 ones
        let logs: [u32; 3] = std::array::from_fn(|i| t.log_of_dense(c[i][j] as u32).unwrap_or(u32::MAX));
        keys.push(image_key(logs, n).ok_or(Error::BasePointFound)?);
    }
    let mut sorted = keys.clone();
    sorted.sort_unstable();
    let mut dups = Vec::new();
    let mut colliding = 0;
    for run in sorted.chunk_by(|a, b| a == b) {
        if run.len() > 1 {
            colliding += run.len();
            if colliding > MAX_COLLIDING {
                return Ok(Collisions::Cover);
            }
            dups.push(run[0]);
        }
    }
    let mut fibers = vec![Vec::new(); dups.len()];
    for (i, key) in keys.iter().enumerate() {
        if let Ok(pos) = dups.binary_search(key) {
            fibers[pos].push(i as u32);
        }
    }
    Ok(Collisions::Fibers(fibers))
}

/// `gcd` of the 2x2 minors of the gradient matrix `(dP_i/du, dP_i/dv)`;
/// its roots are the cusps of `C`.
fn cusp_form(k: &PrimeField, p: &[BinaryForm<u64>; 3]) -> Result<BinaryForm<u64>> {
    let grads: Vec<_> = p.iter().map(|f| binforms::partials(k, f)).collect();
    let minor = |i: usize, j: usize| {
        binforms::sub(k, &binforms::mul(k, &grads[i].0, &grads[j].1), &binforms::mul(k, &grads[i].1, &grads[j].0))
    };
    let mut g = binforms::zero(k, 6);
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let m = minor(i, j);
        if binforms::is_zero(k, &g) {
            g = binforms::normalize(k, &m);
        } else if !binforms::is_zero(k, &m) {
            g = binforms::gcd_and_divide(k, &g, &m)?.0;
        }
    }
    if binforms::is_zero(k, &g) {
        return Err(Error::DegenerateCover);
    }
    Ok(g)
}

/// `f(a u + b v, c u + d v)`.
fn compose(k: &PrimeField, f: &BinaryForm<u64>, [a, b, c, d]: [u64; 4]) -> BinaryForm<u64> {
    let l1 = BinaryForm::new(vec![a, b]);
    let l2 = BinaryForm::new(vec![c, d]);
    let deg = f.degree();
    let mut acc = binforms::zero(k, deg);
    for (j, cj) in f.coeffs.iter().enumerate() {
        let mut t = BinaryForm::new(vec![*cj]);
        for _ in 0..deg - j {
            t = binforms::mul(k, &t, &l1);
        }
        for _ in 0..j {
            t = binforms::mul(k, &t, &l2);
        }
        acc = binforms::add(k, &acc, &t);
    }
    acc
}

fn embed_form(kf: &GaloisField, f: &BinaryForm<u64>) -> BinaryForm<Elem> {
    BinaryForm::new(f.coeffs.iter().map(|&c| kf.from_prime(c)).collect())
}

/// The minors `alpha_i beta_j - alpha_j beta_i` in `F_p[s, p]`.
fn z_minors(k: &PrimeField, pm: &[BinaryForm<u64>; 3]) -> Vec<MPoly<u64, 2>> {
    let s = MPoly::linear(k, &[1, 0]);
    let pv = MPoly::linear(k, &[0, 1]);
    // x^m = a_m + b_m x modulo x^2 - s x + p
    let mut a = vec![MPoly::constant(k, 1)];
    let mut b = vec![MPoly::zero()];
    for m in 0..4 {
        let an = pv.mul(k, &b[m]).scale(k, &k.neg(&1));
        let bn = a[m].add(k, &s.mul(k, &b[m]));
        a.push(an);
        b.push(bn);
    }
    let ab: Vec<(MPoly<u64, 2>, MPoly<u64, 2>)> = pm
        .iter()
        .map(|f| {
            let mut al = MPoly::zero();
            let mut be = MPoly::zero();
            for (j, c) in f.coeffs.iter().enumerate() {
                al = al.add(k, &a[4 - j].scale(k, c));
                be = be.add(k, &b[4 - j].scale(k, c));
            }
            (al, be)
        })
        .collect();
    [(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(i, j)| {
            let x = ab[i].0.mul(k, &ab[j].1);
            let y = ab[j].0.mul(k, &ab[i].1);
            x.add(k, &y.scale(k, &k.neg(&1)))
        })
        .collect()
}

/// Length of `K[s, p] / (minors)` localized at `(s0, p0)`: the stable
/// value of `dim K[σ, π] / (I + m^N)`.
fn local_length(kf: &GaloisField, minors: &[MPoly<u64, 2>], s0: &Elem, p0: &Elem) -> Result<usize> {
    let shift = |f: &MPoly<u64, 2>| {
        let fe: MPoly<Elem, 2> = f.map(kf, |&c| kf.from_prime(c));
        let mut sigma = MPoly::linear(kf, &[kf.one(), kf.zero()]);
        sigma.add_term(kf, [0, 0], s0.clone());
        let mut pi = MPoly::linear(kf, &[kf.zero(), kf.one()]);
        pi.add_term(kf, [0, 0], p0.clone());
        fe.substitute(kf, &[sigma, pi])
    };
    let gens: Vec<MPoly<Elem, 2>> = minors.iter().map(shift).collect();
    let mut prev = None;
    for order in 1..=MAX_LENGTH_ORDER {
        let d = quotient_dim(kf, &gens, order);
        if prev == Some(d) {
            return Ok(d);
        }
        prev = Some(d);
    }
    Err(Error::InconsistentMultiplicity(prev.unwrap_or(0)))
}

fn quotient_dim(kf: &GaloisField, gens: &[MPoly<Elem, 2>], order: usize) -> usize {
    let monos: Vec<(usize, usize)> = (0..order).flat_map(|t| (0..=t).map(move |i| (i, t - i))).collect();
    let index = |i: usize, j: usize| {
        let t = i + j;
        t * (t + 1) / 2 + j
    };
    let mut rows: Matrix<Elem> = Vec::new();
    for g in gens {
        for &(a, b) in &monos {
            let mut row = vec![kf.zero(); monos.len()];
            let mut any = false;
            for (e, c) in &g.terms {
                let (i, j) = (e[0] as usize + a, e[1] as usize + b);
                if i + j < order {
                    row[index(i, j)] = c.clone();
                    any = true;
                }
            }
            if any {
                rows.push(row);
            }
        }
    }
    if rows.is_empty() {
        return monos.len();
    }
    monos.len() - matrix::rank(kf, &rows)
}

fn frobenius_orbit(kf: &GaloisField, s: &Elem, p: &Elem) -> Vec<(Elem, Elem)> {
    let mut out = vec![(s.clone(), p.clone())];
    loop {
        let (a, b) = out.last().unwrap();
        let next = (kf.frobenius(a), kf.frobenius(b));
        if next == out[0] {
            return out;
        }
        out.push(next);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lines::planted::random_form;
    use crate::rings::poly;
    use rand::Rng;

    fn has_repeated_root(k: &PrimeField, f: &BinaryForm<u64>) -> bool {
        let x = binforms::dehomogenize(k, f);
        let dx = poly::derivative(k, &x);
        poly::degree(&poly::gcd(k, &x, &dx)).unwrap_or(0) > 0
    }

    fn oracle(p: u64) -> Oracle {
        Oracle::new(p).unwrap()
    }

    fn det_class(k: &PrimeField, p: &[BinaryForm<u64>; 3]) -> GwForm<PrimeField> {
        GwForm::rank_one(k, &matrix::det(k, &binforms::matrix_a(k, p))).unwrap()
    }

    #[test]
    fn random_lines_have_three_double_points() {
        let o = oracle(7);
        let k = o.prime_field().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..15 {
            let kk = k.clone();
            let p = crate::lines::planted::random_simple_triple(&k, &mut rng, &move |r: &mut ChaCha8Rng| kk.random(r));
            match o.double_points(&p).unwrap() {
                DoublePoints::Orbits(orbits) => {
                    let total: usize = orbits.iter().map(|o| o.residue_degree * o.multiplicity).sum();
                    assert_eq!(total, 3);
                }
                DoublePoints::Cover { .. } => panic!("random quartics do not factor through a cover"),
            }
            assert!(o.type_of_line(&p).unwrap().equals(&det_class(&k, &p)).unwrap());
        }
    }

    #[test]
    fn example_forms_are_a_cover() {
        let o = oracle(7);
        let k = o.prime_field().clone();
        let p = [
            BinaryForm::new(vec![1, 0, 1, 0, 0]),
            BinaryForm::new(vec![0, 0, 1, 0, 0]),
            BinaryForm::new(vec![0, 0, 1, 0, 1]),
        ];
        let DoublePoints::Cover { q1, q2 } = o.double_points(&p).unwrap() else { panic!("expected a cover") };
        // the pencil is (u^2 : v^2): both pair quadratics are even in v
        assert_eq!((q1.coeffs[1], q2.coeffs[1]), (0, 0));
        assert!(o.type_of_line(&p).unwrap().equals(&GwForm::ones(&k, 1)).unwrap());
    }

    #[test]
    fn tacnode_has_a_double_orbit() {
        let o = oracle(11);
        let k = o.prime_field().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut done = 0;
        while done < 5 {
            let kk = k.clone();
            let s: &dyn Fn(&mut ChaCha8Rng) -> u64 = &move |r| kk.random(r);
            let (q1, q2, sq) = (random_form::<PrimeField, _>(2, &mut rng, s), random_form::<PrimeField, _>(2, &mut rng, s), random_form::<PrimeField, _>(2, &mut rng, s));
            let p = [binforms::mul(&k, &q2, &q2), binforms::mul(&k, &q1, &sq), binforms::mul(&k, &q1, &q2)];
            if k.is_zero(&matrix::det(&k, &binforms::matrix_a(&k, &p))) || has_repeated_root(&k, &q1) {
                continue;
            }
            let DoublePoints::Orbits(orbits) = o.double_points(&p).unwrap() else { panic!("not a cover") };
            let double = orbits.iter().find(|o| o.multiplicity == 2).expect("tacnode orbit");
            assert_eq!(double.residue_degree, 1);
            let r12 = binforms::resultant(&k, &q1, &q2);
            assert_eq!(k.is_square_ff(&double.norm), k.is_square_ff(&r12));
            let t = o.type_of_line(&p).unwrap();
            let rs = binforms::resultant(&k, &sq, &q2);
            assert!(t.equals(&GwForm::rank_one(&k, &rs).unwrap()).unwrap());
            assert!(t.equals(&det_class(&k, &p)).unwrap());
            done += 1;
        }
    }

    #[test]
    fn segre_degree_is_independent_of_psi() {
        let o = oracle(7);
        let k = o.prime_field().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let kk = k.clone();
        let p = crate::lines::planted::random_simple_triple(&k, &mut rng, &move |r: &mut ChaCha8Rng| kk.random(r));
        let DoublePoints::Orbits(orbits) = o.double_points(&p).unwrap() else { panic!() };
        // recompute at the first orbit with psi' = B psi, B fixing the first axis
        let orb = &orbits[0];
        let kf = &orb.ambient;
        let e = orb.residue_degree as u32;
        let exponent = (7u64.pow(e) - 1) / 6;
        let psi0 = standard_psi(kf, &orb.image);
        let pe = orb.forms.clone();
        for _ in 0..20 {
            let mut bm = vec![vec![kf.zero(); 3]; 3];
            bm[0][0] = kf.from_prime(rng.gen_range(1..7));
            loop {
                for r in 1..3 {
                    for c in 1..3 {
                        bm[r][c] = kf.from_prime(rng.gen_range(0..7));
                    }
                }
                if matrix::rank(kf, &bm) == 3 {
                    break;
                }
            }
            let psi = matrix::mat_mul(kf, &bm, &psi0);
            let (_, alpha) = segre_degree(kf, &pe, &psi).unwrap();
            let n = kf.pow(&alpha, exponent);
            assert_eq!(k.is_square_ff(&n[0]), k.is_square_ff(&orb.norm));
        }
    }
}
