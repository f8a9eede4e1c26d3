//! Two-variable models of the local structure at the deformed lines, used
//! as independent oracles for the series solver and the class extraction.
//!
//! The crossing model `(z^3 z'^2 + t^5 g3, z^2 z'^3 + t^5 g4)` has the
//! local algebra `k[z, z']/(z^3 z'^2, z^2 z'^3)` of a multiplicity-5 line
//! and should give `2H + <1>`. The smooth model `(t^2 g3, z^2 + t^2 g4)`
//! has the local algebra `k[z, z']/(z^2)` of a multiplicity-2 line and
//! should give `H`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::layer::Layer;
use super::trace_to_prime;
use crate::error::{Error, Result};
use crate::gw::{trace_form, GwForm, SpringerPair};
use crate::lines::mpoly::MPoly;
use crate::rings::series::SeriesRing;
use crate::rings::{Field, FiniteField, GaloisField, PrimeField, Ring};

type Series = Vec<Vec<u64>>;
type SPoly = MPoly<Series, 2>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ToyModel {
    Crossing,
    Smooth,
}

impl ToyModel {
    pub fn name(self) -> &'static str {
        match self {
            ToyModel::Crossing => "crossing",
            ToyModel::Smooth => "smooth",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ToyOutcome {
    pub model: ToyModel,
    pub valuation: usize,
    pub class: SpringerPair<PrimeField>,
    /// Valuation parity and class as predicted.
    pub ok: bool,
}

/// `c t^shift` per coefficient of `g`, in the series ring.
fn lift(s: &SeriesRing<Layer>, k: &GaloisField, g: &MPoly<u64, 2>, shift: usize) -> SPoly {
    g.map(s, |c| s.monomial(s.base.embed(&k.from_prime(*c)), shift))
}

fn monomial(s: &SeriesRing<Layer>, e: [u8; 2]) -> SPoly {
    let mut f = MPoly::zero();
    f.add_term(s, e, s.one());
    f
}

/// `f(t^{e_0} X_0, t^{e_1} X_1) / t^div`, exact since every coefficient of
/// `f` is a monomial in `t`.
fn rescale(s: &SeriesRing<Layer>, f: &SPoly, e: [usize; 2], div: usize) -> Result<SPoly> {
    let mut out = MPoly::zero();
    for (x, c) in &f.terms {
        let up = e[0] * x[0] as usize + e[1] * x[1] as usize;
        let mut v = s.zero();
        for (i, ci) in c.iter().enumerate() {
            if s.base.is_zero(ci) {
                continue;
            }
            let j = i + up;
            if j < div {
                return Err(Error::Unsupported("model equation is not divisible by the scaling".into()));
            }
            if j - div < s.prec {
                v[j - div] = ci.clone();
            }
        }
        out.add_term(s, *x, v);
    }
    Ok(out)
}

/// Order-by-order Newton for `h(X) = 0` from seeds with an invertible
/// Jacobian at `t = 0`.
fn newton(s: &SeriesRing<Layer>, h: &[SPoly; 2], seeds: [Vec<u64>; 2]) -> Result<[Series; 2]> {
    let l = &s.base;
    let mut x = seeds.map(|c| s.constant(c));
    let d: [[SPoly; 2]; 2] = std::array::from_fn(|i| std::array::from_fn(|j| h[i].derivative(s, j)));
    let j0: [[Vec<u64>; 2]; 2] = std::array::from_fn(|i| std::array::from_fn(|j| d[i][j].eval(s, &x)[0].clone()));
    let det = l.sub(&l.mul(&j0[0][0], &j0[1][1]), &l.mul(&j0[0][1], &j0[1][0]));
    let inv = l.invert(&det)?;
    for n in 1..s.prec {
        let r = [h[0].eval(s, &x), h[1].eval(s, &x)];
        let (r0, r1) = (&r[0][n], &r[1][n]);
        // X_n -= J0^{-1} r_n
        let d0 = l.mul(&inv, &l.sub(&l.mul(&j0[1][1], r0), &l.mul(&j0[0][1], r1)));
        let d1 = l.mul(&inv, &l.sub(&l.mul(&j0[0][0], r1), &l.mul(&j0[1][0], r0)));
        x[0][n] = l.sub(&x[0][n], &d0);
        x[1][n] = l.sub(&x[1][n], &d1);
    }
    if h.iter().any(|hi| !s.is_zero(&hi.eval(s, &x))) {
        return Err(Error::SolveFailed(s.prec));
    }
    Ok(x)
}

/// Class of `det` of the Jacobian of `f` at `(t^{e_0} X_0, t^{e_1} X_1)`.
fn jacobian_class(s: &SeriesRing<Layer>, f: &[SPoly; 2], e: [usize; 2], x: &[Series; 2]) -> Result<(usize, SpringerPair<PrimeField>)> {
    let l = &s.base;
    let pt: [Series; 2] = std::array::from_fn(|i| s.mul(&s.monomial(l.one(), e[i]), &x[i]));
    let jm: [[Series; 2]; 2] = std::array::from_fn(|i| std::array::from_fn(|j| f[i].derivative(s, j).eval(s, &pt)));
    let det = s.sub(&s.mul(&jm[0][0], &jm[1][1]), &s.mul(&jm[0][1], &jm[1][0]));
    let v = s.valuation(&det).ok_or(Error::PrecisionExhausted(s.prec))?;
    let k = l.field();
    let form = trace_to_prime(k, &trace_form(&l.to_etale()?, &l.components(&det[v]))?)?;
    let zero = GwForm::zero(form.field());
    let pair = if v % 2 == 0 { SpringerPair::new(form, zero) } else { SpringerPair::new(zero, form) };
    Ok((v, pair))
}

/// The crossing model with `g3(0), g4(0)` nonzero, solved over
/// `L = F_p[w]/(w^5 - g3(0) g4(0))` from `z = t w^3/b`, `z' = t w^3/a`.
pub fn crossing_model(fp: &PrimeField, g3: &MPoly<u64, 2>, g4: &MPoly<u64, 2>, prec: usize) -> Result<ToyOutcome> {
    let k = GaloisField::new(fp.p(), vec![0, 1])?;
    let a = k.neg(&k.from_prime(g3.coeff(fp, &[0, 0])));
    let b = k.neg(&k.from_prime(g4.coeff(fp, &[0, 0])));
    let layer = Layer::new(&k, 5, k.mul(&a, &b))?;
    let s = SeriesRing::new(layer.clone(), prec);
    let f = [
        monomial(&s, [3, 2]).add(&s, &lift(&s, &k, g3, 5)),
        monomial(&s, [2, 3]).add(&s, &lift(&s, &k, g4, 5)),
    ];
    let h = [rescale(&s, &f[0], [1, 1], 5)?, rescale(&s, &f[1], [1, 1], 5)?];
    let w3 = layer.pow(&layer.w(), 3);
    let inv = |c: &Vec<u64>| k.inv(c).ok_or(Error::ZeroInput);
    let seeds = [layer.scale_k(&w3, &inv(&b)?), layer.scale_k(&w3, &inv(&a)?)];
    let x = newton(&s, &h, seeds)?;
    let (valuation, class) = jacobian_class(&s, &f, [1, 1], &x)?;
    let expected = SpringerPair::new(GwForm::hyperbolic(fp, 2).add(&GwForm::ones(fp, 1)), GwForm::zero(fp));
    let ok = valuation % 2 == 0 && class.equals(&expected)?;
    Ok(ToyOutcome { model: ToyModel::Crossing, valuation, class, ok })
}

/// The smooth model with `g3(0) = 0`, `dg3/dz'(0) != 0` and `g4(0) != 0`,
/// solved over `L = F_p[w]/(w^2 + g4(0))` from `z = t w`, `z' = 0`.
pub fn smooth_model(fp: &PrimeField, g3: &MPoly<u64, 2>, g4: &MPoly<u64, 2>, prec: usize) -> Result<ToyOutcome> {
    let k = GaloisField::new(fp.p(), vec![0, 1])?;
    if !fp.is_zero(&g3.coeff(fp, &[0, 0])) {
        return Err(Error::Unsupported("smooth model needs g3(0) = 0".into()));
    }
    let d = k.neg(&k.from_prime(g4.coeff(fp, &[0, 0])));
    let layer = Layer::new(&k, 2, d)?;
    let s = SeriesRing::new(layer.clone(), prec);
    let f = [lift(&s, &k, g3, 2), monomial(&s, [2, 0]).add(&s, &lift(&s, &k, g4, 2))];
    let h = [rescale(&s, &f[0], [1, 0], 2)?, rescale(&s, &f[1], [1, 0], 2)?];
    let x = newton(&s, &h, [layer.w(), layer.zero()])?;
    let (valuation, class) = jacobian_class(&s, &f, [1, 0], &x)?;
    let expected = SpringerPair::new(GwForm::zero(fp), GwForm::hyperbolic(fp, 1));
    let ok = valuation % 2 == 1 && class.equals(&expected)?;
    Ok(ToyOutcome { model: ToyModel::Smooth, valuation, class, ok })
}

/// Random `g` of degree at most 2.
fn random_quadric<R: Rng>(fp: &PrimeField, rng: &mut R) -> MPoly<u64, 2> {
    let mut g = MPoly::zero();
    for e in [[0, 0], [1, 0], [0, 1], [2, 0], [1, 1], [0, 2]] {
        g.add_term(fp, e, rng.gen_range(0..fp.p()));
    }
    g
}

fn nonzero_at<R: Rng>(fp: &PrimeField, rng: &mut R, g: &mut MPoly<u64, 2>, e: [u8; 2]) {
    if fp.is_zero(&g.coeff(fp, &e)) {
        g.add_term(fp, e, rng.gen_range(1..fp.p()));
    }
}

/// Runs `trials` random instances of both models over F_p.
pub fn local_structure_check(p: u64, trials: usize, seed: u64) -> Result<Vec<ToyOutcome>> {
    let fp = PrimeField::new(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(2 * trials);
    for _ in 0..trials {
        let (mut g3, mut g4) = (random_quadric(&fp, &mut rng), random_quadric(&fp, &mut rng));
        nonzero_at(&fp, &mut rng, &mut g3, [0, 0]);
        nonzero_at(&fp, &mut rng, &mut g4, [0, 0]);
        out.push(crossing_model(&fp, &g3, &g4, 16)?);
        let (mut g3, mut g4) = (random_quadric(&fp, &mut rng), random_quadric(&fp, &mut rng));
        g3.terms.remove(&[0, 0]);
        nonzero_at(&fp, &mut rng, &mut g3, [0, 1]);
        nonzero_at(&fp, &mut rng, &mut g4, [0, 0]);
        out.push(smooth_model(&fp, &g3, &g4, 16)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossing_valuation_is_eight() {
        let fp = PrimeField::new(7).unwrap();
        let mut g3 = MPoly::zero();
        g3.add_term(&fp, [0, 0], 1);
        g3.add_term(&fp, [1, 1], 3);
        let mut g4 = MPoly::zero();
        g4.add_term(&fp, [0, 0], 2);
        g4.add_term(&fp, [2, 0], 5);
        let o = crossing_model(&fp, &g3, &g4, 14).unwrap();
        assert_eq!(o.valuation, 8);
        assert!(o.ok);
    }

    #[test]
    fn smooth_valuation_is_three() {
        let fp = PrimeField::new(11).unwrap();
        let mut g3 = MPoly::zero();
        g3.add_term(&fp, [0, 1], 4);
        g3.add_term(&fp, [1, 0], 1);
        let mut g4 = MPoly::zero();
        g4.add_term(&fp, [0, 0], 3);
        let o = smooth_model(&fp, &g3, &g4, 10).unwrap();
        assert_eq!(o.valuation, 3);
        assert!(o.ok);
    }

    #[test]
    fn random_models_match_predictions() {
        for p in [3, 7, 11, 13] {
            for o in local_structure_check(p, 20, p).unwrap() {
                let v = if o.model == ToyModel::Crossing { 8 } else { 3 };
                assert_eq!(o.valuation, v, "{} over F_{p}", o.model.name());
                assert!(o.ok, "{} over F_{p}", o.model.name());
            }
        }
    }
}
