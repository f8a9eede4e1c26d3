//! Random quintics containing a prescribed simple line.

use rand::Rng;

use super::mpoly::{monomials, MPoly};
use super::normal::LinePlane;
use super::quintic::Quintic;
use crate::binforms::{self, BinaryForm};
use crate::rings::matrix::{self, Matrix};
use crate::rings::Field;

#[derive(Clone, Debug)]
pub struct PlantedLine<F: Field> {
    pub quintic: Quintic<F>,
    pub line: LinePlane<F::Elem>,
    /// The quartics before scrambling.
    pub p: [BinaryForm<F::Elem>; 3],
}

/// Draws field elements from a seeded generator.
pub type Sampler<'a, F, R> = dyn Fn(&mut R) -> <F as crate::rings::Ring>::Elem + 'a;

pub fn random_form<F: Field, R: Rng>(d: usize, rng: &mut R, sample: &Sampler<'_, F, R>) -> BinaryForm<F::Elem> {
    BinaryForm::new((0..=d).map(|_| sample(rng)).collect())
}

/// Three quartics with `det A != 0`, by rejection.
pub fn random_simple_triple<F: Field, R: Rng>(k: &F, rng: &mut R, sample: &Sampler<'_, F, R>) -> [BinaryForm<F::Elem>; 3] {
    loop {
        let p: [BinaryForm<F::Elem>; 3] = std::array::from_fn(|_| random_form::<F, R>(4, rng, sample));
        if !k.is_zero(&matrix::det(k, &binforms::matrix_a(k, &p))) {
            return p;
        }
    }
}

pub fn random_invertible<F: Field, R: Rng>(k: &F, n: usize, rng: &mut R, sample: &Sampler<'_, F, R>) -> Matrix<F::Elem> {
    loop {
        let m: Matrix<F::Elem> = (0..n).map(|_| (0..n).map(|_| sample(rng)).collect()).collect();
        if matrix::rank(k, &m) == n {
            return m;
        }
    }
}

/// `x_1 P_1 + x_2 P_2 + x_3 P_3 + Q` with `Q` a random combination of
/// `residual_terms` monomials of `x`-degree at least 2, optionally moved by
/// a random linear change of coordinates.
pub fn planted_line<F: Field, R: Rng>(
    k: &F,
    rng: &mut R,
    sample: &Sampler<'_, F, R>,
    residual_terms: usize,
    scramble: bool,
) -> PlantedLine<F> {
    let p = random_simple_triple(k, rng, sample);
    let mut poly = MPoly::zero();
    for (i, pi) in p.iter().enumerate() {
        for (j, c) in pi.coeffs.iter().enumerate() {
            let mut e = [0u8; 5];
            e[i] = 1;
            e[3] = (4 - j) as u8;
            e[4] = j as u8;
            poly.add_term(k, e, c.clone());
        }
    }
    let high: Vec<[u8; 5]> = monomials::<5>(5).into_iter().filter(|e| e[0] + e[1] + e[2] >= 2).collect();
    for _ in 0..residual_terms {
        let e = high[rng.gen_range(0..high.len())];
        let c = sample(rng);
        poly.add_term(k, e, c);
    }
    let f = Quintic::from_poly(k, poly);
    let unit = |i: usize| (0..5).map(|j| if i == j { k.one() } else { k.zero() }).collect::<Vec<_>>();
    if !scramble {
        let line = LinePlane::new(k, unit(3), unit(4)).expect("rank 2");
        return PlantedLine { quintic: f, line, p };
    }
    let b = random_invertible(k, 5, rng, sample);
    let binv = matrix::inverse(k, &b).expect("invertible");
    let col = |j: usize| binv.iter().map(|row| row[j].clone()).collect::<Vec<_>>();
    let line = LinePlane::new(k, col(3), col(4)).expect("rank 2");
    PlantedLine { quintic: f.substitute(&b), line, p }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lines::normal::{local_index_simple, normalize_line};
    use crate::rings::{FiniteField, GwField, PrimeField};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn planted_line_is_recovered() {
        let k = PrimeField::new(11).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let kk = k.clone();
            let pl = planted_line(&k, &mut rng, &move |r: &mut ChaCha8Rng| kk.random(r), 15, true);
            let nf = normalize_line(&pl.quintic, &pl.line).unwrap();
            let d0 = matrix::det(&k, &binforms::matrix_a(&k, &pl.p));
            let idx = local_index_simple(&nf).unwrap();
            assert!(k.same_class(&idx.discriminant(), &d0).unwrap());
        }
    }
}
