//! Diagonalization of symmetric Gram matrices and trace forms of etale
//! algebras.

use super::GwForm;
use crate::error::{Error, Result};
use crate::rings::matrix::Matrix;
use crate::rings::{EtaleAlgebra, Field, GwField, Ring};

/// Diagonal of a congruent diagonal matrix, by symmetric elimination.
/// Works over any ring whose `inv` succeeds on the pivots it meets.
pub fn diagonal_entries<F: Field>(k: &F, m: &Matrix<F::Elem>) -> Result<Vec<F::Elem>> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return Err(Error::NotSymmetric);
    }
    for i in 0..n {
        for j in 0..i {
            if m[i][j] != m[j][i] {
                return Err(Error::NotSymmetric);
            }
        }
    }
    let mut a = m.clone();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        if k.inv(&a[i][i]).is_none() {
            if let Some(j) = (i + 1..n).find(|&j| k.inv(&a[j][j]).is_some()) {
                a.swap(i, j);
                for row in a.iter_mut() {
                    row.swap(i, j);
                }
            } else if let Some(j) = (i + 1..n).find(|&j| !k.is_zero(&a[i][j])) {
                // e_i + e_j has value a_ii + 2 a_ij + a_jj, a unit in char != 2
                for c in 0..n {
                    let t = a[j][c].clone();
                    a[i][c] = k.add(&a[i][c], &t);
                }
                for r in 0..n {
                    let t = a[r][j].clone();
                    a[r][i] = k.add(&a[r][i], &t);
                }
            }
        }
        let inv = k.inv(&a[i][i]).ok_or(Error::Degenerate)?;
        for r in i + 1..n {
            if k.is_zero(&a[r][i]) {
                continue;
            }
            let f = k.mul(&a[r][i], &inv);
            for c in i + 1..n {
                let t = k.mul(&f, &a[i][c]);
                a[r][c] = k.sub(&a[r][c], &t);
            }
        }
        for r in i + 1..n {
            a[r][i] = k.zero();
            a[i][r] = k.zero();
        }
        out.push(a[i][i].clone());
    }
    Ok(out)
}

/// The class of the symmetric bilinear form with Gram matrix `m`.
pub fn diagonalize_gram<F: GwField>(k: &F, m: &Matrix<F::Elem>) -> Result<GwForm<F>> {
    GwForm::diag(k, &diagonal_entries(k, m)?)
}

/// `Tr_{A/k}(<c>)`: the form `(x, y) -> Tr(c x y)`.
pub fn trace_form<F: GwField>(alg: &EtaleAlgebra<F>, c: &[F::Elem]) -> Result<GwForm<F>> {
    if !alg.is_unit(c) {
        return Err(Error::NotAUnit("trace form of a non-unit".into()));
    }
    diagonalize_gram(alg.base(), &alg.gram(c))
}

/// `Tr_{A/k}` of the diagonal class `<c_1> + ... + <c_n>` over `A`.
pub fn trace_form_of_class<F: GwField>(alg: &EtaleAlgebra<F>, entries: &[Vec<F::Elem>]) -> Result<GwForm<F>> {
    let mut acc = GwForm::zero(alg.base());
    for c in entries {
        acc = acc.add(&trace_form(alg, c)?);
    }
    Ok(acc)
}

/// Gram matrix of `Tr_{B/A}(<c>)` over the subalgebra `A` below the top
/// level, in the basis `1, w, ..., w^{d-1}` of the top generator.
pub fn relative_gram<F: Field>(alg: &EtaleAlgebra<F>, c: &[F::Elem]) -> Matrix<Vec<F::Elem>> {
    let top = alg.levels();
    let d = alg.degrees()[top - 1];
    let w = alg.generator(top);
    let mut pw = vec![c.to_vec()];
    for i in 1..2 * d - 1 {
        pw.push(alg.mul(&pw[i - 1], &w));
    }
    let traces: Vec<Vec<F::Elem>> = pw.iter().map(|x| alg.trace_rel(top, x)).collect();
    (0..d).map(|i| (0..d).map(|j| traces[i + j].clone()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::{PrimeField, Rationals};
    use num_rational::BigRational;

    #[test]
    fn gram_examples() {
        let k = PrimeField::new(7).unwrap();
        let h = diagonalize_gram(&k, &vec![vec![0, 3], vec![3, 0]]).unwrap();
        assert!(h.equals(&GwForm::hyperbolic(&k, 1)).unwrap());
        assert_eq!(diagonalize_gram(&k, &vec![vec![2]]).unwrap().remainder(), &[1]);
        let q = Rationals;
        let r = |n: i64| BigRational::from_integer(n.into());
        let id = vec![vec![r(1), r(0), r(0)], vec![r(0), r(1), r(0)], vec![r(0), r(0), r(1)]];
        assert_eq!(diagonalize_gram(&q, &id).unwrap().to_string(), "3<1>");
        assert_eq!(
            diagonalize_gram(&q, &vec![vec![r(1), r(1)], vec![r(1), r(1)]]).unwrap_err(),
            Error::Degenerate
        );
        assert_eq!(
            diagonalize_gram(&q, &vec![vec![r(1), r(2)], vec![r(1), r(1)]]).unwrap_err(),
            Error::NotSymmetric
        );
    }

    #[test]
    fn trivial_tower() {
        let k = PrimeField::new(7).unwrap();
        let a = EtaleAlgebra::simple(k.clone(), "w", vec![0, 1]).unwrap();
        let f = trace_form(&a, &[3]).unwrap();
        assert!(f.equals(&GwForm::rank_one(&k, &3).unwrap()).unwrap());
        assert!(matches!(trace_form(&a, &[0]), Err(Error::NotAUnit(_))));
    }
}
