//! Lines on a quintic: normal form, local index and local section.

use std::fmt::Debug;

use serde_json::{json, Value};

use super::mpoly::MPoly;
use super::quintic::Quintic;
use crate::binforms::{self, BinaryForm};
use crate::error::{Error, Result};
use crate::gw::GwForm;
use crate::rings::matrix::{self, Matrix};
use crate::rings::{Field, GwField, Ring};

/// A line as the row span of a rank-2 `2 x 5` matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinePlane<E> {
    pub span: [Vec<E>; 2],
}

impl<E: Clone + Debug> LinePlane<E> {
    pub fn new<F: Field<Elem = E>>(k: &F, a: Vec<E>, b: Vec<E>) -> Result<Self> {
        assert!(a.len() == 5 && b.len() == 5, "a line in P^4 is spanned by two 5-vectors");
        if matrix::rank(k, &vec![a.clone(), b.clone()]) < 2 {
            return Err(Error::RankDeficient);
        }
        Ok(LinePlane { span: [a, b] })
    }
}

impl<E: Clone + Debug> LinePlane<E> {
    pub fn to_json<F: GwField<Elem = E>>(&self, k: &F) -> Value {
        let rows: Vec<Vec<String>> = self.span.iter().map(|r| r.iter().map(|c| k.format(c)).collect()).collect();
        json!({"span": rows})
    }

    pub fn from_json<F: GwField<Elem = E>>(k: &F, v: &Value) -> Result<Self> {
        let err = |m: &str| Error::Parse { location: "line".into(), message: m.into() };
        let rows = v
            .get("span")
            .and_then(Value::as_array)
            .filter(|r| r.len() == 2)
            .ok_or_else(|| err("span must be a 2x5 array"))?;
        let mut out = Vec::new();
        for row in rows {
            let row = row.as_array().filter(|r| r.len() == 5).ok_or_else(|| err("span must be a 2x5 array"))?;
            let parsed = row
                .iter()
                .map(|c| c.as_str().ok_or_else(|| err("entries are strings")).and_then(|s| k.parse(s)))
                .collect::<Result<Vec<_>>>()?;
            out.push(parsed);
        }
        let b = out.pop().unwrap();
        let a = out.pop().unwrap();
        Self::new(k, a, b)
    }
}

/// `f(C y) = x_1 P_1 + x_2 P_2 + x_3 P_3 + Q` in coordinates
/// `y = (x_1, x_2, x_3, u, v)` where the line is `x_1 = x_2 = x_3 = 0`.
#[derive(Clone, Debug)]
pub struct LineNormalForm<F: Ring> {
    pub field: F,
    pub p: [BinaryForm<F::Elem>; 3],
    /// Terms of `x`-degree at least 2.
    pub residual: Quintic<F>,
    /// Columns are the images of `e_{x_1}, e_{x_2}, e_{x_3}, e_u, e_v`.
    pub change: Matrix<F::Elem>,
}

/// Splits a quintic already in line position.
pub fn split_in_position<F: Ring>(g: &Quintic<F>) -> Result<([BinaryForm<F::Elem>; 3], Quintic<F>)> {
    let r = &g.field;
    let mut p: [BinaryForm<F::Elem>; 3] = std::array::from_fn(|_| binforms::zero(r, 4));
    let mut residual = MPoly::zero();
    let mut on_line = Vec::new();
    for (e, c) in &g.poly.terms {
        let xdeg = e[0] + e[1] + e[2];
        match xdeg {
            0 => on_line.push(format!("u^{}v^{}: {:?}", e[3], e[4], c)),
            1 => {
                let i = (0..3).find(|&i| e[i] == 1).unwrap();
                p[i].coeffs[e[4] as usize] = c.clone();
            }
            _ => residual.add_term(r, *e, c.clone()),
        }
    }
    if !on_line.is_empty() {
        return Err(Error::LineNotOnQuintic(on_line));
    }
    Ok((p, Quintic::from_poly(r, residual)))
}

/// Completes the span to a basis with the standard vectors missing from
/// the pivot columns, and reads off `P_1, P_2, P_3` and `Q`.
pub fn normalize_line<F: Field>(f: &Quintic<F>, l: &LinePlane<F::Elem>) -> Result<LineNormalForm<F>> {
    let k = &f.field;
    let rows = vec![l.span[0].clone(), l.span[1].clone()];
    let (_, pivots) = matrix::rref(k, &rows);
    if pivots.len() < 2 {
        return Err(Error::RankDeficient);
    }
    let restricted = f.restrict(&l.span[0], &l.span[1]);
    if !binforms::is_zero(k, &restricted) {
        let nonzero = restricted
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !k.is_zero(c))
            .map(|(j, c)| format!("u^{}v^{}: {:?}", 5 - j, j, c))
            .collect();
        return Err(Error::LineNotOnQuintic(nonzero));
    }
    let mut cols: Vec<Vec<F::Elem>> = (0..5)
        .filter(|j| !pivots.contains(j))
        .map(|j| (0..5).map(|i| if i == j { k.one() } else { k.zero() }).collect())
        .collect();
    cols.push(l.span[0].clone());
    cols.push(l.span[1].clone());
    let change = matrix::transpose(&cols);
    let g = f.substitute(&change);
    let (p, residual) = split_in_position(&g)?;
    Ok(LineNormalForm { field: k.clone(), p, residual, change })
}

impl<F: Field> LineNormalForm<F> {
    /// `x_1 P_1 + x_2 P_2 + x_3 P_3 + Q` in the normal-form coordinates.
    pub fn in_position(&self) -> Quintic<F> {
        let r = &self.field;
        let mut poly = self.residual.poly.clone();
        for (i, pi) in self.p.iter().enumerate() {
            for (j, c) in pi.coeffs.iter().enumerate() {
                let mut e = [0u8; 5];
                e[i] = 1;
                e[3] = (4 - j) as u8;
                e[4] = j as u8;
                poly.add_term(r, e, c.clone());
            }
        }
        Quintic::from_poly(r, poly)
    }

    /// The quintic in the original coordinates.
    pub fn reassemble(&self) -> Result<Quintic<F>> {
        let inv = matrix::inverse(&self.field, &self.change).ok_or(Error::RankDeficient)?;
        Ok(self.in_position().substitute(&inv))
    }

    pub fn det_a(&self) -> F::Elem {
        matrix::det(&self.field, &binforms::matrix_a(&self.field, &self.p))
    }
}

/// `r_1 P_1 + r_2 P_2 + r_3 P_3 = 0` written out.
pub fn format_relation<E: Debug>(rel: &[BinaryForm<E>; 3]) -> String {
    rel.iter()
        .enumerate()
        .map(|(i, r)| format!("({:?}u+{:?}v)P{}", r.coeffs[0], r.coeffs[1], i + 1))
        .collect::<Vec<_>>()
        .join(" + ")
        + " = 0"
}

/// `<det A>`, or `NotSimple` with a kernel relation.
pub fn local_index_simple<F: GwField>(nf: &LineNormalForm<F>) -> Result<GwForm<F>> {
    let k = &nf.field;
    let d = nf.det_a();
    if k.is_zero(&d) {
        let rel = binforms::kernel_relation(k, &nf.p).expect("singular matrix has a kernel");
        return Err(Error::NotSimple { relation: format_relation(&rel) });
    }
    GwForm::rank_one(k, &d)
}

/// The coefficients `f_1, ..., f_6` of `u^5, ..., v^5` in
/// `f(x u + x' v, y u + y' v, z u + z' v, u, v)`, as polynomials in
/// `(x, x', y, y', z, z')`.
#[derive(Clone, Debug)]
pub struct LocalSection<E> {
    pub f: Vec<MPoly<E, 6>>,
}

pub fn local_section<F: Field>(nf: &LineNormalForm<F>) -> LocalSection<F::Elem> {
    let r = &nf.field;
    let g = nf.in_position();
    // variables (x, x', y, y', z, z', u, v)
    let var = |i: usize| {
        let mut e = [0u8; 8];
        e[i] = 1;
        e
    };
    let chart = |a: usize| {
        let mut m = MPoly::<F::Elem, 8>::zero();
        let mut e = var(a);
        e[6] = 1;
        m.add_term(r, e, r.one());
        let mut e = var(a + 1);
        e[7] = 1;
        m.add_term(r, e, r.one());
        m
    };
    let mut u = MPoly::zero();
    u.add_term(r, var(6), r.one());
    let mut v = MPoly::zero();
    v.add_term(r, var(7), r.one());
    let h = g.poly.substitute(r, &[chart(0), chart(2), chart(4), u, v]);
    let mut f = vec![MPoly::zero(); 6];
    for (e, c) in &h.terms {
        let j = e[7] as usize;
        let mut e6 = [0u8; 6];
        e6.copy_from_slice(&e[..6]);
        f[j].add_term(r, e6, c.clone());
    }
    LocalSection { f }
}

/// The Jacobian of `(f_1, ..., f_6)` at the origin and its determinant.
pub fn jacobian_at_origin<F: Field>(k: &F, ls: &LocalSection<F::Elem>) -> (Matrix<F::Elem>, F::Elem) {
    let jac: Matrix<F::Elem> = ls
        .f
        .iter()
        .map(|fi| {
            (0..6)
                .map(|c| {
                    let mut e = [0u8; 6];
                    e[c] = 1;
                    fi.coeff(k, &e)
                })
                .collect()
        })
        .collect();
    let d = matrix::det(k, &jac);
    (jac, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::{PrimeField, Rationals};
    use num_rational::BigRational;

    #[test]
    fn fermat_line_normal_form() {
        let k = PrimeField::new(7).unwrap();
        let f = Quintic::fermat(&k);
        let l = LinePlane::new(&k, vec![1, 6, 0, 0, 0], vec![0, 0, 1, 6, 0]).unwrap();
        let nf = normalize_line(&f, &l).unwrap();
        assert_eq!(nf.reassemble().unwrap().poly, f.poly);
        assert!(nf.residual.poly.terms.keys().all(|e| e[0] + e[1] + e[2] >= 2));
        // the line is not isolated on the Fermat quintic
        assert_eq!(nf.det_a(), 0);
        let (_, d) = jacobian_at_origin(&k, &local_section(&nf));
        assert_eq!(d, 0);
        assert!(matches!(local_index_simple(&nf), Err(Error::NotSimple { .. })));
        let off = LinePlane::new(&k, vec![1, 0, 0, 0, 0], vec![0, 1, 0, 0, 0]).unwrap();
        assert!(matches!(normalize_line(&f, &off), Err(Error::LineNotOnQuintic(_))));
        assert_eq!(LinePlane::new(&k, vec![1, 2, 0, 0, 0], vec![2, 4, 0, 0, 0]).unwrap_err(), Error::RankDeficient);
    }

    #[test]
    fn example_forms_have_trivial_index() {
        let k = Rationals;
        let q = |v: &[i64]| BinaryForm::new(v.iter().map(|&n| BigRational::from_integer(n.into())).collect());
        // P1 = u^2(u^2+v^2), P2 = u^2 v^2, P3 = v^2(u^2+v^2), in position
        let p = [q(&[1, 0, 1, 0, 0]), q(&[0, 0, 1, 0, 0]), q(&[0, 0, 1, 0, 1])];
        let nf = LineNormalForm {
            field: k,
            p: p.clone(),
            residual: Quintic::new(&k, vec![]).unwrap(),
            change: matrix::identity(&k, 5),
        };
        let g = nf.in_position();
        let again = normalize_line(&g, &LinePlane::new(&k, nf.change[3].clone(), nf.change[4].clone()).unwrap()).unwrap();
        assert_eq!(again.p, p);
        assert_eq!(again.change, matrix::identity(&k, 5));
        let idx = local_index_simple(&nf).unwrap();
        assert!(idx.equals(&GwForm::ones(&k, 1)).unwrap());
        let (jac, d) = jacobian_at_origin(&k, &local_section(&nf));
        assert_eq!(jac, binforms::matrix_a(&k, &p));
        assert_eq!(d, nf.det_a());
    }

    #[test]
    fn line_json_round_trip() {
        let k = PrimeField::new(11).unwrap();
        let l = LinePlane::new(&k, vec![1, 10, 0, 0, 0], vec![0, 0, 1, 10, 0]).unwrap();
        assert_eq!(LinePlane::from_json(&k, &l.to_json(&k)).unwrap(), l);
    }
}
