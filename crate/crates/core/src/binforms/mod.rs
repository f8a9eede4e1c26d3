//! Binary forms `c_0 u^d + c_1 u^{d-1} v + ... + c_d v^d` over a
//! coefficient ring: products, Sylvester resultants, gcds, the 6x6 matrix
//! `A` of three quartics and the Wronskian of a pencil of quadratics.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::rings::matrix::{self, Matrix};
use crate::rings::poly;
use crate::rings::{Field, GwField, Ring};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryForm<E> {
    pub coeffs: Vec<E>,
}

impl<E: Clone> BinaryForm<E> {
    pub fn new(coeffs: Vec<E>) -> Self {
        assert!(!coeffs.is_empty(), "a binary form has degree + 1 coefficients");
        BinaryForm { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }
}

pub fn zero<R: Ring>(r: &R, d: usize) -> BinaryForm<R::Elem> {
    BinaryForm::new(vec![r.zero(); d + 1])
}

pub fn is_zero<R: Ring>(r: &R, f: &BinaryForm<R::Elem>) -> bool {
    f.coeffs.iter().all(|c| r.is_zero(c))
}

pub fn add<R: Ring>(r: &R, f: &BinaryForm<R::Elem>, g: &BinaryForm<R::Elem>) -> BinaryForm<R::Elem> {
    assert_eq!(f.degree(), g.degree());
    BinaryForm::new(f.coeffs.iter().zip(&g.coeffs).map(|(a, b)| r.add(a, b)).collect())
}

pub fn sub<R: Ring>(r: &R, f: &BinaryForm<R::Elem>, g: &BinaryForm<R::Elem>) -> BinaryForm<R::Elem> {
    assert_eq!(f.degree(), g.degree());
    BinaryForm::new(f.coeffs.iter().zip(&g.coeffs).map(|(a, b)| r.sub(a, b)).collect())
}

pub fn scale<R: Ring>(r: &R, f: &BinaryForm<R::Elem>, c: &R::Elem) -> BinaryForm<R::Elem> {
    BinaryForm::new(f.coeffs.iter().map(|a| r.mul(a, c)).collect())
}

pub fn mul<R: Ring>(r: &R, f: &BinaryForm<R::Elem>, g: &BinaryForm<R::Elem>) -> BinaryForm<R::Elem> {
    let (m, n) = (f.degree(), g.degree());
    let mut out = Vec::with_capacity(m + n + 1);
    let mut terms = Vec::new();
    for k in 0..=m + n {
        terms.clear();
        for i in k.saturating_sub(n)..=k.min(m) {
            terms.push((&f.coeffs[i], &g.coeffs[k - i]));
        }
        out.push(r.sum_of_products(&terms));
    }
    BinaryForm::new(out)
}

/// Value at `(u, v)`.
pub fn eval<R: Ring>(r: &R, f: &BinaryForm<R::Elem>, u: &R::Elem, v: &R::Elem) -> R::Elem {
    let mut acc = r.zero();
    let d = f.degree();
    let mut up = vec![r.one()];
    let mut vp = vec![r.one()];
    for _ in 0..d {
        up.push(r.mul(up.last().unwrap(), u));
        vp.push(r.mul(vp.last().unwrap(), v));
    }
    for (i, c) in f.coeffs.iter().enumerate() {
        acc = r.add(&acc, &r.mul(c, &r.mul(&up[d - i], &vp[i])));
    }
    acc
}

/// `f(x, 1)` as a univariate polynomial, low to high.
pub fn dehomogenize<R: Ring>(r: &R, f: &BinaryForm<R::Elem>) -> Vec<R::Elem> {
    poly::trimmed(r, f.coeffs.iter().rev().cloned().collect())
}

/// `v^{d - deg p} p(u/v) v^{deg p}` as a form of degree `d`.
pub fn homogenize<R: Ring>(r: &R, p: &[R::Elem], d: usize) -> BinaryForm<R::Elem> {
    assert!(p.len() <= d + 1);
    let mut c = vec![r.zero(); d + 1];
    for (j, a) in p.iter().enumerate() {
        c[d - j] = a.clone();
    }
    BinaryForm::new(c)
}

/// Sylvester matrix of forms of degrees `m` and `n`.
pub fn sylvester<R: Ring>(r: &R, f: &BinaryForm<R::Elem>, g: &BinaryForm<R::Elem>) -> Matrix<R::Elem> {
    let (m, n) = (f.degree(), g.degree());
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![r.zero(); size];
        for (j, c) in f.coeffs.iter().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![r.zero(); size];
        for (j, c) in g.coeffs.iter().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// Resultant as the Sylvester determinant, computed without division.
pub fn resultant<R: Ring>(r: &R, f: &BinaryForm<R::Elem>, g: &BinaryForm<R::Elem>) -> R::Elem {
    matrix::det_ring(r, &sylvester(r, f, g))
}

/// Power of `v` dividing a nonzero form.
fn v_order<F: Field>(k: &F, f: &BinaryForm<F::Elem>) -> usize {
    f.coeffs.iter().take_while(|c| k.is_zero(c)).count()
}

/// Normalizes so the first nonzero coefficient is 1.
pub fn normalize<F: Field>(k: &F, f: &BinaryForm<F::Elem>) -> BinaryForm<F::Elem> {
    match f.coeffs.iter().find(|c| !k.is_zero(c)) {
        None => f.clone(),
        Some(lead) => {
            let inv = k.inv(lead).expect("nonzero coefficient of a field");
            scale(k, f, &inv)
        }
    }
}

/// Exact quotient `f / g`, verified by multiplying back.
pub fn div_exact<F: Field>(k: &F, f: &BinaryForm<F::Elem>, g: &BinaryForm<F::Elem>) -> Result<BinaryForm<F::Elem>> {
    if is_zero(k, g) || g.degree() > f.degree() {
        return Err(Error::DivisionFailed);
    }
    let d = f.degree() - g.degree();
    if is_zero(k, f) {
        return Ok(zero(k, d));
    }
    let (vf, vg) = (v_order(k, f), v_order(k, g));
    if vg > vf {
        return Err(Error::DivisionFailed);
    }
    let fp = dehomogenize(k, f);
    let gp = dehomogenize(k, g);
    let qp = poly::div_exact(k, &fp, &gp).ok_or(Error::DivisionFailed)?;
    if qp.len() > d + 1 {
        return Err(Error::DivisionFailed);
    }
    let q = homogenize(k, &qp, d);
    if mul(k, &q, g) != *f {
        return Err(Error::DivisionFailed);
    }
    Ok(q)
}

/// Normalized gcd and the two cofactors.
#[allow(clippy::type_complexity)]
pub fn gcd_and_divide<F: Field>(
    k: &F,
    f: &BinaryForm<F::Elem>,
    g: &BinaryForm<F::Elem>,
) -> Result<(BinaryForm<F::Elem>, BinaryForm<F::Elem>, BinaryForm<F::Elem>)> {
    let h = match (is_zero(k, f), is_zero(k, g)) {
        (true, true) => return Err(Error::ZeroInput),
        (true, false) => normalize(k, g),
        (false, true) => normalize(k, f),
        (false, false) => {
            let e = v_order(k, f).min(v_order(k, g));
            let gp = poly::gcd(k, &dehomogenize(k, f), &dehomogenize(k, g));
            let deg = gp.len() - 1 + e;
            normalize(k, &homogenize(k, &gp, deg))
        }
    };
    let a = div_exact(k, f, &h)?;
    let b = div_exact(k, g, &h)?;
    Ok((h, a, b))
}

/// The matrix whose columns are `u P_1, v P_1, u P_2, v P_2, u P_3, v P_3`
/// in the basis `u^5, u^4 v, ..., v^5`.
pub fn matrix_a<R: Ring>(r: &R, p: &[BinaryForm<R::Elem>; 3]) -> Matrix<R::Elem> {
    let mut a = vec![vec![r.zero(); 6]; 6];
    for (i, pi) in p.iter().enumerate() {
        assert_eq!(pi.degree(), 4, "matrix A takes quartics");
        for (j, c) in pi.coeffs.iter().enumerate() {
            a[j][2 * i] = c.clone();
            a[j + 1][2 * i + 1] = c.clone();
        }
    }
    a
}

pub fn det_a<R: Ring>(r: &R, p: &[BinaryForm<R::Elem>; 3]) -> R::Elem {
    matrix::det_ring(r, &matrix_a(r, p))
}

/// Linear forms `r_i = c_{2i} u + c_{2i+1} v` from a kernel vector of `A`,
/// so that `r_1 P_1 + r_2 P_2 + r_3 P_3 = 0`; `None` when `det A != 0`.
pub fn kernel_relation<F: Field>(k: &F, p: &[BinaryForm<F::Elem>; 3]) -> Option<[BinaryForm<F::Elem>; 3]> {
    let ker = matrix::kernel(k, &matrix_a(k, p));
    let c = ker.into_iter().next()?;
    Some([
        BinaryForm::new(vec![c[0].clone(), c[1].clone()]),
        BinaryForm::new(vec![c[2].clone(), c[3].clone()]),
        BinaryForm::new(vec![c[4].clone(), c[5].clone()]),
    ])
}

/// `sum r_i P_i`.
pub fn combine<R: Ring>(r: &R, rs: &[BinaryForm<R::Elem>], ps: &[BinaryForm<R::Elem>]) -> BinaryForm<R::Elem> {
    let mut acc = zero(r, rs[0].degree() + ps[0].degree());
    for (a, b) in rs.iter().zip(ps) {
        acc = add(r, &acc, &mul(r, a, b));
    }
    acc
}

/// Partial derivatives in `u` and `v`.
pub fn partials<R: Ring>(r: &R, f: &BinaryForm<R::Elem>) -> (BinaryForm<R::Elem>, BinaryForm<R::Elem>) {
    let d = f.degree();
    if d == 0 {
        return (zero(r, 0), zero(r, 0));
    }
    let du = (0..d).map(|i| r.scale_i64(&f.coeffs[i], (d - i) as i64)).collect();
    let dv = (1..=d).map(|i| r.scale_i64(&f.coeffs[i], i as i64)).collect();
    (BinaryForm::new(du), BinaryForm::new(dv))
}

/// `dQ1/du dQ2/dv - dQ1/dv dQ2/du`, whose roots are the fixed points of
/// the involution of the double cover `(Q1 : Q2)`.
pub fn wronskian<R: Ring>(r: &R, q1: &BinaryForm<R::Elem>, q2: &BinaryForm<R::Elem>) -> Result<BinaryForm<R::Elem>> {
    if r.is_zero(&resultant(r, q1, q2)) {
        return Err(Error::DegenerateCover);
    }
    let (a_u, a_v) = partials(r, q1);
    let (b_u, b_v) = partials(r, q2);
    Ok(sub(r, &mul(r, &a_u, &b_v), &mul(r, &a_v, &b_u)))
}

/// `b^2 - 4ac` of `a u^2 + b uv + c v^2`.
pub fn discriminant<R: Ring>(r: &R, q: &BinaryForm<R::Elem>) -> R::Elem {
    assert_eq!(q.degree(), 2);
    let [a, b, c] = [&q.coeffs[0], &q.coeffs[1], &q.coeffs[2]];
    r.sub(&r.mul(b, b), &r.scale_i64(&r.mul(a, c), 4))
}

pub fn to_json<F: GwField>(k: &F, f: &BinaryForm<F::Elem>) -> Value {
    let c: Vec<String> = f.coeffs.iter().map(|x| k.format(x)).collect();
    json!({"degree": f.degree(), "coeffs": c})
}

pub fn from_json<F: GwField>(k: &F, v: &Value) -> Result<BinaryForm<F::Elem>> {
    let err = |m: &str| Error::Parse { location: "binary form".into(), message: m.into() };
    let d = v.get("degree").and_then(Value::as_u64).ok_or_else(|| err("missing degree"))? as usize;
    let cs = v.get("coeffs").and_then(Value::as_array).ok_or_else(|| err("missing coeffs"))?;
    if cs.len() != d + 1 {
        return Err(err("need degree + 1 coefficients"));
    }
    let coeffs = cs
        .iter()
        .map(|c| c.as_str().ok_or_else(|| err("coefficients are strings")).and_then(|s| k.parse(s)))
        .collect::<Result<Vec<_>>>()?;
    Ok(BinaryForm::new(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::{PrimeField, Rationals};
    use num_rational::BigRational;

    fn q(v: &[i64]) -> BinaryForm<BigRational> {
        BinaryForm::new(v.iter().map(|&n| BigRational::from_integer(n.into())).collect())
    }

    #[test]
    fn resultant_examples() {
        let k = Rationals;
        let one = BigRational::from_integer(1.into());
        assert_eq!(resultant(&k, &q(&[1, 0, 0]), &q(&[1, 0, 1])), one);
        assert_eq!(resultant(&k, &q(&[1, 2, 3]), &q(&[1, 2, 3])), BigRational::from_integer(0.into()));
        assert_eq!(resultant(&k, &q(&[0, 1, 0]), &q(&[1, 0, -1])), -one);
    }

    #[test]
    fn gcd_examples() {
        let k = PrimeField::new(7).unwrap();
        let f = BinaryForm::new(vec![0, 0, 1, 0, 0]); // u^2 v^2
        let g = BinaryForm::new(vec![1, 0, 1, 0, 0]); // u^2 (u^2 + v^2)
        let (h, a, b) = gcd_and_divide(&k, &f, &g).unwrap();
        assert_eq!(h.coeffs, vec![1, 0, 0]);
        assert_eq!(a.coeffs, vec![0, 0, 1]);
        assert_eq!(b.coeffs, vec![1, 0, 1]);
        let (h, _, _) = gcd_and_divide(&k, &BinaryForm::new(vec![1, 0, 1]), &BinaryForm::new(vec![1, 0, 6])).unwrap();
        assert_eq!(h.coeffs, vec![1]);
        let (h, _, _) = gcd_and_divide(&k, &zero(&k, 2), &BinaryForm::new(vec![0, 3, 1])).unwrap();
        assert_eq!(h.coeffs, vec![0, 1, 5]);
    }

    #[test]
    fn matrix_a_examples() {
        let k = Rationals;
        let (q1, q2, q3) = (q(&[1, 0, 0]), q(&[1, 0, 1]), q(&[0, 0, 1]));
        let p = [mul(&k, &q2, &q3), mul(&k, &q1, &q3), mul(&k, &q1, &q2)];
        assert_eq!(det_a(&k, &p), BigRational::from_integer(1.into()));
        let f = PrimeField::new(7).unwrap();
        let p = [
            BinaryForm::new(vec![1, 0, 0, 0, 0]),
            BinaryForm::new(vec![0, 1, 0, 0, 0]),
            BinaryForm::new(vec![0, 0, 1, 0, 0]),
        ];
        assert_eq!(det_a(&f, &p), 0);
        let rel = kernel_relation(&f, &p).unwrap();
        assert!(is_zero(&f, &combine(&f, &rel, &p)));
        let zeros = [zero(&f, 4), zero(&f, 4), zero(&f, 4)];
        assert_eq!(det_a(&f, &zeros), 0);
    }

    #[test]
    fn wronskian_examples() {
        let k = Rationals;
        assert_eq!(wronskian(&k, &q(&[1, 0, 0]), &q(&[0, 0, 1])).unwrap(), q(&[0, 4, 0]));
        assert_eq!(wronskian(&k, &q(&[1, 0, 0]), &q(&[1, 0, 1])).unwrap(), q(&[0, 4, 0]));
        assert_eq!(wronskian(&k, &q(&[1, 1, 0]), &q(&[1, 1, 0])).unwrap_err(), Error::DegenerateCover);
    }
}
