//! Quintic forms in five variables.

use serde_json::{json, Value};

use super::mpoly::MPoly;
use crate::binforms::BinaryForm;
use crate::error::{Error, Result};
use crate::rings::matrix::Matrix;
use crate::rings::{GwField, Ring};

#[derive(Clone, Debug)]
pub struct Quintic<R: Ring> {
    pub field: R,
    pub poly: MPoly<R::Elem, 5>,
}

impl<R: Ring> Quintic<R> {
    pub fn new(field: &R, terms: Vec<([u8; 5], R::Elem)>) -> Result<Self> {
        let mut poly = MPoly::zero();
        for (e, c) in terms {
            if e.iter().map(|&x| x as u32).sum::<u32>() != 5 {
                return Err(Error::Parse {
                    location: format!("term {e:?}"),
                    message: "exponents must sum to 5".into(),
                });
            }
            poly.add_term(field, e, c);
        }
        Ok(Quintic { field: field.clone(), poly })
    }

    pub fn from_poly(field: &R, poly: MPoly<R::Elem, 5>) -> Self {
        debug_assert!(poly.terms.keys().all(|e| e.iter().map(|&x| x as u32).sum::<u32>() == 5));
        Quintic { field: field.clone(), poly }
    }

    /// `X_0^5 + ... + X_4^5`.
    pub fn fermat(field: &R) -> Self {
        let terms = (0..5)
            .map(|i| {
                let mut e = [0; 5];
                e[i] = 5;
                (e, field.one())
            })
            .collect();
        Self::new(field, terms).expect("degree 5")
    }

    pub fn eval(&self, x: &[R::Elem; 5]) -> R::Elem {
        self.poly.eval(&self.field, x)
    }

    /// `f(B X)`.
    pub fn substitute(&self, b: &Matrix<R::Elem>) -> Self {
        let r = &self.field;
        let forms: [MPoly<R::Elem, 5>; 5] = std::array::from_fn(|i| MPoly::linear(r, &b[i]));
        Quintic { field: r.clone(), poly: self.poly.substitute(r, &forms) }
    }

    /// `f(u a + v b)` as a binary quintic.
    pub fn restrict(&self, a: &[R::Elem], b: &[R::Elem]) -> BinaryForm<R::Elem> {
        let r = &self.field;
        let forms: [MPoly<R::Elem, 2>; 5] =
            std::array::from_fn(|i| MPoly::linear(r, &[a[i].clone(), b[i].clone()]));
        let g = self.poly.substitute(r, &forms);
        BinaryForm::new((0..=5u8).map(|j| g.coeff(r, &[5 - j, j])).collect())
    }

    pub fn map<G: Ring>(&self, g: &G, f: impl Fn(&R::Elem) -> G::Elem) -> Quintic<G> {
        Quintic { field: g.clone(), poly: self.poly.map(g, f) }
    }
}

impl<F: GwField> Quintic<F> {
    /// JSON `{"field": handle, "terms": [{"exp": [...], "coeff": "..."}]}`.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .poly
            .terms
            .iter()
            .map(|(e, c)| json!({"exp": e, "coeff": self.field.format(c)}))
            .collect();
        json!({"field": self.field.handle().to_string(), "terms": terms})
    }

    pub fn from_json(field: &F, v: &Value) -> Result<Self> {
        let err = |loc: String, m: &str| Error::Parse { location: loc, message: m.into() };
        let terms = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| err("quintic".into(), "missing terms"))?;
        let mut out = Vec::with_capacity(terms.len());
        for (i, t) in terms.iter().enumerate() {
            let loc = format!("terms[{i}]");
            let exp = t
                .get("exp")
                .and_then(Value::as_array)
                .filter(|a| a.len() == 5)
                .ok_or_else(|| err(loc.clone(), "exp must list 5 exponents"))?;
            let mut e = [0u8; 5];
            for (j, x) in exp.iter().enumerate() {
                e[j] = x.as_u64().filter(|&x| x <= 5).ok_or_else(|| err(loc.clone(), "bad exponent"))? as u8;
            }
            let c = t
                .get("coeff")
                .and_then(Value::as_str)
                .ok_or_else(|| err(loc.clone(), "coeff must be a string"))?;
            out.push((e, field.parse(c)?));
        }
        Self::new(field, out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::PrimeField;

    #[test]
    fn fermat_contains_line() {
        let k = PrimeField::new(11).unwrap();
        let f = Quintic::fermat(&k);
        let r = f.restrict(&[1, 10, 0, 0, 0], &[0, 0, 1, 10, 0]);
        assert!(r.coeffs.iter().all(|&c| c == 0));
        let r = f.restrict(&[1, 0, 0, 0, 0], &[0, 1, 0, 0, 0]);
        assert_eq!(r.coeffs, vec![1, 0, 0, 0, 0, 1]);
        let back = Quintic::from_json(&k, &f.to_json()).unwrap();
        assert_eq!(back.poly, f.poly);
        assert!(Quintic::new(&k, vec![([1, 1, 1, 1, 0], 1)]).is_err());
    }
}
