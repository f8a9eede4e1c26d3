//! GW of a Laurent series field `k((t))` as pairs of forms over `k`,
//! split by the parity of the t-adic valuation and identified up to the
//! shift `(phi_0 + H, phi_1 - H)`.

use std::fmt;

use super::GwForm;
use crate::error::Result;
use crate::rings::series::LaurentSeries;
use crate::rings::GwField;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// `<u> = <a_m>` for even valuation `m` and `<t a_m>` for odd `m`, where
/// `a_m` is the leading coefficient. Returns the parity and the class of
/// `a_m`.
pub fn springer_normalize<F: GwField>(k: &F, u: &LaurentSeries<F::Elem>) -> Result<(Parity, F::Elem)> {
    let (v, a) = u.leading()?;
    let parity = if v.rem_euclid(2) == 0 { Parity::Even } else { Parity::Odd };
    Ok((parity, k.class_rep(a)?))
}

/// `i(phi_0) + t i(phi_1)`.
#[derive(Clone, Debug)]
pub struct SpringerPair<F: GwField> {
    pub even: GwForm<F>,
    pub odd: GwForm<F>,
}

impl<F: GwField> SpringerPair<F> {
    pub fn new(even: GwForm<F>, odd: GwForm<F>) -> Self {
        SpringerPair { even, odd }
    }

    pub fn rank(&self) -> usize {
        self.even.rank() + self.odd.rank()
    }

    pub fn add(&self, other: &Self) -> Self {
        SpringerPair { even: self.even.add(&other.even), odd: self.odd.add(&other.odd) }
    }

    /// Moves hyperbolic summands of the odd part to the even part.
    pub fn reduced(&self) -> Self {
        let h = self.odd.hyperbolic_count();
        let k = self.even.field();
        let odd_rest = GwForm::diag(k, self.odd.remainder()).expect("remainder entries are nonzero");
        SpringerPair { even: self.even.add(&GwForm::hyperbolic(k, h)), odd: odd_rest }
    }

    /// Whether the class comes from `GW(k)`.
    pub fn in_image_of_embed(&self) -> Result<bool> {
        let r = self.reduced();
        r.odd.equals(&GwForm::zero(r.odd.field()))
    }

    pub fn equals(&self, other: &Self) -> Result<bool> {
        let (a, b) = (self, other);
        let (ra, rb) = (a.odd.rank() as i64, b.odd.rank() as i64);
        if (rb - ra) % 2 != 0 || a.rank() != b.rank() {
            return Ok(false);
        }
        let n = (rb - ra) / 2;
        let k = a.even.field();
        let h = GwForm::hyperbolic(k, n.unsigned_abs() as usize);
        if n >= 0 {
            Ok(a.even.equals(&b.even.add(&h))? && a.odd.add(&h).equals(&b.odd)?)
        } else {
            Ok(a.even.add(&h).equals(&b.even)? && a.odd.equals(&b.odd.add(&h))?)
        }
    }
}

impl<F: GwField> fmt::Display for SpringerPair<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.odd.rank() == 0 {
            write!(f, "i({})", self.even)
        } else {
            write!(f, "i({}) + j({})", self.even, self.odd)
        }
    }
}

/// Splits `<u_1> + ... + <u_n>` over `k((t))` by valuation parity.
pub fn springer_split<F: GwField>(k: &F, entries: &[LaurentSeries<F::Elem>]) -> Result<SpringerPair<F>> {
    let mut even = Vec::new();
    let mut odd = Vec::new();
    for u in entries {
        match springer_normalize(k, u)? {
            (Parity::Even, a) => even.push(a),
            (Parity::Odd, a) => odd.push(a),
        }
    }
    Ok(SpringerPair { even: GwForm::diag(k, &even)?, odd: GwForm::diag(k, &odd)? })
}

/// The inclusion `GW(k) -> GW(k((t)))`.
pub fn embed<F: GwField>(phi: &GwForm<F>) -> SpringerPair<F> {
    SpringerPair { even: phi.clone(), odd: GwForm::zero(phi.field()) }
}

/// The constant Laurent series `a`, as a unit of `k((t))`.
pub fn constant_series<F: GwField>(a: &F::Elem, precision: i64) -> LaurentSeries<F::Elem> {
    LaurentSeries { valuation: 0, coeffs: vec![a.clone()], precision }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::rings::{PrimeField, Ring};

    #[test]
    fn normalization_examples() {
        let k = PrimeField::new(7).unwrap();
        let u = LaurentSeries::from_truncated(&k, &[0, 0, 3, 4], 0);
        assert_eq!(springer_normalize(&k, &u).unwrap(), (Parity::Even, 3));
        let v = LaurentSeries::from_truncated(&k, &[0, 2], 0);
        assert_eq!(springer_normalize(&k, &v).unwrap(), (Parity::Odd, 1));
        let one = LaurentSeries::from_truncated(&k, &[1], 0);
        assert_eq!(springer_normalize(&k, &one).unwrap(), (Parity::Even, 1));
        let z = LaurentSeries::from_truncated(&k, &[0, 0], 0);
        assert_eq!(springer_normalize(&k, &z).unwrap_err(), Error::ZeroWithinPrecision(2));
    }

    #[test]
    fn t_plus_minus_t_is_hyperbolic() {
        let k = PrimeField::new(7).unwrap();
        let t = LaurentSeries::from_truncated(&k, &[0, 1], 0);
        let mt = LaurentSeries::from_truncated(&k, &[0, k.neg(&1)], 0);
        let pair = springer_split(&k, &[t, mt]).unwrap();
        assert!(pair.equals(&embed(&GwForm::hyperbolic(&k, 1))).unwrap());
        assert!(pair.in_image_of_embed().unwrap());
        let three_t2 = LaurentSeries::from_truncated(&k, &[0, 0, 3], 0);
        let s = springer_split(&k, &[three_t2]).unwrap();
        assert!(s.equals(&embed(&GwForm::rank_one(&k, &3).unwrap())).unwrap());
        let t_alone = springer_split(&k, &[LaurentSeries::from_truncated(&k, &[0, 1], 0)]).unwrap();
        assert!(!t_alone.in_image_of_embed().unwrap());
    }
}
