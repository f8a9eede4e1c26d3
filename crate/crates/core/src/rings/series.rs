//! Truncated power series `R[[t]]/(t^N)` and Laurent series with explicit
//! valuation and precision.

use super::Ring;
use crate::error::{Error, Result};

/// `R[[t]]/(t^prec)`; elements are dense coefficient vectors of length
/// `prec`.
#[derive(Clone, Debug)]
pub struct SeriesRing<R: Ring> {
    pub base: R,
    pub prec: usize,
}

impl<R: Ring> SeriesRing<R> {
    pub fn new(base: R, prec: usize) -> Self {
        SeriesRing { base, prec }
    }

    pub fn constant(&self, c: R::Elem) -> Vec<R::Elem> {
        let mut v = vec![self.base.zero(); self.prec];
        if self.prec > 0 {
            v[0] = c;
        }
        v
    }

    /// `c t^k` (zero when `k >= prec`).
    pub fn monomial(&self, c: R::Elem, k: usize) -> Vec<R::Elem> {
        let mut v = vec![self.base.zero(); self.prec];
        if k < self.prec {
            v[k] = c;
        }
        v
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self, x: &[R::Elem]) -> Option<usize> {
        x.iter().position(|c| !self.base.is_zero(c))
    }

    /// Coefficients below `n` of the product, for `n <= prec`.
    pub fn mul_to(&self, a: &[R::Elem], b: &[R::Elem], n: usize) -> Vec<R::Elem> {
        let va = self.valuation(a).unwrap_or(n);
        let vb = self.valuation(b).unwrap_or(n);
        let mut out = vec![self.base.zero(); n];
        let mut terms = Vec::new();
        for (k, slot) in out.iter_mut().enumerate().skip(va + vb) {
            terms.clear();
            for i in va..=k - vb {
                terms.push((&a[i], &b[k - i]));
            }
            *slot = self.base.sum_of_products(&terms);
        }
        out
    }
}

impl<R: Ring> Ring for SeriesRing<R> {
    type Elem = Vec<R::Elem>;

    fn zero(&self) -> Self::Elem {
        vec![self.base.zero(); self.prec]
    }
    fn one(&self) -> Self::Elem {
        self.constant(self.base.one())
    }
    fn from_i64(&self, n: i64) -> Self::Elem {
        self.constant(self.base.from_i64(n))
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.base.sub(x, y)).collect()
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.iter().map(|x| self.base.neg(x)).collect()
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul_to(a, b, self.prec)
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.iter().all(|x| self.base.is_zero(x))
    }
}

/// `sum_{i >= valuation} a_i t^i`, known modulo `t^precision`. A series
/// with no nonzero coefficient before the horizon is zero within
/// precision and has empty `coeffs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries<E> {
    pub valuation: i64,
    pub coeffs: Vec<E>,
    pub precision: i64,
}

impl<E: Clone> LaurentSeries<E> {
    /// Wraps `t^shift * sum x_i t^i` with `x` known below `x.len()`.
    pub fn from_truncated<R: Ring<Elem = E>>(r: &R, x: &[E], shift: i64) -> Self {
        let precision = shift + x.len() as i64;
        match x.iter().position(|c| !r.is_zero(c)) {
            Some(v) => LaurentSeries {
                valuation: shift + v as i64,
                coeffs: x[v..].to_vec(),
                precision,
            },
            None => LaurentSeries {
                valuation: precision,
                coeffs: Vec::new(),
                precision,
            },
        }
    }

    pub fn is_zero_within_precision(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Leading coefficient and valuation.
    pub fn leading(&self) -> Result<(i64, &E)> {
        self.coeffs
            .first()
            .map(|c| (self.valuation, c))
            .ok_or(Error::ZeroWithinPrecision(self.precision.max(0) as usize))
    }

    /// Product; the relative precision is the smaller of the two.
    pub fn mul<R: Ring<Elem = E>>(&self, r: &R, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            let v = self.valuation + other.valuation;
            return LaurentSeries { valuation: v, coeffs: Vec::new(), precision: v };
        }
        let n = self.coeffs.len().min(other.coeffs.len());
        let s = SeriesRing::new(r.clone(), n);
        let prod = s.mul_to(&self.coeffs[..n], &other.coeffs[..n], n);
        LaurentSeries::from_truncated(r, &prod, self.valuation + other.valuation)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::PrimeField;

    #[test]
    fn truncated_product() {
        let k = PrimeField::new(7).unwrap();
        let s = SeriesRing::new(k, 4);
        // (1 + t)(1 - t) = 1 - t^2
        let a = vec![1, 1, 0, 0];
        let b = vec![1, 6, 0, 0];
        assert_eq!(s.mul(&a, &b), vec![1, 0, 6, 0]);
        // (1 - t)^{-1} = 1 + t + t^2 + t^3 mod t^4
        assert_eq!(s.mul(&b, &vec![1, 1, 1, 1]), s.one());
    }

    #[test]
    fn laurent_valuation_and_precision() {
        let k = PrimeField::new(7).unwrap();
        let x = LaurentSeries::from_truncated(&k, &[0, 0, 3, 4], 0);
        assert_eq!(x.leading().unwrap(), (2, &3));
        let y = LaurentSeries::from_truncated(&k, &[5, 1], 1);
        let z = x.mul(&k, &y);
        assert_eq!(z.valuation, 3);
        assert_eq!(z.coeffs, vec![1, (3 + 20) % 7]);
        let zero = LaurentSeries::from_truncated(&k, &[0, 0, 0], 0);
        assert_eq!(zero.leading().unwrap_err(), Error::ZeroWithinPrecision(3));
    }
}
