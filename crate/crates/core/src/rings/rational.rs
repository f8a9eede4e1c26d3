//! The rational numbers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::intfactor::{class_representative, exact_sqrt};
use super::{Field, FieldHandle, GwField, Ring};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
}

impl Field for Rationals {
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn characteristic(&self) -> u64 {
        0
    }
}

impl GwField for Rationals {
    fn handle(&self) -> FieldHandle {
        FieldHandle::Rationals
    }

    fn sqrt(&self, a: &BigRational) -> Result<Option<BigRational>> {
        if a.is_zero() {
            return Err(Error::ZeroInput);
        }
        if a.is_negative() {
            return Ok(None);
        }
        let n = exact_sqrt(a.numer().magnitude());
        let d = exact_sqrt(a.denom().magnitude());
        Ok(match (n, d) {
            (Some(n), Some(d)) => Some(BigRational::new(n.into(), d.into())),
            _ => None,
        })
    }

    fn class_rep(&self, a: &BigRational) -> Result<BigRational> {
        if a.is_zero() {
            return Err(Error::ZeroInput);
        }
        let n = a.numer() * a.denom();
        Ok(BigRational::from_integer(class_representative(&n)))
    }

    fn hasse_agree(&self, a: &[BigRational], b: &[BigRational]) -> Result<Option<bool>> {
        let ints = |v: &[BigRational]| -> Vec<BigInt> { v.iter().map(|x| x.numer() * x.denom()).collect() };
        Ok(Some(crate::gw::hasse::hasse_agree(&ints(a), &ints(b))?))
    }

    fn real_sign(&self, a: &BigRational) -> Option<i32> {
        Some(if a.is_negative() {
            -1
        } else if a.is_zero() {
            0
        } else {
            1
        })
    }

    fn format(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }

    fn parse(&self, s: &str) -> Result<BigRational> {
        let err = || Error::Parse {
            location: format!("rational '{s}'"),
            message: "expected integer or a/b".into(),
        };
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| err())?;
        let d: BigInt = d.parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        Ok(BigRational::new(n, d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn four_ninths_is_square() {
        assert_eq!(Rationals.sqrt(&q(4, 9)).unwrap(), Some(q(2, 3)));
        assert_eq!(Rationals.sqrt(&q(-4, 9)).unwrap(), None);
        assert_eq!(Rationals.sqrt(&q(2, 1)).unwrap(), None);
        assert!(Rationals.sqrt(&q(0, 1)).is_err());
    }

    #[test]
    fn stored_reduced() {
        let a = Rationals.parse("6/-4").unwrap();
        assert_eq!(a, q(-3, 2));
        assert_eq!(Rationals.format(&a), "-3/2");
    }

    #[test]
    fn class_representatives() {
        assert_eq!(Rationals.class_rep(&q(8, 1)).unwrap(), q(2, 1));
        assert_eq!(Rationals.class_rep(&q(-3, 2)).unwrap(), q(-6, 1));
        assert!(Rationals.same_class(&q(2, 1), &q(8, 1)).unwrap());
        assert!(!Rationals.same_class(&q(2, 1), &q(-2, 1)).unwrap());
    }
}
