//! Grothendieck-Witt classes over fields with decidable square classes.
//!
//! A class is kept as `h H + <a_1> + ... + <a_r>` with every `a_i` a
//! square-class representative and no pair `<a> + <-a>` left among the
//! entries. Over finite fields (rank, discriminant) is a complete
//! invariant; over Q equality also compares signatures and the Hasse
//! invariants at 2 and at the primes dividing an entry.

pub mod hasse;
pub mod springer;
pub mod trace;

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::rings::{FieldHandle, GwField};

pub use springer::{embed, springer_normalize, springer_split, Parity, SpringerPair};
pub use trace::{diagonalize_gram, trace_form, trace_form_of_class};

#[derive(Clone, Debug)]
pub struct GwForm<F: GwField> {
    field: F,
    hyperbolic: usize,
    entries: Vec<F::Elem>,
}

/// Rank, discriminant and (over Q) signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GwInvariants {
    pub rank: usize,
    pub disc: String,
    pub signature: Option<i64>,
}

impl GwInvariants {
    pub fn to_json(&self) -> Value {
        json!({"rank": self.rank, "disc": self.disc, "signature": self.signature})
    }
}

impl<F: GwField> GwForm<F> {
    pub fn zero(field: &F) -> Self {
        GwForm { field: field.clone(), hyperbolic: 0, entries: Vec::new() }
    }

    /// `<a_1> + ... + <a_n>`; zero entries are rejected.
    pub fn diag(field: &F, entries: &[F::Elem]) -> Result<Self> {
        let mut f = GwForm { field: field.clone(), hyperbolic: 0, entries: Vec::new() };
        for a in entries {
            f.entries.push(field.class_rep(a)?);
        }
        f.normalize()?;
        Ok(f)
    }

    pub fn rank_one(field: &F, a: &F::Elem) -> Result<Self> {
        Self::diag(field, std::slice::from_ref(a))
    }

    /// `n H`.
    pub fn hyperbolic(field: &F, n: usize) -> Self {
        GwForm { field: field.clone(), hyperbolic: n, entries: Vec::new() }
    }

    /// `n <1>`.
    pub fn ones(field: &F, n: usize) -> Self {
        GwForm { field: field.clone(), hyperbolic: 0, entries: vec![field.one(); n] }
            .normalized()
    }

    fn normalized(mut self) -> Self {
        self.normalize().expect("entries are class representatives");
        self
    }

    /// Cancels `<c> + <-c>` pairs among the entries.
    fn normalize(&mut self) -> Result<()> {
        let k = &self.field;
        let mut counts: BTreeMap<F::Elem, usize> = BTreeMap::new();
        for a in self.entries.drain(..) {
            *counts.entry(a).or_insert(0) += 1;
        }
        let classes: Vec<F::Elem> = counts.keys().cloned().collect();
        for c in classes {
            let neg = k.class_rep(&k.neg(&c))?;
            let nc = counts[&c];
            if nc == 0 {
                continue;
            }
            if neg == c {
                let pairs = nc / 2;
                self.hyperbolic += pairs;
                *counts.get_mut(&c).unwrap() -= 2 * pairs;
            } else if let Some(&nn) = counts.get(&neg) {
                let pairs = nc.min(nn);
                self.hyperbolic += pairs;
                *counts.get_mut(&c).unwrap() -= pairs;
                *counts.get_mut(&neg).unwrap() -= pairs;
            }
        }
        for (c, n) in counts {
            self.entries.extend(std::iter::repeat_n(c, n));
        }
        Ok(())
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn rank(&self) -> usize {
        2 * self.hyperbolic + self.entries.len()
    }
    pub fn hyperbolic_count(&self) -> usize {
        self.hyperbolic
    }
    /// Entries left after cancelling hyperbolic pairs.
    pub fn remainder(&self) -> &[F::Elem] {
        &self.entries
    }

    /// All diagonal entries, each `H` written as `<1> + <-1>`.
    pub fn all_entries(&self) -> Vec<F::Elem> {
        let k = &self.field;
        let mut v = Vec::with_capacity(self.rank());
        for _ in 0..self.hyperbolic {
            v.push(k.one());
            v.push(k.neg(&k.one()));
        }
        v.extend(self.entries.iter().cloned());
        v
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut f = self.clone();
        f.hyperbolic += other.hyperbolic;
        f.entries.extend(other.entries.iter().cloned());
        f.normalized()
    }

    /// `n phi`.
    pub fn times(&self, n: usize) -> Self {
        let mut f = GwForm { field: self.field.clone(), hyperbolic: self.hyperbolic * n, entries: Vec::new() };
        for _ in 0..n {
            f.entries.extend(self.entries.iter().cloned());
        }
        f.normalized()
    }

    /// `<a> phi`.
    pub fn scale(&self, a: &F::Elem) -> Result<Self> {
        let k = &self.field;
        let scaled: Vec<F::Elem> = self.entries.iter().map(|e| k.mul(e, a)).collect();
        let mut f = Self::diag(k, &scaled)?;
        f.hyperbolic += self.hyperbolic;
        Ok(f)
    }

    /// Product of the entries, as a square-class representative.
    pub fn discriminant(&self) -> F::Elem {
        let k = &self.field;
        let mut d = if self.hyperbolic % 2 == 1 { k.neg(&k.one()) } else { k.one() };
        for e in &self.entries {
            d = k.mul(&d, e);
        }
        k.class_rep(&d).expect("entries are nonzero")
    }

    /// Number of positive minus negative entries, when the field is ordered.
    pub fn signature(&self) -> Option<i64> {
        // an unordered field has no signature even for a hyperbolic form
        self.field.real_sign(&self.field.one())?;
        let mut s = 0i64;
        for e in &self.entries {
            s += self.field.real_sign(e)? as i64;
        }
        Some(s)
    }

    pub fn invariants(&self) -> GwInvariants {
        GwInvariants {
            rank: self.rank(),
            disc: self.field.format(&self.discriminant()),
            signature: self.signature(),
        }
    }

    /// Equality in GW of the base field.
    pub fn equals(&self, other: &Self) -> Result<bool> {
        if self.field.handle() != other.field.handle() {
            return Err(Error::Unsupported("forms over different fields".into()));
        }
        if self.rank() != other.rank() || self.signature() != other.signature() {
            return Ok(false);
        }
        let k = &self.field;
        if !k.same_class(&self.discriminant(), &other.discriminant())? {
            return Ok(false);
        }
        if self.field.handle() != FieldHandle::Rationals {
            return Ok(true);
        }
        if self.rank() <= 1 || (self.hyperbolic == other.hyperbolic && self.entries == other.entries) {
            return Ok(true);
        }
        k.hasse_agree(&self.all_entries(), &other.all_entries())?.ok_or(Error::UndecidedOverQ)
    }

    /// JSON `{"base": handle, "entries": [...]}`.
    pub fn to_json(&self) -> Value {
        let entries: Vec<String> = self.all_entries().iter().map(|e| self.field.format(e)).collect();
        json!({"base": self.field.handle().to_string(), "entries": entries})
    }

    pub fn from_json(field: &F, v: &Value) -> Result<Self> {
        let err = |m: &str| Error::Parse { location: "GW form".into(), message: m.into() };
        let base = v.get("base").and_then(Value::as_str).ok_or_else(|| err("missing base"))?;
        if FieldHandle::parse(base)? != field.handle() {
            return Err(err("base does not match the field"));
        }
        let entries = v.get("entries").and_then(Value::as_array).ok_or_else(|| err("missing entries"))?;
        let elems = entries
            .iter()
            .map(|e| e.as_str().ok_or_else(|| err("entries must be strings")).and_then(|s| field.parse(s)))
            .collect::<Result<Vec<_>>>()?;
        Self::diag(field, &elems)
    }
}

impl<F: GwField> fmt::Display for GwForm<F> {
    /// Compact display such as `930H+15<1>`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.hyperbolic > 0 {
            parts.push(if self.hyperbolic == 1 { "H".to_string() } else { format!("{}H", self.hyperbolic) });
        }
        let mut i = 0;
        while i < self.entries.len() {
            let mut j = i;
            while j < self.entries.len() && self.entries[j] == self.entries[i] {
                j += 1;
            }
            let n = j - i;
            let e = self.field.format(&self.entries[i]);
            parts.push(if n == 1 { format!("<{e}>") } else { format!("{n}<{e}>") });
            i = j;
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}

impl<F: GwField> std::iter::Sum for GwForm<F> {
    fn sum<I: Iterator<Item = Self>>(mut iter: I) -> Self {
        let first = iter.next().expect("sum of at least one form");
        iter.fold(first, |acc, x| acc.add(&x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::{PrimeField, Rationals};
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn rational_examples() {
        let k = Rationals;
        let a = GwForm::diag(&k, &[q(2)]).unwrap();
        let b = GwForm::diag(&k, &[q(8)]).unwrap();
        assert!(a.equals(&b).unwrap());
        let h = GwForm::diag(&k, &[q(1), q(-1)]).unwrap();
        let h5 = GwForm::diag(&k, &[q(5), q(-5)]).unwrap();
        assert!(h.equals(&h5).unwrap());
        assert_eq!(h5.hyperbolic_count(), 1);
        assert!(!GwForm::diag(&k, &[q(2)]).unwrap().equals(&GwForm::diag(&k, &[q(3)]).unwrap()).unwrap());
        let u1 = GwForm::diag(&k, &[q(1), q(1)]).unwrap();
        let u2 = GwForm::diag(&k, &[q(2), q(2)]).unwrap();
        assert!(u1.equals(&u2).unwrap());
        let u3 = GwForm::diag(&k, &[q(3), q(3)]).unwrap();
        assert!(!u1.equals(&u3).unwrap());
        assert_eq!(GwForm::diag(&k, &[q(0)]).unwrap_err(), Error::ZeroInput);
    }

    #[test]
    fn finite_field_total() {
        let k = PrimeField::new(7).unwrap();
        let mut entries = vec![1u64; 1445];
        entries.extend(std::iter::repeat_n(6u64, 1430));
        let f = GwForm::diag(&k, &entries).unwrap();
        assert_eq!(f.rank(), 2875);
        assert_eq!(f.invariants(), GwInvariants { rank: 2875, disc: "1".into(), signature: None });
        let g = GwForm::hyperbolic(&k, 1430).add(&GwForm::ones(&k, 15));
        assert!(f.equals(&g).unwrap());
        assert_eq!(g.to_string(), "1430H+15<1>");
    }

    #[test]
    fn signature_and_json() {
        let k = Rationals;
        let f = GwForm::hyperbolic(&k, 3).add(&GwForm::diag(&k, &[q(2), q(-3), q(5)]).unwrap());
        assert_eq!(f.signature(), Some(1));
        let back = GwForm::from_json(&k, &f.to_json()).unwrap();
        assert_eq!(back.to_string(), f.to_string());
    }

    #[test]
    fn hyperbolic_forms_over_finite_fields_compare_by_discriminant() {
        let k = PrimeField::new(7).unwrap();
        let h3 = GwForm::hyperbolic(&k, 3);
        let mixed = GwForm::hyperbolic(&k, 1).add(&GwForm::ones(&k, 4));
        assert_eq!(h3.signature(), None);
        assert!(h3.equals(&mixed).unwrap());
        assert!(GwForm::hyperbolic(&k, 2).equals(&GwForm::ones(&k, 4)).unwrap());
        assert!(!GwForm::hyperbolic(&k, 2).equals(&GwForm::diag(&k, &[1, 1, 1, 3]).unwrap()).unwrap());
    }
}
