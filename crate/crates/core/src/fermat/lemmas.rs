//! Trace-form identities behind the per-line classes, checked by Gram
//! diagonalization, and the assembly of the total over Q from them.

use crate::error::Result;
use crate::gw::trace::{diagonal_entries, relative_gram};
use crate::gw::{trace_form, trace_form_of_class, GwForm};
use crate::rings::{EtaleAlgebra, GwField, Rationals, Ring};

/// `k[w]/(w^m - alpha)`.
pub fn radical_extension<F: GwField>(k: &F, m: usize, alpha: &F::Elem) -> Result<EtaleAlgebra<F>> {
    let mut modulus = vec![k.neg(alpha)];
    modulus.extend((1..m).map(|_| k.zero()));
    modulus.push(k.one());
    EtaleAlgebra::simple(k.clone(), "w", modulus)
}

/// `Tr_{A/k} <r> = 2H + <5r>` for `A = k[w]/(w^5 - alpha)`.
pub fn zeta5_holds<F: GwField>(k: &F, alpha: &F::Elem, r: &F::Elem) -> Result<bool> {
    let a = radical_extension(k, 5, alpha)?;
    let lhs = trace_form(&a, &a.scalar(r))?;
    let rhs = GwForm::hyperbolic(k, 2).add(&GwForm::rank_one(k, &k.mul(&k.from_i64(5), r))?);
    lhs.equals(&rhs)
}

/// `Tr_{A/k} <lambda w> = H` for `A = k[w]/(w^2 - alpha)`.
pub fn quadratic_holds<F: GwField>(k: &F, alpha: &F::Elem, lambda: &F::Elem) -> Result<bool> {
    let a = radical_extension(k, 2, alpha)?;
    let c = vec![k.zero(), lambda.clone()];
    trace_form(&a, &c)?.equals(&GwForm::hyperbolic(k, 1))
}

/// `Tr_{A/k}(<1> + <-1>) = (dim A) H`.
pub fn hyperbolic_trace_holds<F: GwField>(alg: &EtaleAlgebra<F>) -> Result<bool> {
    let k = alg.base();
    let entries = [alg.one(), alg.neg(&alg.one())];
    trace_form_of_class(alg, &entries)?.equals(&GwForm::hyperbolic(k, alg.dim()))
}

/// `Tr_{B/k} <c>` computed in two steps: diagonalize `Tr_{B/A} <c>` over
/// the subalgebra `A` below the top level, then trace each entry to `k`.
pub fn two_step_trace<F: GwField>(alg: &EtaleAlgebra<F>, c: &[F::Elem]) -> Result<GwForm<F>> {
    let below = alg.truncated(alg.levels() - 1);
    let entries = diagonal_entries(&below, &relative_gram(alg, c))?;
    if below.levels() == 0 {
        return GwForm::diag(alg.base(), &entries.into_iter().map(|e| e[0].clone()).collect::<Vec<_>>());
    }
    trace_form_of_class(&below, &entries)
}

/// The two-step trace agrees with the trace over the flattened algebra.
pub fn transitivity_holds<F: GwField>(alg: &EtaleAlgebra<F>, c: &[F::Elem]) -> Result<bool> {
    two_step_trace(alg, c)?.equals(&trace_form(alg, c)?)
}

/// The total over Q assembled from the identities above.
#[derive(Clone, Debug)]
pub struct LemmaTotal {
    /// `Tr <5>` over `Q[w]/(w^5 - alpha)`.
    pub mult5_per_line: GwForm<Rationals>,
    /// `Tr <lambda w>` over `Q[w]/(w^2 - alpha)`.
    pub mult2_per_line: GwForm<Rationals>,
    /// Per-line class traced over `Q[x,y]/(x^5 - 1, y^5 - 1)`.
    pub mult5_per_split: GwForm<Rationals>,
    pub mult5: GwForm<Rationals>,
    pub mult2: GwForm<Rationals>,
    pub total: GwForm<Rationals>,
}

impl LemmaTotal {
    pub fn rank(&self) -> usize {
        self.total.rank()
    }
    pub fn signature(&self) -> i64 {
        self.total.signature().expect("signature over Q")
    }
}

/// Assembles the total over Q: 15 splits, each contributing the per-line
/// class traced over the 25-dimensional algebra of root pairs, plus 10
/// pairs whose 50-dimensional algebras each carry `H` per line, which
/// traces to `50 H`.
pub fn total_over_q() -> Result<LemmaTotal> {
    let q = Rationals;
    let (alpha, lambda) = (q.from_i64(2), q.from_i64(3));
    let five = radical_extension(&q, 5, &alpha)?;
    let mult5_per_line = trace_form(&five, &five.scalar(&q.from_i64(5)))?;
    let two = radical_extension(&q, 2, &alpha)?;
    let mult2_per_line = trace_form(&two, &[q.zero(), lambda])?;
    let x5 = |len: usize| -> Vec<Vec<_>> {
        (0..6)
            .map(|i| {
                let mut v = vec![q.zero(); len];
                v[0] = match i {
                    0 => q.from_i64(-1),
                    5 => q.one(),
                    _ => q.zero(),
                };
                v
            })
            .collect()
    };
    let roots = EtaleAlgebra::new(q.clone(), vec![("x".into(), x5(1)), ("y".into(), x5(5))])?;
    let lifted: Vec<_> = mult5_per_line.all_entries().iter().map(|e| roots.scalar(e)).collect();
    let mult5_per_split = trace_form_of_class(&roots, &lifted)?;
    let mult5 = mult5_per_split.times(15);
    let mult2 = mult2_per_line.times(10 * 50);
    let total = mult5.add(&mult2);
    Ok(LemmaTotal { mult5_per_line, mult2_per_line, mult5_per_split, mult5, mult2, total })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::PrimeField;

    #[test]
    fn identities_on_fixed_inputs() {
        let k = PrimeField::new(7).unwrap();
        assert!(zeta5_holds(&k, &3, &5).unwrap());
        assert!(quadratic_holds(&k, &3, &2).unwrap());
        let q = Rationals;
        assert!(zeta5_holds(&q, &q.from_i64(-7), &q.from_i64(6)).unwrap());
        assert!(quadratic_holds(&q, &q.from_i64(5), &q.from_i64(-1)).unwrap());
        let a = radical_extension(&q, 4, &q.from_i64(3)).unwrap();
        assert!(hyperbolic_trace_holds(&a).unwrap());
    }

    #[test]
    fn total_over_q_has_signature_15() {
        let t = total_over_q().unwrap();
        let q = Rationals;
        let expected = GwForm::hyperbolic(&q, 62).add(&GwForm::ones(&q, 1));
        assert!(t.mult5_per_split.equals(&expected).unwrap());
        assert_eq!(t.rank(), 2875);
        assert_eq!(t.signature(), 15);
    }
}
