//! Randomized property suites behind `gwlines verify`. Every trial draws
//! from its own stream of one seeded generator, so a suite's verdict and
//! counterexamples depend only on the seed.

use std::fmt;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::binforms::{self, BinaryForm};
use crate::error::{Error, Result};
use crate::fermat::lemmas::{hyperbolic_trace_holds, quadratic_holds, transitivity_holds, zeta5_holds};
use crate::fermat::toy::local_structure_check;
use crate::gw::springer::{constant_series, springer_normalize, Parity};
use crate::gw::{embed, springer_split, GwForm, SpringerPair};
use crate::lines::normal::{jacobian_at_origin, local_index_simple, local_section, normalize_line, LinePlane};
use crate::lines::oracle::Oracle;
use crate::lines::planted::{planted_line, random_form, random_invertible};
use crate::par;
use crate::rings::matrix::{self, Matrix};
use crate::rings::series::LaurentSeries;
use crate::rings::{EtaleAlgebra, FiniteField, GaloisField, GwField, PrimeField, Rationals, Ring};

/// Largest coefficient numerator and denominator drawn over Q.
pub const Q_HEIGHT: i64 = 20;
/// Counterexamples kept per suite.
const MAX_DUMP: usize = 5;

/// Field-element sampler shared across trial threads.
pub type Sample<'a, F> = &'a (dyn Fn(&mut ChaCha8Rng) -> <F as Ring>::Elem + Sync);

pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// `a/b` with `|a|, b <= Q_HEIGHT`.
pub fn small_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let n = rng.gen_range(-Q_HEIGHT..=Q_HEIGHT);
    let d = rng.gen_range(1..=Q_HEIGHT);
    BigRational::new(n.into(), d.into())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: String,
    pub field: String,
    pub trials: usize,
    pub failures: Vec<String>,
    /// Failures beyond the dumped ones.
    pub more: usize,
}

impl SuiteReport {
    fn collect(name: &str, field: String, outcomes: Vec<std::result::Result<(), String>>) -> Self {
        let trials = outcomes.len();
        let failures: Vec<String> = outcomes.into_iter().filter_map(|o| o.err()).collect();
        let more = failures.len().saturating_sub(MAX_DUMP);
        SuiteReport { name: name.into(), field, trials, failures: failures.into_iter().take(MAX_DUMP).collect(), more }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn failure_count(&self) -> usize {
        self.failures.len() + self.more
    }

    pub fn merge(reports: Vec<SuiteReport>) -> SuiteReport {
        let name = reports.first().map(|r| r.name.clone()).unwrap_or_default();
        let field = reports.iter().map(|r| r.field.as_str()).collect::<Vec<_>>().join(",");
        let trials = reports.iter().map(|r| r.trials).sum();
        let mut failures = Vec::new();
        let mut more = 0;
        for r in reports {
            more += r.more;
            for f in r.failures {
                if failures.len() < MAX_DUMP {
                    failures.push(format!("[{}] {f}", r.field));
                } else {
                    more += 1;
                }
            }
        }
        SuiteReport { name, field, trials, failures, more }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.name,
            "field": self.field,
            "trials": self.trials,
            "passed": self.passed(),
            "failures": self.failure_count(),
            "counterexamples": self.failures,
        })
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "pass" } else { "FAIL" };
        write!(f, "{} over {}: {} trials, {} failures: {verdict}", self.name, self.field, self.trials, self.failure_count())?;
        for c in &self.failures {
            write!(f, "\n  counterexample: {c}")?;
        }
        Ok(())
    }
}

fn show<F: GwField>(k: &F, fs: &[&BinaryForm<F::Elem>]) -> String {
    fs.iter()
        .map(|q| format!("[{}]", q.coeffs.iter().map(|c| k.format(c)).collect::<Vec<_>>().join(",")))
        .collect::<Vec<_>>()
        .join(" ")
}

fn check(ok: bool, dump: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(dump())
    }
}

fn run<F: GwField>(
    name: &str,
    k: &F,
    trials: usize,
    seed: u64,
    trial: impl Fn(&mut ChaCha8Rng) -> std::result::Result<(), String> + Sync + Send,
) -> SuiteReport {
    let outcomes = par::map_indexed(trials, |i| trial(&mut trial_rng(seed, i)));
    SuiteReport::collect(name, k.handle().to_string(), outcomes)
}

/// `det A(Q_2 Q_3, Q_1 Q_3, Q_1 Q_2) = Res(Q_1,Q_2) Res(Q_2,Q_3) Res(Q_1,Q_3)`.
pub fn res_det<F: GwField>(k: &F, trials: usize, seed: u64, sample: Sample<F>) -> SuiteReport {
    run("res-det", k, trials, seed, |rng| {
        let q: [BinaryForm<F::Elem>; 3] = std::array::from_fn(|_| random_form::<F, _>(2, rng, sample));
        let m = |a: usize, b: usize| binforms::mul(k, &q[a], &q[b]);
        let lhs = binforms::det_a(k, &[m(1, 2), m(0, 2), m(0, 1)]);
        let res = |a: usize, b: usize| binforms::resultant(k, &q[a], &q[b]);
        let rhs = k.mul(&k.mul(&res(0, 1), &res(1, 2)), &res(0, 2));
        check(lhs == rhs, || format!("Q = {} det A = {} product = {}", show(k, &[&q[0], &q[1], &q[2]]), k.format(&lhs), k.format(&rhs)))
    })
}

/// `det A(Q_2^2, Q_1 S, Q_1 Q_2) = Res(Q_1,Q_2)^2 Res(S,Q_2)`.
pub fn tacnode<F: GwField>(k: &F, trials: usize, seed: u64, sample: Sample<F>) -> SuiteReport {
    run("tacnode", k, trials, seed, |rng| {
        let [q1, q2, s]: [BinaryForm<F::Elem>; 3] = std::array::from_fn(|_| random_form::<F, _>(2, rng, sample));
        let p = [binforms::mul(k, &q2, &q2), binforms::mul(k, &q1, &s), binforms::mul(k, &q1, &q2)];
        let lhs = binforms::det_a(k, &p);
        let r12 = binforms::resultant(k, &q1, &q2);
        let rhs = k.mul(&k.mul(&r12, &r12), &binforms::resultant(k, &s, &q2));
        check(lhs == rhs, || format!("Q1 Q2 S = {} det A = {} rhs = {}", show(k, &[&q1, &q2, &s]), k.format(&lhs), k.format(&rhs)))
    })
}

/// `P_i = R_i(Q_1, Q_2)` for quadratics `R_i` with coefficient matrix `N`:
/// `det A = Res(Q_1,Q_2)^3 (det N)^2`.
pub fn cover<F: GwField>(k: &F, trials: usize, seed: u64, sample: Sample<F>) -> SuiteReport {
    run("cover", k, trials, seed, |rng| {
        let [q1, q2]: [BinaryForm<F::Elem>; 2] = std::array::from_fn(|_| random_form::<F, _>(2, rng, sample));
        let n: Matrix<F::Elem> = (0..3).map(|_| (0..3).map(|_| sample(rng)).collect()).collect();
        let basis = [binforms::mul(k, &q1, &q1), binforms::mul(k, &q1, &q2), binforms::mul(k, &q2, &q2)];
        let p: [BinaryForm<F::Elem>; 3] = std::array::from_fn(|i| {
            (0..3).fold(binforms::zero(k, 4), |acc, j| binforms::add(k, &acc, &binforms::scale(k, &basis[j], &n[i][j])))
        });
        let lhs = binforms::det_a(k, &p);
        let r = binforms::resultant(k, &q1, &q2);
        let dn = matrix::det_ring(k, &n);
        let rhs = k.mul(&k.pow(&r, 3), &k.mul(&dn, &dn));
        check(lhs == rhs, || {
            let rows: Vec<String> = n.iter().map(|row| row.iter().map(|c| k.format(c)).collect::<Vec<_>>().join(",")).collect();
            format!("Q1 Q2 = {} N = [{}] det A = {} rhs = {}", show(k, &[&q1, &q2]), rows.join("; "), k.format(&lhs), k.format(&rhs))
        })
    })
}

/// Type via the double-point oracle equals `<det A>` on planted simple
/// lines of scrambled random quintics over `F_p`.
pub fn theorem(p: u64, trials: usize, seed: u64) -> Result<SuiteReport> {
    let oracle = Oracle::new(p)?;
    let k = oracle.prime_field().clone();
    let kk = k.clone();
    let sample = move |r: &mut ChaCha8Rng| kk.random(r);
    Ok(run("theorem", &k, trials, seed, |rng| {
        let pl = planted_line(&k, rng, &sample, 12, true);
        let nf = normalize_line(&pl.quintic, &pl.line).map_err(|e| e.to_string())?;
        let idx = local_index_simple(&nf).map_err(|e| e.to_string())?;
        let ty = oracle.type_of_line(&nf.p).map_err(|e| format!("P = {}: {e}", show(&k, &[&nf.p[0], &nf.p[1], &nf.p[2]])))?;
        let ok = ty.equals(&idx).map_err(|e| e.to_string())?;
        check(ok, || format!("P = {} type = {} <det A> = {}", show(&k, &[&nf.p[0], &nf.p[1], &nf.p[2]]), ty, idx))
    }))
}

/// Random monic `f` of degree `d` whose algebra `k[x]/(f)` is etale.
fn random_simple<F: GwField>(k: &F, d: usize, rng: &mut ChaCha8Rng, sample: Sample<F>) -> EtaleAlgebra<F> {
    loop {
        let mut f: Vec<F::Elem> = (0..d).map(|_| sample(rng)).collect();
        f.push(k.one());
        if let Ok(a) = EtaleAlgebra::simple(k.clone(), "x", f) {
            return a;
        }
    }
}

/// Random two-level tower of dimension `a * b`.
fn random_tower<F: GwField>(k: &F, a: usize, b: usize, rng: &mut ChaCha8Rng, sample: Sample<F>) -> EtaleAlgebra<F> {
    loop {
        let mut f: Vec<Vec<F::Elem>> = (0..a).map(|_| vec![sample(rng)]).collect();
        f.push(vec![k.one()]);
        let mut g: Vec<Vec<F::Elem>> = (0..b).map(|_| (0..a).map(|_| sample(rng)).collect()).collect();
        let mut one = vec![k.zero(); a];
        one[0] = k.one();
        g.push(one);
        if let Ok(alg) = EtaleAlgebra::new(k.clone(), vec![("x".into(), f), ("y".into(), g)]) {
            return alg;
        }
    }
}

fn nonzero<F: GwField>(k: &F, rng: &mut ChaCha8Rng, sample: Sample<F>) -> F::Elem {
    loop {
        let a = sample(rng);
        if !k.is_zero(&a) {
            return a;
        }
    }
}

/// The trace-form identities: `zeta5` and `quadr` on random `(alpha, r,
/// lambda)`, `Tr(<1> + <-1>) = nH` on random etale algebras of dimension
/// up to `max_dim`, and two-step traces against the flattened trace. The
/// algebras draw their moduli and elements from `coeff`.
pub fn traces<F: GwField>(k: &F, trials: usize, seed: u64, max_dim: usize, sample: Sample<F>, coeff: Sample<F>) -> SuiteReport {
    run("traces", k, trials, seed, |rng| {
        let err = |e: Error| e.to_string();
        let (alpha, r, lambda) = (nonzero(k, rng, sample), nonzero(k, rng, sample), nonzero(k, rng, sample));
        let f = |a: &F::Elem| k.format(a);
        check(zeta5_holds(k, &alpha, &r).map_err(err)?, || format!("zeta5 alpha = {} r = {}", f(&alpha), f(&r)))?;
        check(quadratic_holds(k, &alpha, &lambda).map_err(err)?, || format!("quadr alpha = {} lambda = {}", f(&alpha), f(&lambda)))?;
        let d = rng.gen_range(1..=max_dim);
        let alg = random_simple(k, d, rng, coeff);
        check(hyperbolic_trace_holds(&alg).map_err(err)?, || format!("hyperbolic trace, modulus {:?}", alg.modulus(0)))?;
        let a = rng.gen_range(1..=max_dim.min(5));
        let b = rng.gen_range(1..=(max_dim / a).clamp(1, 5));
        let tower = random_tower(k, a, b, rng, coeff);
        let c = loop {
            let c: Vec<F::Elem> = (0..tower.dim()).map(|_| coeff(rng)).collect();
            if tower.is_unit(&c) {
                break c;
            }
        };
        check(transitivity_holds(&tower, &c).map_err(err)?, || format!("transitivity, degrees {a}x{b}, c = {c:?}"))
    })
}

fn random_series(fp: &PrimeField, rng: &mut ChaCha8Rng, len: usize) -> LaurentSeries<u64> {
    let mut c: Vec<u64> = (0..len).map(|_| fp.random(rng)).collect();
    c[0] = 1 + rng.gen_range(0..fp.p() - 1);
    LaurentSeries::from_truncated(fp, &c, rng.gen_range(-4..=4))
}

/// Springer splitting over `F_p((t))`: `<t> + <-t> = H`, the split of
/// embedded forms is the identity, and the class of a unit is unchanged by
/// square factors and matches the parity rule.
pub fn springer(p: u64, trials: usize, seed: u64) -> Result<SuiteReport> {
    let fp = PrimeField::new(p)?;
    let k = &fp;
    let prec = 12;
    Ok(run("springer", k, trials, seed, |rng| {
        let err = |e: Error| e.to_string();
        let t = LaurentSeries::from_truncated(k, &[1], 1);
        let mt = LaurentSeries::from_truncated(k, &[k.neg(&1)], 1);
        let h = springer_split(k, &[t, mt]).map_err(err)?;
        check(h.equals(&embed(&GwForm::hyperbolic(k, 1))).map_err(err)?, || format!("<t> + <-t> = {h}"))?;
        let n = rng.gen_range(1..=8);
        let entries: Vec<u64> = (0..n).map(|_| 1 + rng.gen_range(0..p - 1)).collect();
        let phi = GwForm::diag(k, &entries).map_err(err)?;
        let split = springer_split(k, &entries.iter().map(|a| constant_series::<PrimeField>(a, prec)).collect::<Vec<_>>()).map_err(err)?;
        let ok = split.odd.rank() == 0 && split.even.equals(&phi).map_err(err)? && split.equals(&embed(&phi)).map_err(err)?;
        check(ok, || format!("split(embed({phi})) = {split}"))?;
        let u = random_series(k, rng, 8);
        let s = random_series(k, rng, 8);
        let (pu, au) = springer_normalize(k, &u).map_err(err)?;
        let (pv, av) = springer_normalize(k, &u.mul(k, &s.mul(k, &s))).map_err(err)?;
        let (v, lead) = u.leading().map_err(err)?;
        let rule = if v.rem_euclid(2) == 0 { Parity::Even } else { Parity::Odd };
        let ok = pu == pv && pu == rule && k.same_class(&au, &av).map_err(err)? && k.same_class(&au, lead).map_err(err)?;
        check(ok, || format!("u = {u:?} s = {s:?}: {pu:?} <{au}> vs {pv:?} <{av}>"))?;
        // a mixed form and its H-shifted twin agree
        let mixed = SpringerPair::new(GwForm::ones(k, 1), GwForm::hyperbolic(k, 1).add(&GwForm::rank_one(k, &au).map_err(err)?));
        let shifted = SpringerPair::new(GwForm::hyperbolic(k, 1).add(&GwForm::ones(k, 1)), GwForm::rank_one(k, &au).map_err(err)?);
        check(mixed.equals(&shifted).map_err(err)?, || format!("{mixed} vs {shifted}"))
    }))
}

/// `jacobian_at_origin` against `det A` on random normal forms, invariance
/// of the local index under random changes of coordinates, and `det A = 0`
/// exactly when a linear relation `r_1 P_1 + r_2 P_2 + r_3 P_3 = 0` exists.
pub fn structural<F: GwField>(k: &F, trials: usize, seed: u64, sample: Sample<F>) -> SuiteReport {
    run("structural", k, trials, seed, |rng| {
        let err = |e: Error| e.to_string();
        let nf_pl = planted_line(k, rng, sample, 10, false);
        let nf = normalize_line(&nf_pl.quintic, &nf_pl.line).map_err(err)?;
        let (_, jd) = jacobian_at_origin(k, &local_section(&nf));
        check(jd == nf.det_a(), || format!("jacobian det {} vs det A {}", k.format(&jd), k.format(&nf.det_a())))?;

        let pl = planted_line(k, rng, sample, 10, true);
        let base = normalize_line(&pl.quintic, &pl.line).map_err(err)?.det_a();
        let b = random_invertible(k, 5, rng, sample);
        let binv = matrix::inverse(k, &b).expect("invertible");
        let moved = |a: &[F::Elem]| -> Vec<F::Elem> {
            binv.iter().map(|row| row.iter().zip(a).fold(k.zero(), |acc, (x, y)| k.add(&acc, &k.mul(x, y)))).collect()
        };
        let line = LinePlane::new(k, moved(&pl.line.span[0]), moved(&pl.line.span[1])).map_err(err)?;
        let moved_det = normalize_line(&pl.quintic.substitute(&b), &line).map_err(err)?.det_a();
        check(k.same_class(&moved_det, &base).map_err(err)?, || {
            format!("det A {} became {} after a change of coordinates", k.format(&base), k.format(&moved_det))
        })?;

        // a triple with a planted relation, and an unconstrained one
        let r: [BinaryForm<F::Elem>; 3] = std::array::from_fn(|_| random_form::<F, _>(1, rng, sample));
        let (a, c) = (random_form::<F, _>(3, rng, sample), random_form::<F, _>(3, rng, sample));
        let p3 = binforms::scale(k, &binforms::add(k, &binforms::mul(k, &r[0], &a), &binforms::mul(k, &r[1], &c)), &k.neg(&k.one()));
        let singular = [binforms::mul(k, &r[2], &a), binforms::mul(k, &r[2], &c), p3];
        let free: [BinaryForm<F::Elem>; 3] = std::array::from_fn(|_| random_form::<F, _>(4, rng, sample));
        for p in [singular, free] {
            let d = binforms::det_a(k, &p);
            let rel = binforms::kernel_relation(k, &p);
            let ok = match &rel {
                Some(rel) => k.is_zero(&d) && binforms::is_zero(k, &binforms::combine(k, rel, &p)),
                None => !k.is_zero(&d),
            };
            check(ok, || format!("P = {} det A = {} relation found: {}", show(k, &[&p[0], &p[1], &p[2]]), k.format(&d), rel.is_some()))?;
        }
        Ok(())
    })
}

/// Crossing and smooth two-variable models over `F_p`.
pub fn toy(p: u64, trials: usize, seed: u64) -> Result<SuiteReport> {
    let fp = PrimeField::new(p)?;
    let outcomes = local_structure_check(p, trials, seed)?
        .into_iter()
        .map(|o| check(o.ok, || format!("{} model: valuation {}, class {}", o.model.name(), o.valuation, o.class)))
        .collect();
    Ok(SuiteReport::collect("toy", fp.handle().to_string(), outcomes))
}

pub fn rational_sampler() -> impl Fn(&mut ChaCha8Rng) -> BigRational + Sync {
    small_rational
}

/// Integers in `[-3, 3]`: keeps trace forms over Q of low height, so their
/// square classes factor quickly.
pub fn small_integer_sampler() -> impl Fn(&mut ChaCha8Rng) -> BigRational + Sync {
    |rng: &mut ChaCha8Rng| BigRational::from_integer(rng.gen_range(-3i64..=3).into())
}

pub fn finite_sampler<F: FiniteField + Sync>(k: &F) -> impl Fn(&mut ChaCha8Rng) -> F::Elem + Sync + '_ {
    move |r| k.random(r)
}

/// Runs a generic suite over `Q`, `F_p` or `F_q` named by `field`.
pub fn over_field(
    field: &str,
    q: impl FnOnce(&Rationals, Sample<Rationals>) -> SuiteReport,
    fp: impl FnOnce(&PrimeField, Sample<PrimeField>) -> SuiteReport,
    fq: impl FnOnce(&GaloisField, Sample<GaloisField>) -> SuiteReport,
) -> Result<SuiteReport> {
    use crate::rings::FieldHandle;
    match FieldHandle::parse(field)? {
        FieldHandle::Rationals => Ok(q(&Rationals, &rational_sampler())),
        FieldHandle::PrimeField(p) => {
            let k = PrimeField::new(p)?;
            let s = finite_sampler(&k);
            Ok(fp(&k, &s))
        }
        h @ FieldHandle::FiniteExtension { .. } => {
            let k = GaloisField::from_handle(&h)?;
            let s = finite_sampler(&k);
            Ok(fq(&k, &s))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identities_hold_on_small_runs() {
        let k = PrimeField::new(7).unwrap();
        let s = finite_sampler(&k);
        assert!(res_det(&k, 30, 1, &s).passed());
        assert!(tacnode(&k, 30, 1, &s).passed());
        assert!(cover(&k, 30, 1, &s).passed());
        let q = Rationals;
        let s = rational_sampler();
        assert!(res_det(&q, 10, 1, &s).passed());
        assert!(cover(&q, 10, 1, &s).passed());
    }

    #[test]
    fn a_wrong_identity_is_reported() {
        let k = PrimeField::new(11).unwrap();
        let r = run("always-false", &k, 7, 3, |_| Err("x".into()));
        assert!(!r.passed());
        assert_eq!(r.failure_count(), 7);
        assert_eq!(r.failures.len(), MAX_DUMP);
    }

    #[test]
    fn same_seed_same_report() {
        let k = PrimeField::new(13).unwrap();
        let s = finite_sampler(&k);
        assert_eq!(structural(&k, 5, 9, &s), structural(&k, 5, 9, &s));
        assert!(structural(&k, 5, 9, &s).passed());
    }

    #[test]
    fn springer_and_traces_pass() {
        assert!(springer(7, 20, 2).unwrap().passed());
        let k = PrimeField::new(11).unwrap();
        assert!(traces(&k, 10, 2, 12, &finite_sampler(&k), &finite_sampler(&k)).passed());
    }
}
