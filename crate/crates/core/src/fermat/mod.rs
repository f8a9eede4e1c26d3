//! The dynamic Euler number of the Fermat quintic.
//!
//! `F = X_0^5 + ... + X_4^5` has 50 one-dimensional families of lines. A
//! deformation `F + t^s G` with general `G` leaves finitely many lines over
//! `k((t))`: five near each of the 375 lines where two families cross
//! (`s = 5`), and two near each of 10 special lines on every family
//! (`s = 2`). Each deformed line is solved order by order over a cyclic
//! layer `K[w]/(w^s - c)`, its Jacobian determinant gives a class in
//! `GW(K((t)))`, and tracing everything down to `F_p` and back through
//! the Springer splitting gives `1445<1> + 1430<-1>`.

pub mod layer;
pub mod lemmas;


pub mod orbits;
pub mod sampler;

pub mod system;
pub mod toy;


use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gw::{trace_form, trace_form_of_class, GwForm, SpringerPair};
use crate::lines::quintic::Quintic;
use crate::rings::{EtaleAlgebra, Field, FiniteField, GaloisField, PrimeField, Ring};

use layer::Layer;
use orbits::{Mult2Orbit, Mult5Orbit};
use system::{ChartSystem, Series, Step};

pub const DEFAULT_PRECISION: usize = 16;
pub const DEFAULT_MARGIN: usize = 4;

/// A deformation direction `G` over F_p with solver settings.
#[derive(Clone, Debug)]
pub struct DeformationSpec {
    pub p: u64,
    pub g: Quintic<PrimeField>,
    /// Seeds root finding in the field factorizations.
    pub seed: u64,
    /// Series are solved modulo `t^precision`.
    pub precision: usize,
    /// Required gap between the Jacobian valuation and the precision.
    pub margin: usize,
}

impl DeformationSpec {
    pub fn new(g: Quintic<PrimeField>, seed: u64) -> Result<Self> {
        let p = g.field.p();
        if p == 2 || p == 5 {
            return Err(Error::BadCharacteristic(p));
        }
        Ok(DeformationSpec { p, g, seed, precision: DEFAULT_PRECISION, margin: DEFAULT_MARGIN })
    }

    pub fn field(&self) -> &PrimeField {
        &self.g.field
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum OrbitKind {
    Mult2,
    Mult5,
}

impl OrbitKind {
    pub fn multiplicity(self) -> usize {
        match self {
            OrbitKind::Mult2 => 2,
            OrbitKind::Mult5 => 5,
        }
    }
    pub fn name(self) -> &'static str {
        match self {
            OrbitKind::Mult2 => "mult2",
            OrbitKind::Mult5 => "mult5",
        }
    }
}

/// A solved system: the chart and the deformed line modulo `t^precision`.
#[derive(Clone, Debug)]
pub struct SolvedLine {
    pub system: ChartSystem,
    pub point: [Series; 6],
}

/// Class of the Jacobian determinant of a deformed line.
#[derive(Clone, Debug)]
pub struct JacobianClass {
    pub valuation: usize,
    /// Leading coefficient, an element of the layer.
    pub leading: Vec<u64>,
    /// `Tr_{L((t))/K((t))} <det J>` split by parity.
    pub per_line: SpringerPair<GaloisField>,
}

/// What one Galois orbit of original lines contributes.
#[derive(Clone, Debug)]
pub struct OrbitContribution {
    pub kind: OrbitKind,
    pub label: String,
    /// Degree over F_p of the field of definition of the original line.
    pub factor_degree: usize,
    /// Deformed lines over the algebraic closure.
    pub lines: usize,
    pub valuation: usize,
    /// Whether the leading coefficient lies in the predicted square class.
    pub leading_class_ok: bool,
    pub per_line: SpringerPair<GaloisField>,
    /// `per_line` traced down to F_p.
    pub traced: SpringerPair<PrimeField>,
}

impl OrbitContribution {
    /// The expected per-line class holds and the parity is right.
    pub fn per_line_ok(&self) -> Result<bool> {
        let k = self.per_line.even.field().clone();
        let expected = match self.kind {
            OrbitKind::Mult5 => SpringerPair::new(
                GwForm::hyperbolic(&k, 2).add(&GwForm::ones(&k, 1)),
                GwForm::zero(&k),
            ),
            OrbitKind::Mult2 => SpringerPair::new(GwForm::zero(&k), GwForm::hyperbolic(&k, 1)),
        };
        self.per_line.equals(&expected)
    }

    /// `per_line` and `traced` as an element of `GW(F_p)`: the traced
    /// pair after moving hyperbolic planes out of the odd slot.
    pub fn traced_class(&self) -> Result<GwForm<PrimeField>> {
        let r = self.traced.reduced();
        if !r.in_image_of_embed()? {
            return Err(Error::TotalMismatch(format!("{} has a nonzero odd part {}", self.label, r.odd)));
        }
        Ok(r.even)
    }

    pub fn expected_valuation(&self) -> usize {
        match self.kind {
            OrbitKind::Mult5 => 8,
            OrbitKind::Mult2 => 3,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.kind.name(),
            "label": self.label,
            "factor_degree": self.factor_degree,
            "lines": self.lines,
            "valuation": self.valuation,
            "leading_class_ok": self.leading_class_ok,
            "per_line": self.per_line.to_string(),
            "traced": self.traced_class().map(|c| c.to_string()).unwrap_or_else(|e| e.to_string()),
        })
    }
}

fn fermat(fp: &PrimeField) -> Quintic<PrimeField> {
    Quintic::fermat(fp)
}

fn zero_point(layer: &Layer, len: usize) -> [Series; 6] {
    std::array::from_fn(|_| vec![layer.zero(); len])
}

fn inverse(k: &GaloisField, a: &[u64]) -> Result<Vec<u64>> {
    k.inv(&a.to_vec()).ok_or_else(|| Error::NonGenericDeformation("zero where a unit is needed".into()))
}

/// Chart, seeds and schedule of a multiplicity-5 orbit. Seeds:
/// `z_1 = w^3/b`, `z'_1 = w^3/a` in `L = K[w]/(w^5 - ab)`, which give
/// `z_1^3 z_1'^2 = a` and `z_1^2 z_1'^3 = b`.
pub fn build_mult5_system(spec: &DeformationSpec, orbit: &Mult5Orbit) -> Result<(ChartSystem, [Series; 6], Vec<Step>)> {
    let k = &orbit.field;
    let layer = Layer::new(k, 5, k.mul(&orbit.a, &orbit.b))?;
    let sys = ChartSystem::new(layer.clone(), &fermat(spec.field()), &spec.g, &orbit.chart(), 5);
    let minus_ten = k.from_i64(-10);
    if sys.g_line(2) != k.mul(&minus_ten, &orbit.a) || sys.g_line(3) != k.mul(&minus_ten, &orbit.b) {
        return Err(Error::NonGenericDeformation(format!("chart of {} does not match its certificate", orbit.label())));
    }
    let n = spec.precision;
    let mut point = zero_point(&layer, n + 4);
    let w3 = layer.pow(&layer.w(), 3);
    point[4][1] = layer.scale_k(&w3, &inverse(k, &orbit.b)?);
    point[5][1] = layer.scale_k(&w3, &inverse(k, &orbit.a)?);
    let mut steps = Vec::new();
    for o in 1..=5 {
        steps.push(Step {
            equations: vec![(0, o), (1, o), (4, o), (5, o)],
            unknowns: (0..4).map(|v| (v, o)).collect(),
            checks: vec![(2, o), (3, o)],
        });
    }
    for o in 6..=n + 3 {
        let mut unknowns: Vec<(usize, usize)> = (0..4).map(|v| (v, o)).collect();
        unknowns.extend([(4, o - 4), (5, o - 4)]);
        steps.push(Step { equations: (0..6).map(|r| (r, o)).collect(), unknowns, checks: Vec::new() });
    }
    Ok((sys, point, steps))
}

pub fn solve_mult5(spec: &DeformationSpec, orbit: &Mult5Orbit) -> Result<SolvedLine> {
    let (system, seed, steps) = build_mult5_system(spec, orbit)?;
    let point = system::solve(&system, seed, &steps, spec.precision)?;
    Ok(SolvedLine { system, point })
}

/// Chart, seeds and schedule of a multiplicity-2 orbit. Seeds:
/// `y_1 = b^2 w/a^2`, `z_1 = -a^4 y_1/b^4` in `L = K[w]/(w^2 + abd)`,
/// which solve `5a^4 y_1 + 5b^4 z_1 = 0` and `y_1^2 = -d b^5/a^3`.
pub fn build_mult2_system(spec: &DeformationSpec, orbit: &Mult2Orbit) -> Result<(ChartSystem, [Series; 6], Vec<Step>)> {
    let k = &orbit.field;
    let abd = k.mul(&k.mul(&orbit.a, &orbit.b), &orbit.d);
    let layer = Layer::new(k, 2, k.neg(&abd))?;
    let sys = ChartSystem::new(layer.clone(), &fermat(spec.field()), &spec.g, &orbit.chart(), 2);
    let minus_ten = k.from_i64(-10);
    if !k.is_zero(&sys.g_line(2).to_vec()) || sys.g_line(3) != k.mul(&minus_ten, &orbit.d) {
        return Err(Error::NonGenericDeformation(format!("chart of {} does not match its certificate", orbit.label())));
    }
    let n = spec.precision;
    let mut point = zero_point(&layer, n + 2);
    let (ia, ib) = (inverse(k, &orbit.a)?, inverse(k, &orbit.b)?);
    let y1 = layer.scale_k(&layer.w(), &k.mul(&k.pow(&orbit.b, 2), &k.pow(&ia, 2)));
    let z1 = layer.scale_k(&y1, &k.neg(&k.mul(&k.pow(&orbit.a, 4), &k.pow(&ib, 4))));
    point[2][1] = y1;
    point[4][1] = z1;
    let mut steps = vec![
        Step { equations: vec![(0, 1), (1, 1)], unknowns: vec![(0, 1), (1, 1)], checks: vec![(2, 1), (3, 1), (4, 1)] },
        Step { equations: vec![(0, 2), (1, 2)], unknowns: vec![(0, 2), (1, 2)], checks: vec![(2, 2), (3, 2)] },
    ];
    for o in 3..=n + 1 {
        steps.push(Step {
            equations: vec![(0, o), (1, o), (2, o), (3, o), (4, o - 1), (5, o - 2)],
            unknowns: vec![(0, o), (1, o), (3, o - 2), (5, o - 2), (2, o - 1), (4, o - 1)],
            checks: Vec::new(),
        });
    }
    Ok((sys, point, steps))
}

pub fn solve_mult2(spec: &DeformationSpec, orbit: &Mult2Orbit) -> Result<SolvedLine> {
    let (system, seed, steps) = build_mult2_system(spec, orbit)?;
    let point = system::solve(&system, seed, &steps, spec.precision)?;
    Ok(SolvedLine { system, point })
}

/// Valuation, leading coefficient and class of `det J(l_t)`.
pub fn jacobian_class(line: &SolvedLine, precision: usize, margin: usize) -> Result<JacobianClass> {
    let det = system::jacobian_det(&line.system, &line.point, precision);
    let layer = &line.system.layer;
    let v = det.iter().position(|c| !layer.is_zero(c)).ok_or(Error::PrecisionExhausted(precision))?;
    if v + margin > precision {
        return Err(Error::PrecisionExhausted(precision));
    }
    let leading = det[v].clone();
    let k = layer.field();
    let form = trace_form(&layer.to_etale()?, &layer.components(&leading))?;
    let per_line = if v % 2 == 0 {
        SpringerPair::new(form, GwForm::zero(k))
    } else {
        SpringerPair::new(GwForm::zero(k), form)
    };
    Ok(JacobianClass { valuation: v, leading, per_line })
}

/// `Tr_{K/F_p}` of a form over `K`.
pub fn trace_to_prime(k: &GaloisField, phi: &GwForm<GaloisField>) -> Result<GwForm<PrimeField>> {
    let fp = k.prime_field().clone();
    let alg = EtaleAlgebra::simple(fp.clone(), "a", k.modulus().to_vec())?;
    if phi.rank() == 0 {
        return Ok(GwForm::zero(&fp));
    }
    trace_form_of_class(&alg, &phi.all_entries())
}

fn trace_pair(k: &GaloisField, pair: &SpringerPair<GaloisField>) -> Result<SpringerPair<PrimeField>> {
    Ok(SpringerPair::new(trace_to_prime(k, &pair.even)?, trace_to_prime(k, &pair.odd)?))
}

/// Solves one orbit and records its class.
pub fn mult5_contribution(spec: &DeformationSpec, orbit: &Mult5Orbit) -> Result<OrbitContribution> {
    let line = solve_mult5(spec, orbit)?;
    let jc = jacobian_class(&line, spec.precision, spec.margin)?;
    let layer = &line.system.layer;
    let k = &orbit.field;
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(spec.seed);
    // leading coefficient over 5 is a square in every factor of L
    let ratio = layer.scale_k(&jc.leading, &inverse(k, &k.from_i64(5))?);
    let leading_class_ok = layer.is_square_everywhere(&ratio, &mut rng);
    Ok(OrbitContribution {
        kind: OrbitKind::Mult5,
        label: orbit.label(),
        factor_degree: k.degree(),
        lines: 5 * k.degree(),
        valuation: jc.valuation,
        leading_class_ok,
        traced: trace_pair(k, &jc.per_line)?,
        per_line: jc.per_line,
    })
}

pub fn mult2_contribution(spec: &DeformationSpec, orbit: &Mult2Orbit) -> Result<OrbitContribution> {
    let line = solve_mult2(spec, orbit)?;
    let jc = jacobian_class(&line, spec.precision, spec.margin)?;
    let layer = &line.system.layer;
    let k = &orbit.field;
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(spec.seed);
    // predicted leading term 5 (b^4 A - a^4 B) b sqrt(-db/a), sqrt(-db/a) = w/a
    let coeff = k.mul(&k.mul(&k.from_i64(5), &orbit.cert), &k.mul(&orbit.b, &inverse(k, &orbit.a)?));
    let predicted = layer.scale_k(&layer.w(), &coeff);
    let ratio = layer.mul(&jc.leading, &layer.invert(&predicted)?);
    let leading_class_ok = layer.is_square_everywhere(&ratio, &mut rng);
    Ok(OrbitContribution {
        kind: OrbitKind::Mult2,
        label: orbit.label(),
        factor_degree: k.degree(),
        lines: 2 * k.degree(),
        valuation: jc.valuation,
        leading_class_ok,
        traced: trace_pair(k, &jc.per_line)?,
        per_line: jc.per_line,
    })
}

/// Every orbit of the deformation, certificates checked.
pub struct PreparedOrbits {
    pub mult5: Vec<Mult5Orbit>,
    pub mult2: Vec<Mult2Orbit>,
}

pub fn prepare_orbits(spec: &DeformationSpec) -> Result<PreparedOrbits> {
    let fp = spec.field();
    let roots = orbits::root_pairs(fp, spec.seed)?;
    let mult5 = orbits::mult5_orbits(fp, &spec.g, &roots)?;
    let mult2 = orbits::mult2_orbits(fp, &spec.g, spec.seed)?;
    Ok(PreparedOrbits { mult5, mult2 })
}

/// One entry of `orbit_contribution` over every orbit, in a fixed order
/// (multiplicity 5 first).
pub fn orbit_contributions(spec: &DeformationSpec, prepared: &PreparedOrbits) -> Result<Vec<OrbitContribution>> {
    let n5 = prepared.mult5.len();
    let total = n5 + prepared.mult2.len();
    crate::par::map_indexed(total, |i| {
        if i < n5 {
            mult5_contribution(spec, &prepared.mult5[i])
        } else {
            mult2_contribution(spec, &prepared.mult2[i - n5])
        }
    })
    .into_iter()
    .collect()
}

/// Index of a distinguished subvariety of the zero locus.
#[derive(Clone, Debug)]
pub struct DistinguishedIndex {
    pub label: String,
    pub index: GwForm<PrimeField>,
    pub expected: GwForm<PrimeField>,
}

impl DistinguishedIndex {
    pub fn matches(&self) -> Result<bool> {
        self.index.equals(&self.expected)
    }
}

/// Indices of the families (Galois orbits of cones, from the
/// multiplicity-2 lines on them; `10 H` per cone) and of the crossing
/// lines (`Tr_{k(l)/k}(2H + <1>)` per orbit).
pub fn distinguished_indices(prepared: &PreparedOrbits, contributions: &[OrbitContribution]) -> Result<Vec<DistinguishedIndex>> {
    let fp = contributions
        .first()
        .map(|c| c.traced.even.field().clone())
        .ok_or_else(|| Error::TotalMismatch("no orbits".into()))?;
    let n5 = prepared.mult5.len();
    let mut out = Vec::new();
    let mut cones: BTreeMap<(usize, usize, Vec<u64>), GwForm<PrimeField>> = BTreeMap::new();
    for (orbit, c) in prepared.mult2.iter().zip(&contributions[n5..]) {
        let key = (orbit.pair[0], orbit.pair[1], orbit.zeta_poly.clone());
        let entry = cones.entry(key).or_insert_with(|| GwForm::zero(&fp));
        *entry = entry.add(&c.traced_class()?);
    }
    for ((i, j, phi), index) in cones {
        let cones_in_orbit = phi.len() - 1;
        out.push(DistinguishedIndex {
            label: format!("W{i}{j}[{}]", orbits::poly_label(&phi)),
            index,
            expected: GwForm::hyperbolic(&fp, 10 * cones_in_orbit),
        });
    }
    for (orbit, c) in prepared.mult5.iter().zip(&contributions[..n5]) {
        let k = &orbit.field;
        let expected = trace_to_prime(k, &GwForm::hyperbolic(k, 2).add(&GwForm::ones(k, 1)))?;
        out.push(DistinguishedIndex { label: orbit.label(), index: c.traced_class()?, expected });
    }
    Ok(out)
}

/// Result of the full computation over F_p.
#[derive(Clone, Debug)]
pub struct FermatReport {
    pub p: u64,
    pub orbits: Vec<OrbitContribution>,
    /// Sum of all traced contributions in `GW(F_p((t)))`.
    pub total: SpringerPair<PrimeField>,
    /// The class in `GW(F_p)` whose image is `total`.
    pub springer_inverse: GwForm<PrimeField>,
    pub rank: usize,
    pub indices: Vec<DistinguishedIndex>,
    pub checks: BTreeMap<String, bool>,
}

impl FermatReport {
    pub fn display_inverse(&self) -> String {
        diagonal_display(&self.springer_inverse, EXPECTED_MINUS_ONES).unwrap_or_else(|e| e.to_string())
    }

    pub fn all_checks_pass(&self) -> bool {
        self.checks.values().all(|&b| b)
    }

    pub fn to_json(&self) -> Value {
        let orbits: Vec<Value> = self.orbits.iter().map(|o| o.to_json()).collect();
        let indices: Vec<Value> = self
            .indices
            .iter()
            .map(|d| json!({"variety": d.label, "index": d.index.to_string()}))
            .collect();
        json!({
            "p": self.p,
            "orbits": orbits,
            "total": self.total.to_string(),
            "springer_inverse": self.display_inverse(),
            "springer_inverse_normal_form": self.springer_inverse.to_string(),
            "rank": self.rank,
            "distinguished_indices": indices,
            "checks": self.checks,
        })
    }
}

/// Multiplicities of `<1>` and `<-1>` in the Springer inverse of the total.
pub const EXPECTED_ONES: usize = 1445;
pub const EXPECTED_MINUS_ONES: usize = 1430;

/// `1445<1> + 1430<-1>` over `k`.
pub fn expected_total(k: &PrimeField) -> GwForm<PrimeField> {
    let minus_one = k.neg(&k.one());
    GwForm::ones(k, EXPECTED_ONES).add(&GwForm::diag(k, &vec![minus_one; EXPECTED_MINUS_ONES]).expect("-1 is a unit"))
}

/// `a<1>+b<-1>` with `b` the given count of `<-1>`, when `phi` has that
/// shape in `GW(F_p)` (rank and discriminant decide).
pub fn diagonal_display(phi: &GwForm<PrimeField>, minus_ones: usize) -> Result<String> {
    let k = phi.field();
    let rank = phi.rank();
    if minus_ones > rank {
        return Ok(phi.to_string());
    }
    let minus_one = k.neg(&k.one());
    let shaped = GwForm::ones(k, rank - minus_ones).add(&GwForm::diag(k, &vec![minus_one; minus_ones])?);
    Ok(if phi.equals(&shaped)? { format!("{}<1>+{}<-1>", rank - minus_ones, minus_ones) } else { phi.to_string() })
}

impl fmt::Display for FermatReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p = {}: {} orbits, rank {}", self.p, self.orbits.len(), self.rank)?;
        writeln!(f, "total {} = i({})", self.total, self.display_inverse())?;
        for (name, ok) in &self.checks {
            writeln!(f, "  {name}: {}", if *ok { "ok" } else { "FAILED" })?;
        }
        Ok(())
    }
}

/// The whole computation: certificates, every orbit, the total and its
/// Springer inverse, and the distinguished indices.
pub fn dynamic_euler_total(spec: &DeformationSpec) -> Result<FermatReport> {
    let prepared = prepare_orbits(spec)?;
    let orbits = orbit_contributions(spec, &prepared)?;
    let fp = spec.field().clone();
    let mut total = SpringerPair::new(GwForm::zero(&fp), GwForm::zero(&fp));
    for c in &orbits {
        total = total.add(&c.traced);
    }
    let rank = total.rank();
    let reduced = total.reduced();
    if rank != 2875 || !reduced.in_image_of_embed()? {
        return Err(Error::TotalMismatch(format!("total {total} of rank {rank}")));
    }
    let springer_inverse = reduced.even.clone();
    let expected = expected_total(&fp);
    if !springer_inverse.equals(&expected)? {
        return Err(Error::TotalMismatch(format!("Springer inverse {springer_inverse}, expected 1445<1>+1430<-1>")));
    }
    let indices = distinguished_indices(&prepared, &orbits)?;
    let mut checks = BTreeMap::new();
    let all = |kind: OrbitKind, f: &dyn Fn(&OrbitContribution) -> bool| orbits.iter().filter(|o| o.kind == kind).all(f);
    checks.insert("mult5_valuation_8".into(), all(OrbitKind::Mult5, &|o| o.valuation == 8));
    checks.insert("mult2_valuation_3".into(), all(OrbitKind::Mult2, &|o| o.valuation == 3));
    checks.insert("mult5_leading_class_5".into(), all(OrbitKind::Mult5, &|o| o.leading_class_ok));
    checks.insert("mult2_leading_class".into(), all(OrbitKind::Mult2, &|o| o.leading_class_ok));
    let per_line = orbits.iter().map(|o| o.per_line_ok()).collect::<Result<Vec<bool>>>()?;
    checks.insert("per_line_classes".into(), per_line.iter().all(|&b| b));
    let lines5: usize = orbits.iter().filter(|o| o.kind == OrbitKind::Mult5).map(|o| o.lines).sum();
    let lines2: usize = orbits.iter().filter(|o| o.kind == OrbitKind::Mult2).map(|o| o.lines).sum();
    checks.insert("line_count_2875".into(), lines5 == 1875 && lines2 == 1000);
    let idx_ok = indices.iter().map(|d| d.matches()).collect::<Result<Vec<bool>>>()?;
    checks.insert("distinguished_indices".into(), idx_ok.iter().all(|&b| b));
    let idx_sum = indices.iter().fold(GwForm::zero(&fp), |acc, d| acc.add(&d.index));
    checks.insert("indices_sum_to_total".into(), idx_sum.equals(&springer_inverse)?);
    Ok(FermatReport { p: spec.p, orbits, total, springer_inverse, rank, indices, checks })
}
