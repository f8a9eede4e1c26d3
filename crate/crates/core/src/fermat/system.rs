//! The deformation system of a line in a chart, and its order-by-order
//! solver.
//!
//! A chart is a change of coordinates `X = B Y` over a field `K` that
//! sends the line to `Y_0 = Y_1 = Y_2 = 0`. A nearby line is
//! `Y_0 = x u + x' v`, `Y_1 = y u + y' v`, `Y_2 = z u + z' v`,
//! `(Y_3, Y_4) = (u, v)`, with the six unknowns power series over a layer
//! `L = K[w]/(w^m - c)`. Restricting `F + t^s G` gives a binary quintic
//! whose six coefficients (powers `u^5, ..., v^5`) are the equations.
//! Unknowns are indexed `0..6` as `x, x', y, y', z, z'`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::lines::mpoly::MPoly;
use crate::lines::quintic::Quintic;
use crate::rings::matrix::{self, Matrix};
use crate::rings::series::SeriesRing;
use crate::rings::{GaloisField, PrimeField, Ring};

use super::layer::Layer;

/// Coefficients `s_0, s_1, ...` of a truncated series over the layer.
pub type Series = Vec<Vec<u64>>;

/// A form in `Y_0..Y_4` grouped by the exponents of `Y_0, Y_1, Y_2`;
/// each group carries a binary form in `(Y_3, Y_4) = (u, v)` as
/// `(power of v, coefficient)` pairs.
#[derive(Clone, Debug)]
struct Grouped {
    groups: Vec<([u8; 3], Vec<(usize, Vec<u64>)>)>,
}

impl Grouped {
    fn new(layer: &Layer, poly: &MPoly<Vec<u64>, 5>) -> Grouped {
        let mut map: std::collections::BTreeMap<[u8; 3], Vec<(usize, Vec<u64>)>> = Default::default();
        for (e, c) in &poly.terms {
            map.entry([e[0], e[1], e[2]]).or_default().push((e[4] as usize, layer.embed(c)));
        }
        Grouped { groups: map.into_iter().collect() }
    }

    /// Binary-form coefficient of `u^{deg - j} v^j` in the group `abc`.
    fn coeff(&self, abc: [u8; 3], j: usize) -> Option<&Vec<u64>> {
        self.groups
            .iter()
            .find(|(e, _)| *e == abc)
            .and_then(|(_, t)| t.iter().find(|(k, _)| *k == j).map(|(_, c)| c))
    }
}

/// Equations and unknowns of a chart, ready to evaluate on series points.
#[derive(Clone, Debug)]
pub struct ChartSystem {
    pub layer: Layer,
    /// The deformation is `F + t^shift G`.
    pub shift: usize,
    /// `F(BY)` and its partials in `Y_0, Y_1, Y_2`.
    f: [Grouped; 4],
    g: [Grouped; 4],
    /// `G(BY)` restricted to the line, with partials, over `K`.
    g_on_line: [Vec<Vec<u64>>; 4],
}

impl ChartSystem {
    /// Builds the system for `F + t^shift G` in the chart `X = B Y`, with
    /// `B` over the field of `layer`.
    pub fn new(layer: Layer, f: &Quintic<PrimeField>, g: &Quintic<PrimeField>, b: &Matrix<Vec<u64>>, shift: usize) -> Self {
        let k = layer.field().clone();
        let forms: [MPoly<Vec<u64>, 5>; 5] = std::array::from_fn(|i| MPoly::linear(&k, &b[i]));
        let lift = |q: &Quintic<PrimeField>| -> MPoly<Vec<u64>, 5> {
            q.poly.map(&k, |c| k.from_prime(*c)).substitute(&k, &forms)
        };
        let (fy, gy) = (lift(f), lift(g));
        let with_partials = |p: &MPoly<Vec<u64>, 5>| -> [MPoly<Vec<u64>, 5>; 4] {
            [p.clone(), p.derivative(&k, 0), p.derivative(&k, 1), p.derivative(&k, 2)]
        };
        let (fp, gp) = (with_partials(&fy), with_partials(&gy));
        let g_on_line = std::array::from_fn(|i| {
            let deg = if i == 0 { 5u8 } else { 4 };
            (0..=deg).map(|j| gp[i].coeff(&k, &[0, 0, 0, deg - j, j])).collect()
        });
        ChartSystem {
            f: std::array::from_fn(|i| Grouped::new(&layer, &fp[i])),
            g: std::array::from_fn(|i| Grouped::new(&layer, &gp[i])),
            g_on_line,
            layer,
            shift,
        }
    }

    pub fn field(&self) -> &GaloisField {
        self.layer.field()
    }

    /// Coefficient of `u^{5-j} v^j` in `G` restricted to the line.
    pub fn g_line(&self, j: usize) -> &[u64] {
        &self.g_on_line[0][j]
    }

    /// Coefficient of `u^{4-j} v^j` in `dG/dY_q` restricted to the line.
    pub fn g_partial_line(&self, q: usize, j: usize) -> &[u64] {
        &self.g_on_line[q + 1][j]
    }

    /// Whether the `F`-part of the group `abc` has a given coefficient; used
    /// by tests to confirm the chart contains the line.
    pub fn f_has(&self, abc: [u8; 3], j: usize) -> bool {
        self.f[0].coeff(abc, j).is_some()
    }

    /// The binary forms `F(BY) + t^shift G(BY)` (index 0) and its partials
    /// in `Y_0, Y_1, Y_2` (indices 1..=3) at `point`, modulo `t^prec`.
    pub fn eval(&self, point: &[Series; 6], prec: usize, which: &[usize]) -> Vec<Vec<Series>> {
        let mut ev = Evaluator { layer: &self.layer, point, prec, memo: HashMap::new() };
        which
            .iter()
            .map(|&w| {
                let deg = if w == 0 { 5 } else { 4 };
                ev.combine(&self.f[w], &self.g[w], self.shift, deg)
            })
            .collect()
    }

    /// The six equations modulo `t^prec`.
    pub fn residual(&self, point: &[Series; 6], prec: usize) -> Vec<Series> {
        self.eval(point, prec, &[0]).pop().unwrap()
    }

    /// Jacobian `J[row][var]` modulo `t^prec`.
    pub fn jacobian(&self, point: &[Series; 6], prec: usize) -> Vec<Vec<Series>> {
        let d = self.eval(point, prec, &[1, 2, 3]);
        let zero = vec![self.layer.zero(); prec];
        (0..6)
            .map(|j| {
                (0..6)
                    .map(|var| {
                        let q = var / 2;
                        if var % 2 == 0 {
                            if j <= 4 { d[q][j].clone() } else { zero.clone() }
                        } else if j >= 1 {
                            d[q][j - 1].clone()
                        } else {
                            zero.clone()
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

struct Evaluator<'a> {
    layer: &'a Layer,
    point: &'a [Series; 6],
    prec: usize,
    /// Binary forms `Y_0^a Y_1^b Y_2^c` with series coefficients.
    memo: HashMap<[u8; 3], Vec<Series>>,
}

impl Evaluator<'_> {
    fn coeff<'s>(&self, s: &'s Series, k: usize) -> Option<&'s Vec<u64>> {
        s.get(k).filter(|c| !self.layer.is_zero(c))
    }

    fn power(&mut self, e: [u8; 3]) -> Vec<Series> {
        if let Some(v) = self.memo.get(&e) {
            return v.clone();
        }
        let out = if e == [0, 0, 0] {
            let mut one = vec![self.layer.zero(); self.prec];
            one[0] = self.layer.one();
            vec![one]
        } else {
            let q = (0..3).find(|&q| e[q] > 0).unwrap();
            let mut prev_e = e;
            prev_e[q] -= 1;
            let prev = self.power(prev_e);
            let (alpha, beta) = (&self.point[2 * q], &self.point[2 * q + 1]);
            let s = prev.len();
            let mut next = Vec::with_capacity(s + 1);
            for j in 0..=s {
                let mut pairs: Vec<(&Series, &Series)> = Vec::with_capacity(2);
                if j < s {
                    pairs.push((&prev[j], alpha));
                }
                if j >= 1 {
                    pairs.push((&prev[j - 1], beta));
                }
                next.push(self.dot(&pairs));
            }
            next
        };
        self.memo.insert(e, out.clone());
        out
    }

    /// `sum a_i b_i` of series, modulo `t^prec`, in one accumulation per
    /// coefficient.
    fn dot(&self, pairs: &[(&Series, &Series)]) -> Series {
        let layer = self.layer;
        let lead = |s: &Series| s.iter().take(self.prec).position(|c| !layer.is_zero(c));
        let vals: Vec<Option<(usize, usize)>> =
            pairs.iter().map(|(a, b)| Some((lead(a)?, lead(b)?))).collect();
        let mut out = Vec::with_capacity(self.prec);
        let mut terms = Vec::new();
        for k in 0..self.prec {
            terms.clear();
            for ((a, b), v) in pairs.iter().zip(&vals) {
                let Some((va, vb)) = *v else { continue };
                if va + vb > k {
                    continue;
                }
                for i in va..=k - vb {
                    if let (Some(x), Some(y)) = (self.coeff(a, i), self.coeff(b, k - i)) {
                        terms.push((x, y));
                    }
                }
            }
            out.push(if terms.is_empty() { layer.zero() } else { layer.sum_of_products(&terms) });
        }
        out
    }

    fn combine(&mut self, f: &Grouped, g: &Grouped, shift: usize, deg: usize) -> Vec<Series> {
        let mut parts: Vec<(Vec<Series>, &Vec<(usize, Vec<u64>)>, usize)> = Vec::new();
        for (e, terms) in &f.groups {
            parts.push((self.power(*e), terms, 0));
        }
        if shift < self.prec {
            for (e, terms) in &g.groups {
                parts.push((self.power(*e), terms, shift));
            }
        }
        let layer = self.layer;
        let mut out = vec![vec![layer.zero(); self.prec]; deg + 1];
        let mut acc: Vec<(&Vec<u64>, &Vec<u64>)> = Vec::new();
        for (j, row) in out.iter_mut().enumerate() {
            for (k, slot) in row.iter_mut().enumerate() {
                acc.clear();
                for (pw, terms, sh) in &parts {
                    if k < *sh {
                        continue;
                    }
                    for (vj, h) in terms.iter() {
                        if *vj > j || j - vj >= pw.len() {
                            continue;
                        }
                        if let Some(x) = self.coeff(&pw[j - vj], k - sh) {
                            acc.push((x, h));
                        }
                    }
                }
                if !acc.is_empty() {
                    *slot = layer.sum_of_products(&acc);
                }
            }
        }
        out
    }
}

/// One step of a solving schedule: equations `(row, order)` solved for the
/// unknown coefficients `(var, index)`.
#[derive(Clone, Debug)]
pub struct Step {
    pub equations: Vec<(usize, usize)>,
    pub unknowns: Vec<(usize, usize)>,
    /// Entries that must already vanish, by the choice of seeds.
    pub checks: Vec<(usize, usize)>,
}

/// Runs `steps` from the seeded `point` (series of length at least `len`),
/// then checks that all six equations vanish modulo `t^prec`. Each step
/// is a linear solve whose matrix comes from the low-order Jacobian; any
/// earlier equation that stops vanishing reports the order where it broke.
pub fn solve(sys: &ChartSystem, mut point: [Series; 6], steps: &[Step], prec: usize) -> Result<[Series; 6]> {
    let layer = &sys.layer;
    let mut settled: Vec<(usize, usize)> = Vec::new();
    let verify = |r: &[Series], settled: &[(usize, usize)], upto: usize| -> Result<()> {
        for &(row, o) in settled {
            if o < upto && !layer.is_zero(&r[row][o]) {
                return Err(Error::SolveFailed(o));
            }
        }
        Ok(())
    };
    for step in steps {
        let top = step.equations.iter().chain(&step.checks).map(|&(_, o)| o).max().unwrap_or(0);
        let r = sys.residual(&point, top + 1);
        verify(&r, &settled, top + 1)?;
        verify(&r, &step.checks, top + 1)?;
        if !step.equations.is_empty() {
            let mut spread = 0;
            for &(_, o) in &step.equations {
                for &(_, i) in &step.unknowns {
                    if o >= i {
                        spread = spread.max(o - i);
                    }
                }
            }
            let jac = sys.jacobian(&point, spread + 1);
            let m: Matrix<Vec<u64>> = step
                .equations
                .iter()
                .map(|&(row, o)| {
                    step.unknowns
                        .iter()
                        .map(|&(var, i)| if o >= i { jac[row][var][o - i].clone() } else { layer.zero() })
                        .collect()
                })
                .collect();
            let rhs: Vec<Vec<u64>> = step.equations.iter().map(|&(row, o)| layer.neg(&r[row][o])).collect();
            let order = step.equations.iter().map(|&(_, o)| o).max().unwrap_or(0);
            let delta = cramer(layer, &m, &rhs).ok_or(Error::SolveFailed(order))?;
            for (&(var, i), d) in step.unknowns.iter().zip(delta) {
                point[var][i] = layer.add(&point[var][i], &d);
            }
        }
        settled.extend(step.equations.iter().chain(&step.checks).copied());
    }
    for s in point.iter_mut() {
        s.truncate(prec);
    }
    let r = sys.residual(&point, prec);
    for o in 0..prec {
        if r.iter().any(|row| !layer.is_zero(&row[o])) {
            return Err(Error::SolveFailed(o));
        }
    }
    Ok(point)
}

/// `M x = b` over the layer by Cramer's rule; `None` unless `det M` is a
/// unit.
fn cramer(layer: &Layer, m: &Matrix<Vec<u64>>, b: &[Vec<u64>]) -> Option<Vec<Vec<u64>>> {
    let det = matrix::det_ring(layer, m);
    let inv = layer.invert(&det).ok()?;
    Some(
        (0..m.len())
            .map(|c| {
                let mc: Matrix<Vec<u64>> = m
                    .iter()
                    .zip(b)
                    .map(|(row, bi)| {
                        let mut row = row.clone();
                        row[c] = bi.clone();
                        row
                    })
                    .collect();
                layer.mul(&matrix::det_ring(layer, &mc), &inv)
            })
            .collect(),
    )
}

/// `det J(l_t)` modulo `t^prec`.
pub fn jacobian_det(sys: &ChartSystem, point: &[Series; 6], prec: usize) -> Series {
    let jac = sys.jacobian(point, prec);
    let ring = SeriesRing::new(sys.layer.clone(), prec);
    matrix::det_ring(&ring, &jac)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lines::mpoly::monomials;
    use crate::rings::FiniteField;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Plain evaluation of the restricted quintic at a series point.
    fn direct(sys_f: &Quintic<PrimeField>, g: &Quintic<PrimeField>, b: &Matrix<Vec<u64>>, layer: &Layer, pt: &[Series; 6], prec: usize, shift: usize) -> Vec<Series> {
        let k = layer.field().clone();
        let ring = SeriesRing::new(layer.clone(), prec);
        // X_i(u, v) as binary linear forms with series coefficients
        let cst = |c: &Vec<u64>| ring.constant(layer.embed(c));
        let y: [(Series, Series); 5] = [
            (pt[0].clone(), pt[1].clone()),
            (pt[2].clone(), pt[3].clone()),
            (pt[4].clone(), pt[5].clone()),
            (ring.one(), ring.zero()),
            (ring.zero(), ring.one()),
        ];
        let x: Vec<(Series, Series)> = (0..5)
            .map(|i| {
                let mut u = ring.zero();
                let mut v = ring.zero();
                for (j, yj) in y.iter().enumerate() {
                    u = ring.add(&u, &ring.mul(&cst(&b[i][j]), &yj.0));
                    v = ring.add(&v, &ring.mul(&cst(&b[i][j]), &yj.1));
                }
                (u, v)
            })
            .collect();
        let eval = |q: &Quintic<PrimeField>| -> Vec<Series> {
            let mut out = vec![ring.zero(); 6];
            for (e, c) in &q.poly.terms {
                let mut form = vec![ring.constant(layer.embed(&k.from_prime(*c)))];
                for (i, &ei) in e.iter().enumerate() {
                    for _ in 0..ei {
                        let mut next = vec![ring.zero(); form.len() + 1];
                        for (j, f) in form.iter().enumerate() {
                            next[j] = ring.add(&next[j], &ring.mul(f, &x[i].0));
                            next[j + 1] = ring.add(&next[j + 1], &ring.mul(f, &x[i].1));
                        }
                        form = next;
                    }
                }
                for j in 0..6 {
                    out[j] = ring.add(&out[j], &form[j]);
                }
            }
            out
        };
        let (fv, gv) = (eval(sys_f), eval(g));
        let ts = ring.monomial(layer.one(), shift);
        (0..6).map(|j| ring.add(&fv[j], &ring.mul(&ts, &gv[j]))).collect()
    }

    #[test]
    fn grouped_evaluation_matches_direct_expansion() {
        let fp = PrimeField::new(7).unwrap();
        let k = GaloisField::new(7, vec![5, 0, 0, 1]).unwrap();
        let layer = Layer::new(&k, 2, vec![1, 2, 0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = Quintic::new(&fp, monomials::<5>(5).into_iter().map(|e| (e, fp.random(&mut rng))).collect()).unwrap();
        let f = Quintic::fermat(&fp);
        let b: Matrix<Vec<u64>> = (0..5).map(|_| (0..5).map(|_| k.random(&mut rng)).collect()).collect();
        let sys = ChartSystem::new(layer.clone(), &f, &g, &b, 2);
        let prec = 4;
        let pt: [Series; 6] = std::array::from_fn(|_| {
            (0..prec).map(|i| if i == 0 { layer.zero() } else { (0..6).map(|_| fp.random(&mut rng)).collect() }).collect()
        });
        assert_eq!(sys.residual(&pt, prec), direct(&f, &g, &b, &layer, &pt, prec, 2));
    }
}
