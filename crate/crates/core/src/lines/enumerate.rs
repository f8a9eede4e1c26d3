//! Census of lines on a quintic over `F_{q^d}`, `d <= D`, by scanning the
//! Schubert cells of `Gr(2, 5)`.

use rand::SeedableRng;
use serde_json::{json, Value};

use super::normal::{local_index_simple, normalize_line, LinePlane};
use super::quintic::Quintic;
use crate::error::{Error, Result};
use crate::gw::{trace_form, GwForm};
use crate::par;
use crate::rings::factor::find_irreducible;
use crate::rings::{EtaleAlgebra, FiniteField, GaloisField, GwField, PrimeField, Ring};

/// Largest extension degree accepted.
pub const MAX_DEGREE: usize = 6;
/// Default cap on the number of chart points scanned per degree.
pub const DEFAULT_BUDGET: u64 = 5_000_000;

#[derive(Clone, Debug)]
pub struct FoundLine {
    /// Degree of the field of definition over `F_q`.
    pub degree: usize,
    pub field: String,
    pub span: [Vec<String>; 2],
    /// `Tr_{k(l)/k} <det A>`, or the kernel relation of a non-simple line.
    pub index: std::result::Result<GwForm<PrimeField>, String>,
}

#[derive(Clone, Debug)]
pub struct Enumeration {
    pub lines: Vec<FoundLine>,
    /// Sum of the traced indices of the simple lines.
    pub sum: GwForm<PrimeField>,
    /// Geometric lines among the simple ones.
    pub geometric_count: usize,
    /// Set when the budget stopped the scan early.
    pub truncated: Option<String>,
}

impl Enumeration {
    pub fn to_json(&self) -> Value {
        let lines: Vec<Value> = self
            .lines
            .iter()
            .map(|l| {
                let idx = match &l.index {
                    Ok(g) => json!({"class": g.to_json(), "display": g.to_string()}),
                    Err(rel) => json!({"not_simple": rel}),
                };
                json!({"degree": l.degree, "field": l.field, "span": l.span, "index": idx})
            })
            .collect();
        json!({
            "lines": lines,
            "sum": self.sum.to_json(),
            "sum_display": self.sum.to_string(),
            "geometric_count": self.geometric_count,
            "truncated": self.truncated,
        })
    }
}

/// Points of `Gr(2, 5)(F_Q)`.
pub fn grassmannian_size(q: u64) -> u128 {
    let q = q as u128;
    (q.pow(5) - 1) * (q.pow(4) - 1) / ((q * q - 1) * (q - 1))
}

/// Pivot pairs with their free positions in each row.
fn cells() -> Vec<(usize, usize, Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    for i in 0..5 {
        for j in i + 1..5 {
            let free_a = (i + 1..5).filter(|&c| c != j).collect();
            let free_b = (j + 1..5).collect();
            out.push((i, j, free_a, free_b));
        }
    }
    out
}

struct Evaluator<F: Ring> {
    terms: Vec<([u8; 5], F::Elem)>,
}

impl<F: Ring> Evaluator<F> {
    fn eval(&self, k: &F, x: &[F::Elem; 5]) -> F::Elem {
        let pw: [[F::Elem; 6]; 5] = std::array::from_fn(|i| {
            let mut v: [F::Elem; 6] = std::array::from_fn(|_| k.one());
            for e in 1..6 {
                v[e] = k.mul(&v[e - 1], &x[i]);
            }
            v
        });
        let mut acc = k.zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for i in 0..5 {
                if e[i] > 0 {
                    t = k.mul(&t, &pw[i][e[i] as usize]);
                }
            }
            acc = k.add(&acc, &t);
        }
        acc
    }
}

/// RREF spans of all lines on `f` over `k`.
fn scan<F: FiniteField>(k: &F, f: &Quintic<F>) -> Vec<[Vec<F::Elem>; 2]> {
    let ev = Evaluator::<F> { terms: f.poly.terms.iter().map(|(e, c)| (*e, c.clone())).collect() };
    let qn: u64 = k.order().try_into().expect("small field");
    // sample points (u : v) of P^1 for the quick rejection test
    let mut probes: Vec<(F::Elem, F::Elem)> = vec![(k.one(), k.zero()), (k.zero(), k.one())];
    for t in 1..qn.min(5) {
        probes.push((k.one(), k.from_index(t)));
    }
    let cells = cells();
    let tasks: Vec<(usize, u64)> = cells
        .iter()
        .enumerate()
        .flat_map(|(c, (_, _, fa, fb))| {
            let n = fa.len() + fb.len();
            let first = if n == 0 { 1 } else { qn };
            (0..first).map(move |t| (c, t))
        })
        .collect();
    let found = par::map_indexed(tasks.len(), |t| {
        let (c, lead) = tasks[t];
        let (i, j, fa, fb) = &cells[c];
        let free: Vec<(usize, usize)> = fa.iter().map(|&x| (0, x)).chain(fb.iter().map(|&x| (1, x))).collect();
        let rest = free.len().saturating_sub(1) as u32;
        let mut out = Vec::new();
        for idx in 0..qn.pow(rest) {
            let mut rows = [vec![k.zero(); 5], vec![k.zero(); 5]];
            rows[0][*i] = k.one();
            rows[1][*j] = k.one();
            let mut rem = idx;
            for (n, &(r, col)) in free.iter().enumerate() {
                let digit = if n == 0 {
                    lead
                } else {
                    let d = rem % qn;
                    rem /= qn;
                    d
                };
                rows[r][col] = k.from_index(digit);
            }
            let on = probes.iter().all(|(u, v)| {
                let x: [F::Elem; 5] =
                    std::array::from_fn(|m| k.add(&k.mul(u, &rows[0][m]), &k.mul(v, &rows[1][m])));
                k.is_zero(&ev.eval(k, &x))
            });
            if on && crate::binforms::is_zero(k, &f.restrict(&rows[0], &rows[1])) {
                out.push(rows);
            }
        }
        out
    });
    found.into_iter().flatten().collect()
}

fn orbit_size(k: &GaloisField, span: &[Vec<Vec<u64>>; 2]) -> (usize, bool) {
    let key = |s: &[Vec<Vec<u64>>; 2]| s.clone();
    let start = key(span);
    let mut cur = start.clone();
    let mut minimal = true;
    for n in 1..=k.degree() {
        cur = [cur[0].iter().map(|x| k.frobenius(x)).collect(), cur[1].iter().map(|x| k.frobenius(x)).collect()];
        if cur == start {
            return (n, minimal);
        }
        let idx = |s: &[Vec<Vec<u64>>; 2]| -> Vec<Vec<u64>> { s.iter().flatten().cloned().collect() };
        if idx(&cur) < idx(&start) {
            minimal = false;
        }
    }
    (k.degree(), minimal)
}

/// All lines on `f` with field of definition of degree at most `max_degree`
/// over `F_q`, with traced local indices.
pub fn enumerate_lines(f: &Quintic<PrimeField>, max_degree: usize, budget: u64) -> Result<Enumeration> {
    let fp = f.field.clone();
    let q = fp.p();
    if max_degree > MAX_DEGREE {
        return Err(Error::BudgetExceeded(format!("degree {max_degree} exceeds the limit {MAX_DEGREE}")));
    }
    let mut out = Enumeration { lines: Vec::new(), sum: GwForm::zero(&fp), geometric_count: 0, truncated: None };
    for d in 1..=max_degree {
        let size = grassmannian_size(q.pow(d as u32));
        if size > budget as u128 {
            out.truncated = Some(format!("Gr(2,5)(F_{q}^{d}) has {size} points, budget {budget}"));
            break;
        }
        if d == 1 {
            for span in scan(&fp, f) {
                let l = LinePlane::new(&fp, span[0].clone(), span[1].clone())?;
                let nf = normalize_line(f, &l)?;
                let index = local_index_simple(&nf).map_err(|e| e.to_string());
                if index.is_ok() {
                    out.geometric_count += 1;
                }
                out.lines.push(FoundLine {
                    degree: 1,
                    field: fp.handle().to_string(),
                    span: span.map(|r| r.iter().map(|c| fp.format(c)).collect()),
                    index,
                });
            }
        } else {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(d as u64);
            let modulus = find_irreducible(&fp, d, &mut rng);
            let kq = GaloisField::new(q, modulus.clone())?;
            let alg = EtaleAlgebra::simple(fp.clone(), "a", modulus)?;
            let fq = f.map(&kq, |c| kq.from_prime(*c));
            for span in scan(&kq, &fq) {
                let (n, minimal) = orbit_size(&kq, &span);
                if n != d || !minimal {
                    continue;
                }
                let l = LinePlane::new(&kq, span[0].clone(), span[1].clone())?;
                let nf = normalize_line(&fq, &l)?;
                let index = match local_index_simple(&nf) {
                    Ok(g) => {
                        let det = g.discriminant();
                        Ok(trace_form(&alg, &kq.coords(&det))?)
                    }
                    Err(e) => Err(e.to_string()),
                };
                if index.is_ok() {
                    out.geometric_count += d;
                }
                out.lines.push(FoundLine {
                    degree: d,
                    field: kq.handle().to_string(),
                    span: span.map(|r| r.iter().map(|c| kq.format(c)).collect()),
                    index,
                });
            }
        }
    }
    for l in &out.lines {
        if let Ok(g) = &l.index {
            out.sum = out.sum.add(g);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lines::planted::planted_line;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn grassmannian_counts() {
        assert_eq!(grassmannian_size(3), 1210);
        let total: usize = cells()
            .iter()
            .map(|(_, _, a, b)| 3usize.pow((a.len() + b.len()) as u32))
            .sum();
        assert_eq!(total, 1210);
    }

    #[test]
    fn planted_line_is_found_over_f3() {
        let k = PrimeField::new(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let kk = k.clone();
        let pl = planted_line(&k, &mut rng, &move |r: &mut ChaCha8Rng| kk.random(r), 40, true);
        let census = enumerate_lines(&pl.quintic, 1, DEFAULT_BUDGET).unwrap();
        let lines: Vec<_> = census.lines.iter().collect();
        assert!(!lines.is_empty());
        assert_eq!(census.sum.rank(), census.geometric_count);
        assert!(matches!(enumerate_lines(&pl.quintic, 7, DEFAULT_BUDGET), Err(Error::BudgetExceeded(_))));
    }
}
