//! Etale algebra towers `k[w1]/(m1)[w2]/(m2)...` with elements in the
//! monomial basis. Level 1 is innermost: the flat index of
//! `w1^i1 w2^i2 ...` is `i1 + d1 (i2 + d2 (...))`.

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::factor::{factor, find_irreducible, roots};
use super::matrix::{self, Matrix};
use super::poly;
use super::{check_characteristic, Field, FiniteField, GaloisField, PrimeField, Ring};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct EtaleAlgebra<F: Field> {
    base: F,
    names: Vec<String>,
    degs: Vec<usize>,
    /// `dims[l]` is the dimension of the algebra below level `l`.
    dims: Vec<usize>,
    /// Monic moduli; coefficient `i` of level `l` is an element of the
    /// level-`l` subalgebra (length `dims[l]`).
    moduli: Vec<Vec<Vec<F::Elem>>>,
    /// Power sums of the roots of each modulus, `s_0..s_{d-1}`.
    power_sums: Vec<Vec<Vec<F::Elem>>>,
}

impl<F: Field> EtaleAlgebra<F> {
    /// Builds a tower; `tower[l].1` lists the coefficients (low to high) of
    /// a monic polynomial over the algebra built so far.
    pub fn new(base: F, tower: Vec<(String, Vec<Vec<F::Elem>>)>) -> Result<Self> {
        check_characteristic(base.characteristic())?;
        let mut alg = EtaleAlgebra {
            base,
            names: Vec::new(),
            degs: Vec::new(),
            dims: vec![1],
            moduli: Vec::new(),
            power_sums: Vec::new(),
        };
        for (level, (name, m)) in tower.into_iter().enumerate() {
            alg.push_level(level + 1, name, m)?;
        }
        Ok(alg)
    }

    /// One level over the base field, modulus coefficients low to high.
    pub fn simple(base: F, name: &str, modulus: Vec<F::Elem>) -> Result<Self> {
        let m = modulus.into_iter().map(|c| vec![c]).collect();
        Self::new(base, vec![(name.to_string(), m)])
    }

    fn push_level(&mut self, level: usize, name: String, m: Vec<Vec<F::Elem>>) -> Result<()> {
        let below = *self.dims.last().unwrap();
        if m.len() < 2 || m.iter().any(|c| c.len() != below) {
            return Err(Error::Unsupported(format!("malformed modulus at level {level}")));
        }
        let d = m.len() - 1;
        if !self.is_one(&m[d]) {
            return Err(Error::Unsupported(format!("modulus at level {level} is not monic")));
        }
        // Newton's identities: s_k = -(k c_{d-k} + sum_{i<k} c_{d-k+i} s_i)
        let mut s: Vec<Vec<F::Elem>> = vec![self.scalar_at(below, &self.base.from_i64(d as i64))];
        for k in 1..d {
            let mut acc = self.scale_base(&m[d - k], &self.base.from_i64(k as i64));
            for i in 1..k {
                acc = self.add(&acc, &self.mul_flat(&m[d - k + i], &s[i]));
            }
            s.push(self.neg(&acc));
        }
        self.names.push(name);
        self.degs.push(d);
        self.dims.push(below * d);
        self.moduli.push(m);
        self.power_sums.push(s);
        // nondegenerate trace form over the base field <=> etale
        let g = self.gram(&self.one());
        if self.base.is_zero(&matrix::det(&self.base, &g)) {
            return Err(Error::NotEtale { level });
        }
        Ok(())
    }

    pub fn base(&self) -> &F {
        &self.base
    }
    pub fn dim(&self) -> usize {
        *self.dims.last().unwrap()
    }
    pub fn levels(&self) -> usize {
        self.degs.len()
    }
    pub fn degrees(&self) -> &[usize] {
        &self.degs
    }
    pub fn names(&self) -> &[String] {
        &self.names
    }
    pub fn modulus(&self, level: usize) -> &[Vec<F::Elem>] {
        &self.moduli[level - 1]
    }

    fn scalar_at(&self, len: usize, c: &F::Elem) -> Vec<F::Elem> {
        let mut v = vec![self.base.zero(); len];
        v[0] = c.clone();
        v
    }

    fn scale_base(&self, a: &[F::Elem], c: &F::Elem) -> Vec<F::Elem> {
        a.iter().map(|x| self.base.mul(x, c)).collect()
    }

    /// The subalgebra given by the first `levels` levels.
    pub fn truncated(&self, levels: usize) -> Self {
        EtaleAlgebra {
            base: self.base.clone(),
            names: self.names[..levels].to_vec(),
            degs: self.degs[..levels].to_vec(),
            dims: self.dims[..=levels].to_vec(),
            moduli: self.moduli[..levels].to_vec(),
            power_sums: self.power_sums[..levels].to_vec(),
        }
    }

    /// Embeds a base-field scalar.
    pub fn scalar(&self, c: &F::Elem) -> Vec<F::Elem> {
        self.scalar_at(self.dim(), c)
    }

    /// Lifts an element of the level-`l` subalgebra to the full algebra.
    pub fn lift_from(&self, x: &[F::Elem]) -> Vec<F::Elem> {
        let mut v = x.to_vec();
        v.resize(self.dim(), self.base.zero());
        v
    }

    /// The generator of level `level` (1-based).
    pub fn generator(&self, level: usize) -> Vec<F::Elem> {
        let mut exps = vec![0; self.levels()];
        exps[level - 1] = 1;
        self.monomial(&exps)
    }

    /// `prod w_l^{e_l}` with arbitrary exponents, reduced.
    pub fn monomial(&self, exps: &[usize]) -> Vec<F::Elem> {
        let mut acc = self.one();
        for (l, &e) in exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let g = if self.degs[l] > 1 {
                let mut v = vec![self.base.zero(); self.dim()];
                v[self.dims[l]] = self.base.one();
                v
            } else {
                // degree-one level: w = -c_0
                self.lift_from(&self.neg(&self.moduli[l][0]))
            };
            acc = self.mul(&acc, &self.pow(&g, e as u64));
        }
        acc
    }

    /// Multiplication of two elements of the level-`n` subalgebra, where `n`
    /// is determined by the slice length.
    fn mul_flat(&self, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        let len = a.len();
        if len == 1 {
            return vec![self.base.mul(&a[0], &b[0])];
        }
        let l = self.dims.iter().position(|&d| d == len).expect("element length matches a level");
        // the top-most level with this dimension (degree-one levels repeat it)
        let l = (l..self.dims.len()).take_while(|&i| self.dims[i] == len).last().unwrap();
        self.mul_level(l, a, b)
    }

    /// Multiplies elements of the algebra up to level `l` (dims[l] long).
    fn mul_level(&self, l: usize, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        if l == 0 {
            return vec![self.base.mul(&a[0], &b[0])];
        }
        let d = self.degs[l - 1];
        let sub = self.dims[l - 1];
        let m = &self.moduli[l - 1];
        let ac: Vec<&[F::Elem]> = a.chunks(sub).collect();
        let bc: Vec<&[F::Elem]> = b.chunks(sub).collect();
        let zero = vec![self.base.zero(); sub];
        let mut prod: Vec<Vec<F::Elem>> = vec![zero.clone(); 2 * d - 1];
        for i in 0..d {
            if ac[i].iter().all(|c| self.base.is_zero(c)) {
                continue;
            }
            for j in 0..d {
                if bc[j].iter().all(|c| self.base.is_zero(c)) {
                    continue;
                }
                let t = self.mul_level(l - 1, ac[i], bc[j]);
                prod[i + j] = add_vec(&self.base, &prod[i + j], &t);
            }
        }
        for k in (d..2 * d - 1).rev() {
            let c = std::mem::replace(&mut prod[k], zero.clone());
            if c.iter().all(|x| self.base.is_zero(x)) {
                continue;
            }
            for i in 0..d {
                let t = self.mul_level(l - 1, &c, &m[i]);
                prod[k - d + i] = sub_vec(&self.base, &prod[k - d + i], &t);
            }
        }
        prod.truncate(d);
        prod.concat()
    }

    /// Trace from the level-`l` subalgebra down to level `l - 1`.
    pub fn trace_rel(&self, l: usize, x: &[F::Elem]) -> Vec<F::Elem> {
        let sub = self.dims[l - 1];
        let mut acc = vec![self.base.zero(); sub];
        for (i, chunk) in x.chunks(sub).enumerate() {
            let t = self.mul_level(l - 1, chunk, &self.power_sums[l - 1][i]);
            acc = add_vec(&self.base, &acc, &t);
        }
        acc
    }

    /// Trace down to the base field.
    pub fn trace(&self, x: &[F::Elem]) -> F::Elem {
        let mut v = x.to_vec();
        for l in (1..=self.levels()).rev() {
            v = self.trace_rel(l, &v);
        }
        v.into_iter().next().unwrap()
    }

    /// Matrix of multiplication by `x`; column `j` holds `x b_j`.
    pub fn mult_matrix(&self, x: &[F::Elem]) -> Matrix<F::Elem> {
        let n = self.dim();
        let cols: Vec<Vec<F::Elem>> = (0..n)
            .map(|j| {
                let mut b = vec![self.base.zero(); n];
                b[j] = self.base.one();
                self.mul(&x.to_vec(), &b)
            })
            .collect();
        matrix::transpose(&cols)
    }

    pub fn norm(&self, x: &[F::Elem]) -> F::Elem {
        matrix::det(&self.base, &self.mult_matrix(x))
    }

    pub fn norm_and_trace(&self, x: &[F::Elem]) -> (F::Elem, F::Elem) {
        (self.norm(x), self.trace(x))
    }

    pub fn is_unit(&self, x: &[F::Elem]) -> bool {
        !self.base.is_zero(&self.norm(x))
    }

    /// Inverse by solving `x y = 1` with the multiplication matrix.
    pub fn invert(&self, x: &[F::Elem]) -> Result<Vec<F::Elem>> {
        let m = self.mult_matrix(x);
        matrix::solve(&self.base, &m, &self.one())
            .ok_or_else(|| Error::NotAUnit("multiplication matrix is singular".into()))
    }

    /// Exponent vector of basis element `i`.
    pub fn basis_exponents(&self, mut i: usize) -> Vec<usize> {
        self.degs
            .iter()
            .map(|&d| {
                let e = i % d;
                i /= d;
                e
            })
            .collect()
    }

    /// Gram matrix `Tr(c b_i b_j)` over the base field.
    pub fn gram(&self, c: &[F::Elem]) -> Matrix<F::Elem> {
        let n = self.dim();
        let exps: Vec<Vec<usize>> = (0..n).map(|i| self.basis_exponents(i)).collect();
        let gens: Vec<Vec<F::Elem>> = (1..=self.levels()).map(|l| self.generator(l)).collect();
        // c * w^e for exponent sums, built incrementally from smaller sums
        let mut elems: HashMap<Vec<usize>, Vec<F::Elem>> = HashMap::new();
        let mut traces: HashMap<Vec<usize>, F::Elem> = HashMap::new();
        elems.insert(vec![0; self.levels()], c.to_vec());
        let mut get = |e: &Vec<usize>, elems: &mut HashMap<Vec<usize>, Vec<F::Elem>>| -> F::Elem {
            if let Some(t) = traces.get(e) {
                return t.clone();
            }
            let v = self.elem_for(e, elems, &gens);
            let t = self.trace(&v);
            traces.insert(e.clone(), t.clone());
            t
        };
        let mut g = vec![vec![self.base.zero(); n]; n];
        for i in 0..n {
            for j in i..n {
                let e: Vec<usize> = exps[i].iter().zip(&exps[j]).map(|(a, b)| a + b).collect();
                let t = get(&e, &mut elems);
                g[i][j] = t.clone();
                g[j][i] = t;
            }
        }
        g
    }

    fn elem_for(
        &self,
        e: &Vec<usize>,
        elems: &mut HashMap<Vec<usize>, Vec<F::Elem>>,
        gens: &[Vec<F::Elem>],
    ) -> Vec<F::Elem> {
        if let Some(v) = elems.get(e) {
            return v.clone();
        }
        let l = e.iter().position(|&x| x > 0).unwrap();
        let mut prev = e.clone();
        prev[l] -= 1;
        let v = self.elem_for(&prev, elems, gens);
        let out = self.mul(&v, &gens[l]);
        elems.insert(e.clone(), out.clone());
        out
    }
}

fn add_vec<F: Ring>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    a.iter().zip(b).map(|(x, y)| k.add(x, y)).collect()
}

fn sub_vec<F: Ring>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    a.iter().zip(b).map(|(x, y)| k.sub(x, y)).collect()
}

impl<F: Field> Ring for EtaleAlgebra<F> {
    type Elem = Vec<F::Elem>;

    fn zero(&self) -> Vec<F::Elem> {
        vec![self.base.zero(); self.dim()]
    }
    fn one(&self) -> Vec<F::Elem> {
        self.scalar(&self.base.one())
    }
    fn from_i64(&self, n: i64) -> Vec<F::Elem> {
        self.scalar(&self.base.from_i64(n))
    }
    fn add(&self, a: &Vec<F::Elem>, b: &Vec<F::Elem>) -> Vec<F::Elem> {
        add_vec(&self.base, a, b)
    }
    fn sub(&self, a: &Vec<F::Elem>, b: &Vec<F::Elem>) -> Vec<F::Elem> {
        sub_vec(&self.base, a, b)
    }
    fn neg(&self, a: &Vec<F::Elem>) -> Vec<F::Elem> {
        a.iter().map(|x| self.base.neg(x)).collect()
    }
    fn mul(&self, a: &Vec<F::Elem>, b: &Vec<F::Elem>) -> Vec<F::Elem> {
        self.mul_flat(a, b)
    }
    fn is_zero(&self, a: &Vec<F::Elem>) -> bool {
        a.iter().all(|x| self.base.is_zero(x))
    }
    fn is_one(&self, a: &Vec<F::Elem>) -> bool {
        self.base.is_one(&a[0]) && a[1..].iter().all(|x| self.base.is_zero(x))
    }
}

/// Inversion succeeds exactly on units, so an algebra that happens to be a
/// field behaves as one.
impl<F: Field> Field for EtaleAlgebra<F> {
    fn inv(&self, a: &Vec<F::Elem>) -> Option<Vec<F::Elem>> {
        self.invert(a).ok()
    }
    fn characteristic(&self) -> u64 {
        self.base.characteristic()
    }
}

impl EtaleAlgebra<GaloisField> {
    /// The same algebra as a tower over F_p, with the base field's modulus
    /// as the new innermost level. Flattened elements concatenate the
    /// coordinate vectors of the base-field coefficients.
    pub fn over_prime_field(&self) -> Result<EtaleAlgebra<PrimeField>> {
        let k = &self.base;
        let prime = k.prime_field().clone();
        let mut tower: Vec<(String, Vec<Vec<u64>>)> = vec![(
            "a".to_string(),
            k.modulus().iter().map(|&c| vec![c]).collect(),
        )];
        for l in 0..self.levels() {
            let m = self.moduli[l].iter().map(|c| flatten(c)).collect();
            tower.push((self.names[l].clone(), m));
        }
        EtaleAlgebra::new(prime, tower)
    }
}

/// Concatenates extension-field coordinates into a prime-field vector.
pub fn flatten(x: &[Vec<u64>]) -> Vec<u64> {
    x.concat()
}

/// Splits a prime-field vector into extension-field coordinate chunks.
pub fn unflatten(x: &[u64], d: usize) -> Vec<Vec<u64>> {
    x.chunks(d).map(|c| c.to_vec()).collect()
}

/// One field factor of an etale algebra over F_p: a finite field and the
/// images of the tower generators in it.
#[derive(Clone, Debug)]
pub struct FieldFactor {
    pub field: GaloisField,
    pub images: Vec<Vec<u64>>,
}

impl FieldFactor {
    pub fn degree(&self) -> usize {
        self.field.degree()
    }

    /// Image of an algebra element.
    pub fn project(&self, alg: &EtaleAlgebra<PrimeField>, x: &[u64]) -> Vec<u64> {
        self.project_level(alg, alg.levels(), x)
    }

    fn project_level(&self, alg: &EtaleAlgebra<PrimeField>, l: usize, x: &[u64]) -> Vec<u64> {
        let f = &self.field;
        if l == 0 {
            return f.from_prime(x[0]);
        }
        let sub = alg.dims[l - 1];
        let parts: Vec<Vec<u64>> = x.chunks(sub).map(|c| self.project_level(alg, l - 1, c)).collect();
        poly::eval(f, &parts, &self.images[l - 1])
    }
}

/// Complete splitting of an etale algebra over F_p into finite fields,
/// with the inverse (Chinese remainder) map.
#[derive(Clone, Debug)]
pub struct FieldFactorization {
    pub factors: Vec<FieldFactor>,
    lift: Matrix<u64>,
}

impl FieldFactorization {
    /// Concatenated factor coordinates of `x`.
    pub fn components(&self, alg: &EtaleAlgebra<PrimeField>, x: &[u64]) -> Vec<Vec<u64>> {
        self.factors.iter().map(|f| f.project(alg, x)).collect()
    }

    /// The unique algebra element with the given images.
    pub fn lift(&self, alg: &EtaleAlgebra<PrimeField>, comps: &[Vec<u64>]) -> Vec<u64> {
        let v: Vec<u64> = comps.concat();
        matrix::mat_vec(alg.base(), &self.lift, &v)
    }
}

impl EtaleAlgebra<PrimeField> {
    /// Splits the algebra into finite fields. Each level's modulus is
    /// factored over every field reached so far; irreducible factors of
    /// degree above one are realized in a freshly chosen field of the
    /// combined degree via root finding.
    pub fn field_factors(&self, seed: u64) -> FieldFactorization {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fp = &self.base;
        let p = fp.p();
        let mut current = vec![FieldFactor {
            field: GaloisField::new_unchecked(fp.clone(), vec![0, 1]),
            images: Vec::new(),
        }];
        for l in 1..=self.levels() {
            let mut next = Vec::new();
            for fac in &current {
                let k = &fac.field;
                let m: Vec<Vec<u64>> = self.moduli[l - 1]
                    .iter()
                    .map(|c| fac.project_level(self, l - 1, c))
                    .collect();
                for (g, mult) in factor(k, &m, &mut rng) {
                    debug_assert_eq!(mult, 1, "etale moduli are squarefree");
                    let e = g.len() - 1;
                    if e == 1 {
                        let mut images = fac.images.clone();
                        images.push(k.neg(&g[0]));
                        next.push(FieldFactor {
                            field: k.clone(),
                            images,
                        });
                        continue;
                    }
                    let big_deg = k.degree() * e;
                    let modulus = find_irreducible(fp, big_deg, &mut rng);
                    let big = GaloisField::new_unchecked(fp.clone(), modulus);
                    let kmod: Vec<Vec<u64>> = k.modulus().iter().map(|&c| big.from_prime(c)).collect();
                    let theta = roots(&big, &kmod, &mut rng)
                        .into_iter()
                        .next()
                        .expect("subfield modulus splits in the extension");
                    let embed = |x: &Vec<u64>| -> Vec<u64> {
                        let cs: Vec<Vec<u64>> = x.iter().map(|&c| big.from_prime(c)).collect();
                        poly::eval(&big, &cs, &theta)
                    };
                    let g_big: Vec<Vec<u64>> = g.iter().map(&embed).collect();
                    let rho = roots(&big, &g_big, &mut rng)
                        .into_iter()
                        .next()
                        .expect("irreducible factor splits in the extension");
                    let mut images: Vec<Vec<u64>> = fac.images.iter().map(&embed).collect();
                    images.push(rho);
                    next.push(FieldFactor { field: big, images });
                }
            }
            current = next;
        }
        // the map x -> (images) as a square matrix over F_p, inverted once
        let n = self.dim();
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut b = vec![0u64; n];
            b[j] = 1;
            let comp: Vec<u64> = current.iter().flat_map(|f| f.project(self, &b)).collect();
            cols.push(comp);
        }
        let proj = matrix::transpose(&cols);
        let lift = matrix::inverse(fp, &proj).expect("etale algebra is a product of its factors");
        let _ = p;
        FieldFactorization {
            factors: current,
            lift,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::Rationals;
    use num_rational::BigRational;
    use rand::Rng;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn construction_examples() {
        let a = EtaleAlgebra::simple(fp(7), "w", vec![4, 0, 0, 0, 0, 1]).unwrap();
        assert_eq!(a.dim(), 5);
        let q = Rationals;
        let r = |n: i64| BigRational::from_integer(n.into());
        let b = EtaleAlgebra::simple(q, "w", vec![r(-1), r(0), r(1)]).unwrap();
        assert_eq!(b.dim(), 2);
        assert_eq!(
            EtaleAlgebra::simple(fp(7), "w", vec![0, 0, 1]).unwrap_err(),
            Error::NotEtale { level: 1 }
        );
    }

    #[test]
    fn norm_trace_examples() {
        let a = EtaleAlgebra::simple(fp(7), "w", vec![4, 0, 1]).unwrap(); // w^2 - 3
        let w = a.generator(1);
        assert_eq!(a.norm_and_trace(&w), (4, 0));
        assert_eq!(a.norm_and_trace(&a.one()), (1, 2));
        let b = EtaleAlgebra::simple(fp(11), "w", vec![11 - 6, 0, 0, 0, 0, 1]).unwrap(); // w^5 - 6
        assert_eq!(b.norm_and_trace(&b.generator(1)), (6, 0));
    }

    #[test]
    fn inversion_examples() {
        let k = EtaleAlgebra::simple(fp(7), "w", vec![0, 1]).unwrap(); // F7 itself
        assert_eq!(k.invert(&vec![2]).unwrap(), vec![4]);
        let a = EtaleAlgebra::simple(fp(7), "w", vec![4, 0, 0, 0, 0, 1]).unwrap(); // w^5 - 3
        let inv = a.invert(&a.generator(1)).unwrap();
        assert_eq!(inv, vec![0, 0, 0, 0, 5]);
        assert_eq!(a.mul(&inv, &a.generator(1)), a.one());
        let q = Rationals;
        let r = |n: i64| BigRational::from_integer(n.into());
        let split = EtaleAlgebra::simple(q, "w", vec![r(-1), r(0), r(1)]).unwrap();
        // (1 + w)/2 is the idempotent for w = 1
        let e = vec![BigRational::new(1.into(), 2.into()), BigRational::new(1.into(), 2.into())];
        assert!(matches!(split.invert(&e), Err(Error::NotAUnit(_))));
    }

    #[test]
    fn factor_degrees() {
        let degs = |p: u64, m: Vec<u64>| -> Vec<usize> {
            let a = EtaleAlgebra::simple(fp(p), "x", m).unwrap();
            let mut d: Vec<usize> = a.field_factors(1).factors.iter().map(|f| f.degree()).collect();
            d.sort();
            d
        };
        assert_eq!(degs(11, vec![10, 0, 0, 0, 0, 1]), vec![1, 1, 1, 1, 1]);
        assert_eq!(degs(7, vec![6, 0, 0, 0, 0, 1]), vec![1, 4]);
        assert_eq!(degs(7, vec![4, 0, 1]), vec![2]);
    }

    fn fermat_pair(p: u64) -> EtaleAlgebra<PrimeField> {
        let one = |c: u64| vec![c];
        let m1: Vec<Vec<u64>> = vec![one(p - 1), one(0), one(0), one(0), one(0), one(1)];
        let m2: Vec<Vec<u64>> = vec![
            vec![p - 1, 0, 0, 0, 0],
            vec![0; 5],
            vec![0; 5],
            vec![0; 5],
            vec![0; 5],
            vec![1, 0, 0, 0, 0],
        ];
        EtaleAlgebra::new(fp(p), vec![("x".into(), m1), ("y".into(), m2)]).unwrap()
    }

    #[test]
    fn factors_respect_norm_and_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for p in [3u64, 7, 13] {
            let a = fermat_pair(p);
            let ff = a.field_factors(p);
            assert_eq!(ff.factors.iter().map(|f| f.degree()).sum::<usize>(), 25);
            for _ in 0..5 {
                let x: Vec<u64> = (0..25).map(|_| rng.gen_range(0..p)).collect();
                let comps = ff.components(&a, &x);
                let tr: u64 = ff
                    .factors
                    .iter()
                    .zip(&comps)
                    .map(|(f, c)| {
                        let alg = EtaleAlgebra::simple(fp(p), "a", f.field.modulus().to_vec()).unwrap();
                        alg.trace(c)
                    })
                    .fold(0, |s, t| (s + t) % p);
                assert_eq!(tr, a.trace(&x));
                let nm = ff.factors.iter().zip(&comps).fold(1u64, |s, (f, c)| {
                    let alg = EtaleAlgebra::simple(fp(p), "a", f.field.modulus().to_vec()).unwrap();
                    s * alg.norm(c) % p
                });
                assert_eq!(nm, a.norm(&x));
                assert_eq!(ff.lift(&a, &comps), x);
            }
        }
    }

    #[test]
    fn tower_trace_equals_flattened_trace() {
        // F7[u]/(u^2 - 3)[v]/(v^3 - u) against F7[v]/(v^6 - 3)
        let f7 = fp(7);
        let tower = EtaleAlgebra::new(
            f7.clone(),
            vec![
                ("u".into(), vec![vec![4], vec![0], vec![1]]),
                ("v".into(), vec![vec![0, 6], vec![0, 0], vec![0, 0], vec![1, 0]]),
            ],
        )
        .unwrap();
        let flat = EtaleAlgebra::simple(f7, "v", vec![4, 0, 0, 0, 0, 0, 1]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..20 {
            // x = sum c_{ij} u^i v^j maps to sum c_{ij} v^{3i + j}
            let c: Vec<u64> = (0..6).map(|_| rng.gen_range(0..7)).collect();
            let mut y = vec![0u64; 6];
            for i in 0..2 {
                for j in 0..3 {
                    y[3 * i + j] = c[i + 2 * j];
                }
            }
            assert_eq!(tower.trace(&c), flat.trace(&y));
            assert_eq!(tower.norm(&c), flat.norm(&y));
        }
    }
}
