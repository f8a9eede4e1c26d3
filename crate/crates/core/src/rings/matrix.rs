//! Dense matrices as row vectors: elimination over fields and a
//! division-free determinant over any commutative ring.

use super::{Field, Ring};

pub type Matrix<E> = Vec<Vec<E>>;

pub fn identity<R: Ring>(r: &R, n: usize) -> Matrix<R::Elem> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { r.one() } else { r.zero() }).collect())
        .collect()
}

pub fn transpose<E: Clone>(m: &Matrix<E>) -> Matrix<E> {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mat_mul<R: Ring>(r: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    let inner = b.len();
    let cols = b.first().map_or(0, |row| row.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let terms: Vec<_> = (0..inner).map(|k| (&row[k], &b[k][j])).collect();
                    r.sum_of_products(&terms)
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec<R: Ring>(r: &R, a: &Matrix<R::Elem>, v: &[R::Elem]) -> Vec<R::Elem> {
    a.iter()
        .map(|row| {
            let terms: Vec<_> = row.iter().zip(v).collect();
            r.sum_of_products(&terms)
        })
        .collect()
}

/// Determinant by Laplace expansion over column prefixes, memoized on the
/// set of used rows. Needs no division, so it works over any ring.
pub fn det_ring<R: Ring>(r: &R, m: &Matrix<R::Elem>) -> R::Elem {
    let n = m.len();
    if n == 0 {
        return r.one();
    }
    assert!(n <= 20, "division-free determinant is exponential in n");
    // dp[mask] = signed sum over injective maps of the first popcount(mask)
    // columns onto the rows in mask
    let mut dp: Vec<Option<R::Elem>> = vec![None; 1 << n];
    dp[0] = Some(r.one());
    for mask in 0usize..(1 << n) {
        let Some(val) = dp[mask].clone() else { continue };
        if r.is_zero(&val) {
            continue;
        }
        let col = mask.count_ones() as usize;
        if col == n {
            continue;
        }
        for row in 0..n {
            if mask & (1 << row) != 0 || r.is_zero(&m[row][col]) {
                continue;
            }
            // sign of inserting `row` after the rows already placed that
            // are larger than it
            let above = (mask >> row).count_ones();
            let term = r.mul(&val, &m[row][col]);
            let term = if above % 2 == 1 { r.neg(&term) } else { term };
            let slot = &mut dp[mask | (1 << row)];
            *slot = Some(match slot.take() {
                None => term,
                Some(prev) => r.add(&prev, &term),
            });
        }
    }
    dp[(1 << n) - 1].clone().unwrap_or_else(|| r.zero())
}

/// Row echelon reduction in place; returns pivot columns and the sign of
/// the row permutation.
fn echelon<F: Field>(k: &F, m: &mut Matrix<F::Elem>) -> (Vec<usize>, bool) {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut flip = false;
    let mut r0 = 0;
    for c in 0..cols {
        if r0 == rows {
            break;
        }
        let Some(piv) = (r0..rows).find(|&i| !k.is_zero(&m[i][c])) else { continue };
        if piv != r0 {
            m.swap(piv, r0);
            flip = !flip;
        }
        let inv = k.inv(&m[r0][c]).unwrap();
        for i in r0 + 1..rows {
            if k.is_zero(&m[i][c]) {
                continue;
            }
            let f = k.mul(&m[i][c], &inv);
            for j in c..cols {
                let t = k.mul(&f, &m[r0][j]);
                m[i][j] = k.sub(&m[i][j], &t);
            }
        }
        pivots.push(c);
        r0 += 1;
    }
    (pivots, flip)
}

pub fn det<F: Field>(k: &F, m: &Matrix<F::Elem>) -> F::Elem {
    let n = m.len();
    let mut a = m.clone();
    let (pivots, flip) = echelon(k, &mut a);
    if pivots.len() < n {
        return k.zero();
    }
    let mut d = k.one();
    for (i, row) in a.iter().enumerate() {
        d = k.mul(&d, &row[i]);
    }
    if flip {
        k.neg(&d)
    } else {
        d
    }
}

pub fn rank<F: Field>(k: &F, m: &Matrix<F::Elem>) -> usize {
    let mut a = m.clone();
    echelon(k, &mut a).0.len()
}

/// Reduced row echelon form and pivot columns.
pub fn rref<F: Field>(k: &F, m: &Matrix<F::Elem>) -> (Matrix<F::Elem>, Vec<usize>) {
    let mut a = m.clone();
    let (pivots, _) = echelon(k, &mut a);
    for (r, &c) in pivots.iter().enumerate().rev() {
        let inv = k.inv(&a[r][c]).unwrap();
        for x in a[r].iter_mut() {
            *x = k.mul(x, &inv);
        }
        for i in 0..r {
            if k.is_zero(&a[i][c]) {
                continue;
            }
            let f = a[i][c].clone();
            for j in 0..a[i].len() {
                let t = k.mul(&f, &a[r][j]);
                a[i][j] = k.sub(&a[i][j], &t);
            }
        }
    }
    (a, pivots)
}

/// Basis of the right kernel `{x : m x = 0}`.
pub fn kernel<F: Field>(k: &F, m: &Matrix<F::Elem>) -> Vec<Vec<F::Elem>> {
    let cols = m.first().map_or(0, |r| r.len());
    let (a, pivots) = rref(k, m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![k.zero(); cols];
            v[f] = k.one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = k.neg(&a[r][f]);
            }
            v
        })
        .collect()
}

/// The unique solution of `m x = b` for square invertible `m`.
pub fn solve<F: Field>(k: &F, m: &Matrix<F::Elem>, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
    let n = m.len();
    let aug: Matrix<F::Elem> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (a, pivots) = rref(k, &aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
        return None;
    }
    Some(a.iter().map(|row| row[n].clone()).collect())
}

pub fn inverse<F: Field>(k: &F, m: &Matrix<F::Elem>) -> Option<Matrix<F::Elem>> {
    let n = m.len();
    let aug: Matrix<F::Elem> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { k.one() } else { k.zero() }));
            r
        })
        .collect();
    let (a, pivots) = rref(k, &aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(a.iter().map(|row| row[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::{PrimeField, Rationals};
    use num_rational::BigRational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn division_free_matches_elimination() {
        let k = PrimeField::new(13).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..7 {
            for _ in 0..20 {
                let m: Matrix<u64> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..13)).collect()).collect();
                assert_eq!(det_ring(&k, &m), det(&k, &m));
            }
        }
    }

    #[test]
    fn rational_solve_and_kernel() {
        let q = Rationals;
        let r = |n: i64| BigRational::from_integer(n.into());
        let m = vec![vec![r(2), r(1)], vec![r(1), r(3)]];
        let x = solve(&q, &m, &[r(3), r(4)]).unwrap();
        assert_eq!(x, vec![r(1), r(1)]);
        let sing = vec![vec![r(1), r(2)], vec![r(2), r(4)]];
        assert!(solve(&q, &sing, &[r(1), r(1)]).is_none());
        let ker = kernel(&q, &sing);
        assert_eq!(ker.len(), 1);
        assert!(mat_vec(&q, &sing, &ker[0]).iter().all(|c| *c == r(0)));
        let inv = inverse(&q, &m).unwrap();
        assert_eq!(mat_mul(&q, &m, &inv), identity(&q, 2));
    }
}
