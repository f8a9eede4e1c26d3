//! Hilbert symbols and Hasse invariants of diagonal forms over Q. Together
//! with rank, discriminant and signature they classify forms over Q.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Result;
use crate::rings::intfactor::prime_divisors;

/// `n = p^v u` with `p` not dividing `u`.
fn split(n: &BigInt, p: &BigInt) -> (u32, BigInt) {
    let mut u = n.clone();
    let mut v = 0;
    while (&u % p).is_zero() {
        u /= p;
        v += 1;
    }
    (v, u)
}

/// Legendre symbol of a unit `u` modulo an odd prime `p`.
fn legendre(u: &BigInt, p: &BigInt) -> i32 {
    let e = (p - 1u32) / 2u32;
    let r = u.mod_floor(p).modpow(&e, p);
    if r.is_one() {
        1
    } else {
        -1
    }
}

/// Hilbert symbol `(a, b)_p` of nonzero integers.
pub fn hilbert(a: &BigInt, b: &BigInt, p: &BigUint) -> i32 {
    let pi = BigInt::from(p.clone());
    let (alpha, u) = split(a, &pi);
    let (beta, v) = split(b, &pi);
    if *p == BigUint::from(2u32) {
        let m8 = |x: &BigInt| x.mod_floor(&BigInt::from(8)).to_u32().unwrap();
        let eps = |x: u32| (x.wrapping_sub(1) / 2) % 2;
        let omega = |x: u32| ((x * x - 1) / 8) % 2;
        let (u8_, v8) = (m8(&u), m8(&v));
        let e = eps(u8_) * eps(v8) + alpha * omega(v8) + beta * omega(u8_);
        return if e % 2 == 0 { 1 } else { -1 };
    }
    let half: BigInt = (&pi - 1u32) / 2u32;
    let eps_p = half.is_odd();
    let mut s = if eps_p && (alpha * beta) % 2 == 1 { -1 } else { 1 };
    if beta % 2 == 1 {
        s *= legendre(&u, &pi);
    }
    if alpha % 2 == 1 {
        s *= legendre(&v, &pi);
    }
    s
}

/// `prod_{i < j} (a_i, a_j)_p`.
pub fn hasse_invariant(entries: &[BigInt], p: &BigUint) -> i32 {
    let mut s = 1;
    for i in 0..entries.len() {
        for j in i + 1..entries.len() {
            s *= hilbert(&entries[i], &entries[j], p);
        }
    }
    s
}

/// Whether two diagonal forms with nonzero integer entries have the same
/// Hasse invariant at every prime. Only 2 and primes dividing an entry
/// can differ.
pub fn hasse_agree(a: &[BigInt], b: &[BigInt]) -> Result<bool> {
    let mut primes = vec![BigUint::from(2u32)];
    for e in a.iter().chain(b) {
        primes.extend(prime_divisors(e.abs().magnitude())?);
    }
    primes.sort();
    primes.dedup();
    Ok(primes.iter().all(|p| hasse_invariant(a, p) == hasse_invariant(b, p)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: i64) -> BigInt {
        BigInt::from(n)
    }

    /// `(a, b)_p = 1` iff `a x^2 + b y^2 = z^2` has a nontrivial solution
    /// modulo p^2 (odd p, squarefree entries) or 32; brute force.
    fn brute(a: i64, b: i64, p: u64) -> i32 {
        let m = if p == 2 { 32 } else { (p * p) as i64 };
        for x in 0..m {
            for y in 0..m {
                for zz in 0..m {
                    // primitive: not all divisible by p
                    if x % p as i64 == 0 && y % p as i64 == 0 && zz % p as i64 == 0 {
                        continue;
                    }
                    if (a * x * x + b * y * y - zz * zz).rem_euclid(m) == 0 {
                        return 1;
                    }
                }
            }
        }
        -1
    }

    #[test]
    fn hilbert_matches_brute_force() {
        for p in [2u64, 3, 5, 7] {
            for a in [-7i64, -6, -3, -2, -1, 1, 2, 3, 5, 6, 7, 10, 14, 15] {
                for b in [-5i64, -3, -2, -1, 1, 2, 3, 7] {
                    let h = hilbert(&z(a), &z(b), &BigUint::from(p));
                    assert_eq!(h, brute(a, b, p), "({a},{b})_{p}");
                }
            }
        }
    }

    #[test]
    fn hasse_distinguishes_sums_of_squares() {
        // <1,1> ~ <2,2> but <1,1> !~ <3,3>
        assert!(hasse_agree(&[z(1), z(1)], &[z(2), z(2)]).unwrap());
        assert!(!hasse_agree(&[z(1), z(1)], &[z(3), z(3)]).unwrap());
    }
}
