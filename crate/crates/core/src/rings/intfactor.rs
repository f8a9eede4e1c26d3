//! Integer square-class reduction for rational square classes.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, ToPrimitive, Zero};

use super::is_prime_u64;
use crate::error::{Error, Result};

const TRIAL_BOUND: u64 = 10_000;
const RHO_STEPS: u64 = 200_000;

/// Exact square root of a nonnegative integer, if it is a perfect square.
pub fn exact_sqrt(n: &BigUint) -> Option<BigUint> {
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

fn rho(n: u128) -> Option<u128> {
    if n % 2 == 0 {
        return Some(2);
    }
    let mulmod = |a: u128, b: u128| -> u128 {
        if n <= u64::MAX as u128 {
            return (a % n) * (b % n) % n;
        }
        // Double-and-add keeps every intermediate below 2n.
        let (mut a, mut b, mut r) = (a % n, b, 0u128);
        while b > 0 {
            if b & 1 == 1 {
                r = (r + a) % n;
            }
            a = (a << 1) % n;
            b >>= 1;
        }
        r
    };
    let gcd = |mut a: u128, mut b: u128| {
        while b != 0 {
            let t = a % b;
            a = b;
            b = t;
        }
        a
    };
    // Bounded so that hard cofactors fail fast with FactorizationFailed.
    for c in 1..16u128 {
        let f = |x: u128| (mulmod(x, x) + c) % n;
        let (mut x, mut y, mut d) = (2u128, 2u128, 1u128);
        let mut steps = 0u64;
        while d == 1 && steps < RHO_STEPS {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
            steps += 1;
        }
        if d != 1 && d != n {
            return Some(d);
        }
    }
    None
}

fn is_probable_prime_u128(n: u128) -> bool {
    if let Some(m) = n.to_u64() {
        return is_prime_u64(m);
    }
    let mulmod = |a: u128, b: u128| -> u128 {
        let (mut a, mut b, mut r) = (a % n, b, 0u128);
        while b > 0 {
            if b & 1 == 1 {
                r = (r + a) % n;
            }
            a = (a << 1) % n;
            b >>= 1;
        }
        r
    };
    let powmod = |mut a: u128, mut e: u128| {
        let mut r = 1u128;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, a);
            }
            a = mulmod(a, a);
            e >>= 1;
        }
        r
    };
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for a in [2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Prime factorization of a u128 cofactor with no prime factor below the
/// trial bound; `None` if Pollard rho gives up.
fn factor_u128(n: u128, out: &mut Vec<u128>) -> Option<()> {
    if n == 1 {
        return Some(());
    }
    if is_probable_prime_u128(n) {
        out.push(n);
        return Some(());
    }
    let d = rho(n)?;
    factor_u128(d, out)?;
    factor_u128(n / d, out)
}

/// Splits `n` (nonzero) into sign times squarefree part, returning the
/// squarefree part and whether the result is certified squarefree.
fn reduce(n: &BigInt) -> (BigInt, bool) {
    assert!(!n.is_zero());
    let sign = n.sign();
    let mut m = n.magnitude().clone();
    let mut part = BigUint::one();
    let mut p = 2u64;
    while p <= TRIAL_BOUND {
        let pb = BigUint::from(p);
        if (&pb * &pb) > m {
            break;
        }
        let mut e = 0;
        while (&m % &pb).is_zero() {
            m /= &pb;
            e += 1;
        }
        if e % 2 == 1 {
            part *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let mut certified = true;
    if m > BigUint::one() {
        if exact_sqrt(&m).is_some() {
            // square cofactor contributes nothing
        } else if let Some(v) = m.to_u128() {
            let mut fs = Vec::new();
            if factor_u128(v, &mut fs).is_some() {
                fs.sort_unstable();
                let mut i = 0;
                while i < fs.len() {
                    let mut j = i;
                    while j < fs.len() && fs[j] == fs[i] {
                        j += 1;
                    }
                    if (j - i) % 2 == 1 {
                        part *= BigUint::from(fs[i]);
                    }
                    i = j;
                }
            } else {
                part *= m;
                certified = false;
            }
        } else {
            part *= m;
            certified = false;
        }
    }
    let s = if sign == Sign::Minus { Sign::Minus } else { Sign::Plus };
    (BigInt::from_biguint(s, part), certified)
}

/// Distinct prime divisors of a nonzero integer.
pub fn prime_divisors(n: &BigUint) -> Result<Vec<BigUint>> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    let mut m = n.clone();
    let mut out = Vec::new();
    let mut p = 2u64;
    while p <= TRIAL_BOUND {
        let pb = BigUint::from(p);
        if (&pb * &pb) > m {
            break;
        }
        if (&m % &pb).is_zero() {
            out.push(pb.clone());
            while (&m % &pb).is_zero() {
                m /= &pb;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > BigUint::one() {
        let root = exact_sqrt(&m).unwrap_or_else(|| m.clone());
        let v = root.to_u128().ok_or_else(|| Error::FactorizationFailed(m.to_string()))?;
        let mut fs = Vec::new();
        factor_u128(v, &mut fs).ok_or_else(|| Error::FactorizationFailed(m.to_string()))?;
        fs.sort_unstable();
        fs.dedup();
        out.extend(fs.into_iter().map(BigUint::from));
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Square-class representative of a nonzero integer: squarefree whenever the
/// factorization succeeds, otherwise a valid but possibly non-squarefree
/// representative.
pub fn class_representative(n: &BigInt) -> BigInt {
    reduce(n).0
}

/// Signed squarefree part of a nonzero integer.
pub fn squarefree_part(n: &BigInt) -> Result<BigInt> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    match reduce(n) {
        (s, true) => Ok(s),
        (s, false) => Err(Error::FactorizationFailed(s.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(n: i64) -> i64 {
        let mut m = n.abs();
        let mut part = 1;
        let mut p = 2;
        while p * p <= m {
            while m % (p * p) == 0 {
                m /= p * p;
            }
            if m % p == 0 {
                part *= p;
                m /= p;
            }
            p += 1;
        }
        part * m * n.signum()
    }

    #[test]
    fn small_values_match_brute_force() {
        for n in -500i64..=500 {
            if n != 0 {
                assert_eq!(squarefree_part(&BigInt::from(n)).unwrap(), BigInt::from(brute(n)), "{n}");
            }
        }
    }

    #[test]
    fn prime_divisors_of_small_values() {
        assert_eq!(prime_divisors(&BigUint::from(360u32)).unwrap(), vec![2u32.into(), 3u32.into(), 5u32.into()]);
        assert_eq!(prime_divisors(&BigUint::from(1u32)).unwrap(), Vec::<BigUint>::new());
        let big = BigUint::from(1_000_003u64) * BigUint::from(998_244_353u64);
        assert_eq!(prime_divisors(&big).unwrap(), vec![1_000_003u64.into(), 998_244_353u64.into()]);
    }

    #[test]
    fn large_cofactors() {
        // product of two primes above the trial bound, squared times a prime
        let p = BigInt::from(1_000_003u64);
        let q = BigInt::from(998_244_353u64);
        let n = &p * &p * &q * BigInt::from(12);
        assert_eq!(squarefree_part(&n).unwrap(), &q * BigInt::from(3));
        let n = &p * &q;
        assert_eq!(squarefree_part(&(-n.clone())).unwrap(), -n);
    }
}
