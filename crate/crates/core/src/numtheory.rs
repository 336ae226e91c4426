//! Small integer helpers: primality, trial-division factoring and exact
//! square tests.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exactpoly::BigRat;

const TRIAL_BOUND: u64 = 1_000_000;

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

pub fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &WITNESSES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Strong probable-prime test for big integers (fixed bases).
fn is_probable_prime_big(n: &BigInt) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime(small);
    }
    if n.is_even() {
        return false;
    }
    let one = BigInt::one();
    let n1 = n - &one;
    let mut d = n1.clone();
    let mut s = 0u32;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'outer: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x == one || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&BigInt::from(2), n);
            if x == n1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Trial division of a `u64`; returns the factorization found below the
/// trial bound and the remaining cofactor (1 when complete).
pub fn prime_factors_small(mut n: u64) -> (Vec<(u64, u32)>, u64) {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n && p <= TRIAL_BOUND {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 && (n < TRIAL_BOUND * TRIAL_BOUND || is_prime(n)) {
        out.push((n, 1));
        n = 1;
    }
    (out, n)
}

/// Prime factorization of `|n|` for `n != 0`. Returns `None` when a
/// composite cofactor survives trial division.
pub fn factor_big(n: &BigInt) -> Option<Vec<(BigInt, u32)>> {
    let mut n = n.abs();
    if n.is_zero() {
        return None;
    }
    let mut out = Vec::new();
    let mut p = 2u64;
    while p <= TRIAL_BOUND {
        let pb = BigInt::from(p);
        if &pb * &pb > n {
            break;
        }
        if (&n % &pb).is_zero() {
            let mut e = 0;
            while (&n % &pb).is_zero() {
                n /= &pb;
                e += 1;
            }
            out.push((pb, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > BigInt::one() {
        let bound = BigInt::from(TRIAL_BOUND);
        if n < &bound * &bound || is_probable_prime_big(&n) {
            out.push((n, 1));
        } else {
            return None;
        }
    }
    Some(out)
}

/// All positive divisors of `|n|`, or `None` if `n` could not be factored.
pub fn divisors_big(n: &BigInt) -> Option<Vec<BigInt>> {
    let factors = factor_big(n)?;
    let mut divs = vec![BigInt::one()];
    for (p, e) in factors {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pw = d.clone();
            for _ in 0..=e {
                next.push(pw.clone());
                pw *= &p;
            }
        }
        divs = next;
    }
    Some(divs)
}

/// Prime divisors of `|n|` below the trial bound plus any probable-prime
/// cofactor; the flag reports whether factoring was complete.
pub fn prime_divisors_big(n: &BigInt) -> (Vec<BigInt>, bool) {
    match factor_big(n) {
        Some(f) => (f.into_iter().map(|(p, _)| p).collect(), true),
        None => {
            let mut n = n.abs();
            let mut out = Vec::new();
            let mut p = 2u64;
            while p <= TRIAL_BOUND {
                let pb = BigInt::from(p);
                if (&n % &pb).is_zero() {
                    while (&n % &pb).is_zero() {
                        n /= &pb;
                    }
                    out.push(pb);
                }
                p += if p == 2 { 1 } else { 2 };
            }
            (out, false)
        }
    }
}

pub fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

/// Square of a rational number (after reduction to lowest terms).
pub fn is_rational_square(q: &BigRat) -> bool {
    is_perfect_square(q.numer()) && is_perfect_square(q.denom())
}

/// The first `count` primes, in order.
pub fn first_primes(count: usize) -> Vec<u64> {
    (2u64..).filter(|&n| is_prime(n)).take(count).collect()
}

/// Whether `a` is a nonzero square in `F_p`, for prime `p`.
pub fn is_nonzero_square_mod(a: &BigInt, p: u64) -> bool {
    let r = a.mod_floor(&BigInt::from(p)).to_u64().unwrap();
    if r == 0 {
        return false;
    }
    p == 2 || powmod(r, (p - 1) / 2, p) == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_matches_sieve() {
        let limit = 5000usize;
        let mut sieve = vec![true; limit];
        sieve[0] = false;
        sieve[1] = false;
        for i in 2..limit {
            if sieve[i] {
                for j in (i * i..limit).step_by(i) {
                    sieve[j] = false;
                }
            }
        }
        for (n, &expected) in sieve.iter().enumerate() {
            assert_eq!(is_prime(n as u64), expected, "{n}");
        }
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(3_215_031_751));
    }

    #[test]
    fn factoring() {
        assert_eq!(prime_factors_small(360), (vec![(2, 3), (3, 2), (5, 1)], 1));
        let divs = divisors_big(&BigInt::from(-12)).unwrap();
        let mut d: Vec<i64> = divs.iter().map(|x| x.to_i64().unwrap()).collect();
        d.sort();
        assert_eq!(d, vec![1, 2, 3, 4, 6, 12]);
        let big = BigInt::from(1_000_000_007u64) * BigInt::from(998_244_353u64);
        // Composite cofactor beyond the trial bound is not split.
        assert!(factor_big(&big).is_none());
        let (ps, complete) = prime_divisors_big(&(big * 6));
        assert!(!complete);
        assert_eq!(ps, vec![BigInt::from(2), BigInt::from(3)]);
    }

    #[test]
    fn squares() {
        assert!(is_perfect_square(&BigInt::from(49)));
        assert!(!is_perfect_square(&BigInt::from(-4)));
        assert!(!is_perfect_square(&BigInt::from(8)));
        assert!(is_rational_square(&BigRat::new(4.into(), 9.into())));
        assert!(is_nonzero_square_mod(&BigInt::from(-1), 5));
        assert!(!is_nonzero_square_mod(&BigInt::from(-1), 7));
        assert!(!is_nonzero_square_mod(&BigInt::from(14), 7));
    }

    #[test]
    fn first_few_primes() {
        assert_eq!(first_primes(6), vec![2, 3, 5, 7, 11, 13]);
    }
}
