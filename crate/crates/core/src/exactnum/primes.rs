//! Deterministic primality testing and factorization of machine-sized integers.

use num_bigint::BigUint;
use num_integer::Integer;

use crate::error::{Error, Result};

/// Miller–Rabin with the first thirteen prime bases is deterministic below
/// this bound.
pub const MILLER_RABIN_BOUND: u128 = 3_317_044_064_679_887_385_961_981;

const BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

const TRIAL_LIMIT: u64 = 1_000_000;

fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    if m <= u64::MAX as u128 {
        (a * b) % m
    } else {
        let r = (BigUint::from(a) * BigUint::from(b)) % BigUint::from(m);
        u128::try_from(r).expect("residue below modulus")
    }
}

fn pow_mod(mut base: u128, mut exp: u128, m: u128) -> u128 {
    let mut acc = 1u128 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality test for `n < MILLER_RABIN_BOUND`.
pub fn is_prime(n: u128) -> Result<bool> {
    if n >= MILLER_RABIN_BOUND {
        return Err(Error::PrimalityBound(n.to_string()));
    }
    if n < 2 {
        return Ok(false);
    }
    for &p in &BASES {
        let p = p as u128;
        if n == p {
            return Ok(true);
        }
        if n.is_multiple_of(p) {
            return Ok(false);
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a as u128, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return Ok(false);
    }
    Ok(true)
}

/// Convenience wrapper for callers that already hold a `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    is_prime(n as u128).expect("u64 is below the Miller-Rabin bound")
}

/// Sieve of Eratosthenes: all primes `< bound`.
pub fn primes_below(bound: u64) -> Vec<u64> {
    if bound < 3 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n];
    let mut out = Vec::new();
    for i in 2..n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j < n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

fn pollard_brent(n: u64) -> u64 {
    let n128 = n as u128;
    for c in 1u64.. {
        let f = |x: u64| ((x as u128 * x as u128 + c as u128) % n128) as u64;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        let mut q = 1u64;
        let mut ys = 2u64;
        let mut r = 1u64;
        let m = 128u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = ((q as u128 * x.abs_diff(y) as u128) % n128) as u64;
                }
                g = q.gcd(&n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

fn split_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        out.push(n);
        return;
    }
    let d = pollard_brent(n);
    split_into(d, out);
    split_into(n / d, out);
}

/// Prime factorization `n = prod p^e`, primes ascending.
///
/// Trial division by 2, 3 and the 6k±1 wheel up to 10^6, then Pollard–Brent
/// on whatever cofactor remains.
pub fn factorize(mut n: u64) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(Error::Zero);
    }
    let mut out: Vec<(u64, u32)> = Vec::new();
    let mut push = |p: u64, n: &mut u64| {
        let mut e = 0;
        while (*n).is_multiple_of(p) {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(2, &mut n);
    push(3, &mut n);
    let mut p = 5u64;
    while p <= TRIAL_LIMIT && p * p <= n {
        push(p, &mut n);
        push(p + 2, &mut n);
        p += 6;
    }
    if n > 1 {
        let mut rest = Vec::new();
        split_into(n, &mut rest);
        rest.sort_unstable();
        for q in rest {
            match out.last_mut() {
                Some((last, e)) if *last == q => *e += 1,
                _ => out.push((q, 1)),
            }
        }
    }
    Ok(out)
}
