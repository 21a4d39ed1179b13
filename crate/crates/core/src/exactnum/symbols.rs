//! Legendre, Jacobi and rational Hilbert symbols.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::primes::is_prime;
use crate::error::{Error, Result};

fn checked_odd_prime(p: &BigInt) -> Result<u128> {
    let small = p
        .to_u128()
        .ok_or_else(|| Error::NotOddPrime(p.to_string()))?;
    if small == 2 || !is_prime(small)? {
        return Err(Error::NotOddPrime(p.to_string()));
    }
    Ok(small)
}

/// Legendre symbol `(a/p)` by Euler's criterion. `p` must be an odd prime.
pub fn legendre(a: &BigInt, p: &BigInt) -> Result<i8> {
    checked_odd_prime(p)?;
    let r = a.mod_floor(p);
    if r.is_zero() {
        return Ok(0);
    }
    let e = (p - 1u32) >> 1;
    let v = r.modpow(&e, p);
    Ok(if v.is_one() { 1 } else { -1 })
}

/// Legendre symbol for machine-sized arguments.
pub fn legendre_i64(a: i64, p: u64) -> Result<i8> {
    legendre(&BigInt::from(a), &BigInt::from(p))
}

/// Jacobi symbol `(a/n)` for odd positive `n`.
pub fn jacobi(a: &BigInt, n: &BigInt) -> Result<i8> {
    if n.sign() != Sign::Plus || n.is_even() {
        return Err(Error::InvalidInput(format!(
            "Jacobi symbol needs an odd positive modulus, got {n}"
        )));
    }
    let mut a = a.mod_floor(n);
    let mut n = n.clone();
    let mut t = 1i8;
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let r = (&n % 8u32).to_u8().unwrap();
            if r == 3 || r == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u32).to_u8() == Some(3) && (&n % 4u32).to_u8() == Some(3) {
            t = -t;
        }
        a = a.mod_floor(&n);
    }
    Ok(if n.is_one() { t } else { 0 })
}

/// Jacobi symbol on machine integers; the sieve primitive behind triple search.
pub fn jacobi_i64(a: i64, n: u64) -> Result<i8> {
    if n.is_multiple_of(2) {
        return Err(Error::InvalidInput(format!(
            "Jacobi symbol needs an odd positive modulus, got {n}"
        )));
    }
    let mut a = a.rem_euclid(n as i64) as u64;
    let mut n = n;
    let mut t = 1i8;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    Ok(if n == 1 { t } else { 0 })
}

/// A place of Q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Place {
    Infinity,
    Prime(BigInt),
}

fn split_valuation(x: &BigInt, p: &BigInt) -> (i64, BigInt) {
    let mut v = 0;
    let mut x = x.clone();
    loop {
        let (q, r) = x.div_rem(p);
        if !r.is_zero() {
            break;
        }
        x = q;
        v += 1;
    }
    (v, x)
}

/// `a = p^v * u` with `u` a p-adic unit given as numerator/denominator.
fn rational_valuation(a: &BigRational, p: &BigInt) -> (i64, BigInt, BigInt) {
    let (vn, un) = split_valuation(a.numer(), p);
    let (vd, ud) = split_valuation(a.denom(), p);
    (vn - vd, un, ud)
}

/// Hilbert symbol `(a, b)_v` of nonzero rationals at the place `v`.
pub fn hilbert_symbol_rational(a: &BigRational, b: &BigRational, place: &Place) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::Zero);
    }
    match place {
        Place::Infinity => Ok(if a.is_negative() && b.is_negative() {
            -1
        } else {
            1
        }),
        Place::Prime(p) => {
            let small = p
                .to_u128()
                .filter(|&x| x >= 2)
                .ok_or_else(|| Error::InvalidInput(format!("{p} is not a prime")))?;
            if !is_prime(small)? {
                return Err(Error::InvalidInput(format!("{p} is not a prime")));
            }
            let (alpha, an, ad) = rational_valuation(a, p);
            let (beta, bn, bd) = rational_valuation(b, p);
            if small == 2 {
                // u = an/ad is an odd 2-adic unit; u ≡ an*ad (mod 8)
                let u = (an * ad).mod_floor(&BigInt::from(8)).to_i64().unwrap();
                let v = (bn * bd).mod_floor(&BigInt::from(8)).to_i64().unwrap();
                let eps = |x: i64| ((x - 1) / 2) & 1;
                let omega = |x: i64| ((x * x - 1) / 8) & 1;
                let e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u);
                Ok(if e.rem_euclid(2) == 0 { 1 } else { -1 })
            } else {
                let eps_p = ((small - 1) / 2) % 2;
                let mut sign = if (alpha * beta).rem_euclid(2) == 1 && eps_p == 1 {
                    -1
                } else {
                    1
                };
                if beta.rem_euclid(2) == 1 {
                    sign *= legendre(&an, p)? * legendre(&ad, p)?;
                }
                if alpha.rem_euclid(2) == 1 {
                    sign *= legendre(&bn, p)? * legendre(&bd, p)?;
                }
                Ok(sign)
            }
        }
    }
}
