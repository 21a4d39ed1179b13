//! Exact integer and rational kernels: primality, factorization, residue
//! symbols, squarefree parts and rational square roots.

pub mod decimal;
mod primes;
mod symbols;

use std::sync::OnceLock;

use num_bigint::{BigInt, Sign};
use num_traits::{Signed, ToPrimitive, Zero};

pub use num_rational::BigRational;
pub use primes::{factorize, is_prime, is_prime_u64, primes_below, MILLER_RABIN_BOUND};
pub use symbols::{hilbert_symbol_rational, jacobi, jacobi_i64, legendre, legendre_i64, Place};

use crate::error::{Error, Result};

/// Default ceiling on the size of any intermediate integer.
pub const DEFAULT_BITS_LIMIT: u64 = 1_000_000;

/// Bit ceiling for intermediate integers; `MQUNITS_BITS_LIMIT` overrides the
/// default. Read once per process.
pub fn bits_limit() -> u64 {
    static LIMIT: OnceLock<u64> = OnceLock::new();
    *LIMIT.get_or_init(|| {
        std::env::var("MQUNITS_BITS_LIMIT")
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_BITS_LIMIT)
    })
}

/// Fails with [`Error::SizeLimit`] once `x` outgrows [`bits_limit`].
pub fn check_bits(x: &BigInt) -> Result<()> {
    let bits = x.bits();
    let limit = bits_limit();
    if bits > limit {
        return Err(Error::SizeLimit { bits, limit });
    }
    Ok(())
}

/// `|n| = squarefree_part * square_factor^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquarefreeDecomposition {
    pub squarefree_part: BigInt,
    pub square_factor: BigInt,
}

/// Floor square root of a nonnegative integer.
pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative(), "isqrt of a negative integer");
    n.sqrt()
}

/// Exact integer square root, if `n` is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    // squares are 0, 1, 4, 9 mod 16
    let low = n.iter_u32_digits().next().unwrap_or(0) & 15;
    if !matches!(low, 0 | 1 | 4 | 9) {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

pub fn is_square(n: &BigInt) -> bool {
    exact_sqrt(n).is_some()
}

/// Decomposes `|n|` as `s * f^2` with `s` squarefree; returns the sign of `n`
/// alongside.
pub fn squarefree_decompose(n: &BigInt) -> Result<(SquarefreeDecomposition, Sign)> {
    if n.is_zero() {
        return Err(Error::Zero);
    }
    let m = n
        .abs()
        .to_u64()
        .ok_or_else(|| Error::InvalidInput(format!("{n} is too large to factor")))?;
    let mut s = BigInt::from(1);
    let mut f = BigInt::from(1);
    for (p, e) in factorize(m)? {
        if e % 2 == 1 {
            s *= p;
        }
        f *= BigInt::from(p).pow(e / 2);
    }
    Ok((
        SquarefreeDecomposition {
            squarefree_part: s,
            square_factor: f,
        },
        n.sign(),
    ))
}

pub fn is_squarefree(n: i64) -> bool {
    if n == 0 {
        return false;
    }
    factorize(n.unsigned_abs())
        .map(|f| f.iter().all(|&(_, e)| e == 1))
        .unwrap_or(false)
}

/// Exact square root of a nonnegative rational; `Ok(None)` when it is not a
/// rational square.
pub fn rational_sqrt(q: &BigRational) -> Result<Option<BigRational>> {
    if q.is_negative() {
        return Err(Error::Negative(q.to_string()));
    }
    let (Some(n), Some(d)) = (exact_sqrt(q.numer()), exact_sqrt(q.denom())) else {
        return Ok(None);
    };
    Ok(Some(BigRational::new(n, d)))
}

/// Whether `q` (of any sign) is the square of a rational.
pub fn is_rational_square(q: &BigRational) -> bool {
    !q.is_negative() && exact_sqrt(q.numer()).is_some() && exact_sqrt(q.denom()).is_some()
}
