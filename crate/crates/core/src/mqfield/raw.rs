//! Coefficient-level arithmetic in a tower of quadratic extensions.
//!
//! An element of `Q(√r₀, …, √r_{t−1})` is stored as integer coefficients over
//! the products `θ_m = ∏_{k∈m} √r_k` plus one positive common denominator.
//! With this basis `θ_i θ_j = (∏_{k∈i∧j} r_k) θ_{i⊕j}` and every
//! automorphism acts diagonally by signs, so the subfield `Q(√r₀,…,√r_{t−2})`
//! is simply the lower half of the coefficient vector.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Result;
use crate::exactnum::{check_bits, exact_sqrt, is_prime_u64};

/// Precomputed data for one tower of radicands.
#[derive(Debug, Clone)]
pub(crate) struct Tower {
    pub r: Vec<i64>,
    /// `∏_{k∈m} r_k` for every mask `m`.
    pub pm: Vec<BigInt>,
    /// Odd primes modulo which every radicand is a nonzero square, with the
    /// smallest square root of each radicand.
    pub split_primes: Vec<(u64, Vec<u64>)>,
}

const SPLIT_PRIMES: usize = 12;
const SPLIT_PRIME_CEILING: u64 = 20_000;

/// Smallest `s` with `s² ≡ x (mod ℓ)`, if `x` is a nonzero square mod `ℓ`.
pub(crate) fn canonical_root(x: i64, ell: u64) -> Option<u64> {
    let a = x.rem_euclid(ell as i64) as u64;
    if a == 0 || pow_mod(a, (ell - 1) / 2, ell) != 1 {
        return None;
    }
    (1..ell).find(|s| s * s % ell == a)
}

impl Tower {
    pub fn new(r: Vec<i64>) -> Tower {
        let n = r.len();
        let pm = (0..1usize << n)
            .map(|m| {
                (0..n)
                    .filter(|k| m >> k & 1 == 1)
                    .fold(BigInt::one(), |acc, k| acc * r[k])
            })
            .collect();
        let mut split_primes = Vec::new();
        let mut ell = 7u64;
        while split_primes.len() < SPLIT_PRIMES && ell < SPLIT_PRIME_CEILING {
            if is_prime_u64(ell) {
                let roots: Option<Vec<u64>> = r.iter().map(|&x| canonical_root(x, ell)).collect();
                if let Some(roots) = roots {
                    split_primes.push((ell, roots));
                }
            }
            ell += 2;
        }
        Tower { r, pm, split_primes }
    }

    pub fn all_positive(&self, t: usize) -> bool {
        self.r[..t].iter().all(|&x| x > 0)
    }
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) struct Raw {
    pub num: Vec<BigInt>,
    pub den: BigInt,
}

impl Raw {
    pub fn zero(len: usize) -> Raw {
        Raw { num: vec![BigInt::zero(); len], den: BigInt::one() }
    }

    pub fn rational(len: usize, q: &BigRational) -> Raw {
        let mut x = Raw::zero(len);
        x.num[0] = q.numer().clone();
        x.den = q.denom().clone();
        x
    }

    pub fn one(len: usize) -> Raw {
        Raw::rational(len, &BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.num[1..].iter().all(Zero::is_zero)
    }

    pub fn rational_part(&self) -> BigRational {
        BigRational::new(self.num[0].clone(), self.den.clone())
    }

    pub fn coeff(&self, m: usize) -> BigRational {
        BigRational::new(self.num[m].clone(), self.den.clone())
    }

    /// Reduces to lowest terms with a positive denominator.
    pub fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -&self.den;
            for c in &mut self.num {
                *c = -&*c;
            }
        }
        if self.is_zero() {
            self.den = BigInt::one();
            return;
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                return;
            }
            if !c.is_zero() {
                g = g.gcd(c);
            }
        }
        if !g.is_one() {
            self.den /= &g;
            for c in &mut self.num {
                *c /= &g;
            }
        }
    }

    pub fn neg(&self) -> Raw {
        Raw { num: self.num.iter().map(|c| -c).collect(), den: self.den.clone() }
    }

    pub fn add(&self, other: &Raw) -> Raw {
        let mut out = Raw {
            num: self
                .num
                .iter()
                .zip(&other.num)
                .map(|(a, b)| a * &other.den + b * &self.den)
                .collect(),
            den: &self.den * &other.den,
        };
        out.normalize();
        out
    }

    pub fn sub(&self, other: &Raw) -> Raw {
        self.add(&other.neg())
    }

    pub fn scale(&self, q: &BigRational) -> Raw {
        let mut out = Raw {
            num: self.num.iter().map(|c| c * q.numer()).collect(),
            den: &self.den * q.denom(),
        };
        out.normalize();
        out
    }

    /// Applies the automorphism flipping the generators in `sigma`.
    pub fn conj(&self, sigma: usize) -> Raw {
        Raw {
            num: self
                .num
                .iter()
                .enumerate()
                .map(|(m, c)| if (m & sigma).count_ones() % 2 == 1 { -c } else { c.clone() })
                .collect(),
            den: self.den.clone(),
        }
    }

    /// `self = a + b·√r_top` with `a, b` one level down.
    pub fn split(&self) -> (Raw, Raw) {
        let half = self.num.len() / 2;
        let mut a = Raw { num: self.num[..half].to_vec(), den: self.den.clone() };
        let mut b = Raw { num: self.num[half..].to_vec(), den: self.den.clone() };
        a.normalize();
        b.normalize();
        (a, b)
    }

    pub fn join(a: &Raw, b: &Raw) -> Raw {
        let den = a.den.lcm(&b.den);
        let fa = &den / &a.den;
        let fb = &den / &b.den;
        let mut num: Vec<BigInt> = a.num.iter().map(|c| c * &fa).collect();
        num.extend(b.num.iter().map(|c| c * &fb));
        let mut out = Raw { num, den };
        out.normalize();
        out
    }

    /// Largest bit length among numerators and the denominator.
    pub fn bits(&self) -> u64 {
        self.num.iter().map(BigInt::bits).max().unwrap_or(0).max(self.den.bits())
    }

    /// First nonzero coefficient's sign.
    pub fn leading_sign(&self) -> i8 {
        self.num
            .iter()
            .find(|c| !c.is_zero())
            .map_or(0, |c| if c.is_positive() { 1 } else { -1 })
    }
}

pub(crate) fn mul(tw: &Tower, x: &Raw, y: &Raw) -> Result<Raw> {
    let len = x.num.len();
    let mut num = vec![BigInt::zero(); len];
    for (i, a) in x.num.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in y.num.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            let k = i & j;
            if k == 0 {
                num[i ^ j] += a * b;
            } else {
                num[i ^ j] += a * b * &tw.pm[k];
            }
        }
    }
    let mut out = Raw { num, den: &x.den * &y.den };
    out.normalize();
    for c in &out.num {
        check_bits(c)?;
    }
    check_bits(&out.den)?;
    Ok(out)
}

pub(crate) fn square(tw: &Tower, x: &Raw) -> Result<Raw> {
    mul(tw, x, x)
}

/// `(x⁻¹·N(x), N(x))` computed by the doubling trick over the generators.
fn norm_and_cofactor(tw: &Tower, x: &Raw) -> Result<(Raw, Raw)> {
    let len = x.num.len();
    let t = len.trailing_zeros() as usize;
    let mut y = x.clone();
    let mut acc = Raw::one(len);
    for i in 0..t {
        let c = y.conj(1 << i);
        acc = mul(tw, &acc, &c)?;
        y = mul(tw, &y, &c)?;
    }
    debug_assert!(y.is_rational());
    Ok((acc, y))
}

/// Norm from the current level down to `Q`.
pub(crate) fn norm(tw: &Tower, x: &Raw) -> Result<BigRational> {
    Ok(norm_and_cofactor(tw, x)?.1.rational_part())
}

/// Inverse, or `None` for zero.
pub(crate) fn inverse(tw: &Tower, x: &Raw) -> Result<Option<Raw>> {
    if x.is_zero() {
        return Ok(None);
    }
    let (acc, n) = norm_and_cofactor(tw, x)?;
    Ok(Some(acc.scale(&n.rational_part().recip())))
}

/// Sign of `x` under the embedding with every `√r_k > 0`; all radicands of
/// the level must be positive.
pub(crate) fn sign(tw: &Tower, x: &Raw) -> Result<i8> {
    let len = x.num.len();
    if len == 1 {
        return Ok(match x.num[0].sign() {
            num_bigint::Sign::Plus => 1,
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
        });
    }
    let t = len.trailing_zeros() as usize;
    let (a, b) = x.split();
    let sb = sign(tw, &b)?;
    let sa = sign(tw, &a)?;
    if sb == 0 || sa == sb {
        return Ok(sa);
    }
    if sa == 0 {
        return Ok(sb);
    }
    // sign(a + b√r) = sign(a) · sign(a² − b² r) when the signs differ
    let r = BigRational::from_integer(tw.r[t - 1].into());
    let diff = square(tw, &a)?.sub(&square(tw, &b)?.scale(&r));
    Ok(sa * sign(tw, &diff)?)
}

/// Why an element is certainly not a square.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Obstruction {
    /// Negative under the real embedding `√r_k ↦ (−1)^{σ_k} √r_k`.
    Embedding(usize),
    /// Its image in `F_ℓ` under the homomorphism with root signs `hom` is a
    /// quadratic nonresidue.
    Residue { prime: u64, hom: usize },
    /// A rational that is not the square of a rational.
    Rational,
}

#[allow(clippy::needless_range_loop)]
pub(crate) fn residue_obstruction(tw: &Tower, x: &Raw) -> Option<Obstruction> {
    let len = x.num.len();
    let t = len.trailing_zeros() as usize;
    for (ell, roots) in &tw.split_primes {
        let ell = *ell;
        let big_ell = BigInt::from(ell);
        let den = x.den.mod_floor(&big_ell).to_u64().unwrap();
        if den == 0 {
            continue;
        }
        let den_inv = pow_mod(den, ell - 2, ell);
        let c: Vec<u64> = x
            .num
            .iter()
            .map(|n| n.mod_floor(&big_ell).to_u64().unwrap() * den_inv % ell)
            .collect();
        for hom in 0..len {
            let mut value = 0u64;
            for (m, cm) in c.iter().enumerate() {
                if *cm == 0 {
                    continue;
                }
                let mut term = *cm;
                for k in 0..t {
                    if m >> k & 1 == 1 {
                        let root = if hom >> k & 1 == 1 { ell - roots[k] } else { roots[k] };
                        term = term * root % ell;
                    }
                }
                value = (value + term) % ell;
            }
            if value != 0 && pow_mod(value, (ell - 1) / 2, ell) != 1 {
                return Some(Obstruction::Residue { prime: ell, hom });
            }
        }
    }
    None
}

pub(crate) fn sign_obstruction(tw: &Tower, x: &Raw) -> Result<Option<Obstruction>> {
    let len = x.num.len();
    let t = len.trailing_zeros() as usize;
    if !tw.all_positive(t) {
        return Ok(None);
    }
    for sigma in 0..len {
        if sign(tw, &x.conj(sigma))? < 0 {
            return Ok(Some(Obstruction::Embedding(sigma)));
        }
    }
    Ok(None)
}

/// A certificate that `x` is not a square, if one of the cheap tests finds
/// one.
pub(crate) fn obstruction(tw: &Tower, x: &Raw) -> Result<Option<Obstruction>> {
    if x.num.len() == 1 {
        let q = x.rational_part();
        let square = !q.is_negative()
            && exact_sqrt(q.numer()).is_some()
            && exact_sqrt(q.denom()).is_some();
        return Ok((!square).then_some(Obstruction::Rational));
    }
    if let Some(o) = residue_obstruction(tw, x) {
        return Ok(Some(o));
    }
    sign_obstruction(tw, x)
}

/// A square root of `x` in its level, by descent through the tower.
pub(crate) fn sqrt(tw: &Tower, x: &Raw) -> Result<Option<Raw>> {
    let len = x.num.len();
    if x.is_zero() {
        return Ok(Some(x.clone()));
    }
    if len == 1 {
        let q = x.rational_part();
        if q.is_negative() {
            return Ok(None);
        }
        return Ok(match (exact_sqrt(q.numer()), exact_sqrt(q.denom())) {
            (Some(n), Some(d)) => Some(Raw { num: vec![n], den: d }),
            _ => None,
        });
    }
    if obstruction(tw, x)?.is_some() {
        return Ok(None);
    }
    let t = len.trailing_zeros() as usize;
    let r = BigRational::from_integer(tw.r[t - 1].into());
    let (a, b) = x.split();
    let half = len / 2;
    if b.is_zero() {
        if let Some(c) = sqrt(tw, &a)? {
            return Ok(Some(Raw::join(&c, &Raw::zero(half))));
        }
        if let Some(e) = sqrt(tw, &a.scale(&r.recip()))? {
            return Ok(Some(Raw::join(&Raw::zero(half), &e)));
        }
        return Ok(None);
    }
    let disc = square(tw, &a)?.sub(&square(tw, &b)?.scale(&r));
    let Some(n) = sqrt(tw, &disc)? else {
        return Ok(None);
    };
    let half_q = BigRational::new(1.into(), 2.into());
    for h in [a.add(&n), a.sub(&n)] {
        let h = h.scale(&half_q);
        if h.is_zero() {
            continue;
        }
        if let Some(c) = sqrt(tw, &h)? {
            let inv = inverse(tw, &c)?.expect("nonzero");
            let e = mul(tw, &b, &inv)?.scale(&half_q);
            return Ok(Some(Raw::join(&c, &e)));
        }
    }
    Ok(None)
}
