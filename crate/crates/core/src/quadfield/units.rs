use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{check_bits, is_squarefree};

/// Fundamental unit `(x + y√d) / denom` of the maximal order of `Q(√d)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadUnit {
    pub d: i64,
    #[serde(with = "crate::exactnum::decimal")]
    pub x: BigInt,
    #[serde(with = "crate::exactnum::decimal")]
    pub y: BigInt,
    pub denom: u8,
    pub norm: i8,
}

impl QuadUnit {
    /// Rational coordinates `(x/denom, y/denom)`.
    pub fn coordinates(&self) -> (BigRational, BigRational) {
        let den = BigInt::from(self.denom);
        (
            BigRational::new(self.x.clone(), den.clone()),
            BigRational::new(self.y.clone(), den),
        )
    }

    pub fn is_integral(&self) -> bool {
        self.denom == 1
    }

    /// Checks `x^2 - d y^2 = norm * denom^2`.
    pub fn satisfies_norm_equation(&self) -> bool {
        let den = BigInt::from(self.denom);
        &self.x * &self.x - BigInt::from(self.d) * &self.y * &self.y
            == BigInt::from(self.norm) * &den * &den
    }
}

impl fmt::Display for QuadUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let y = if self.y.is_one() { String::new() } else { self.y.to_string() };
        if self.denom == 1 {
            write!(f, "{} + {y}√{}", self.x, self.d)
        } else {
            write!(f, "({} + {y}√{})/{}", self.x, self.d, self.denom)
        }
    }
}

/// Fundamental unit of `Q(√d)` for squarefree `d > 1`.
///
/// Walks the convergents of the continued fraction of `√d` (or of
/// `(1+√d)/2` when `d ≡ 1 mod 4`) and stops at the first one solving the
/// norm equation `N = ±1`; that convergent is the smallest unit `> 1`.
pub fn fundamental_unit(d: i64) -> Result<QuadUnit> {
    if d <= 1 {
        return Err(Error::InvalidInput(format!(
            "fundamental unit needs a squarefree d > 1, got {d}"
        )));
    }
    if !is_squarefree(d) {
        return Err(Error::NotSquarefree(d.to_string()));
    }
    let half_integral = d.rem_euclid(4) == 1;
    let s = (d as f64).sqrt() as i64;
    let s = (s - 2..=s + 2).filter(|t| *t >= 0 && t * t <= d).max().unwrap();

    // complete quotient (P + √d) / Q
    let (mut big_p, mut big_q) = if half_integral { (1i64, 2i64) } else { (0, 1) };
    let c = (d - 1) / 4;
    let (mut p_prev, mut p_cur) = (BigInt::zero(), BigInt::one());
    let (mut q_prev, mut q_cur) = (BigInt::one(), BigInt::zero());
    loop {
        let a = (big_p + s).div_euclid(big_q);
        let p_next = &p_cur * a + &p_prev;
        let q_next = &q_cur * a + &q_prev;
        p_prev = std::mem::replace(&mut p_cur, p_next);
        q_prev = std::mem::replace(&mut q_cur, q_next);
        check_bits(&p_cur)?;

        let norm = if half_integral {
            // N(p - q ω') with ω = (1 + √d)/2
            &p_cur * &p_cur - &p_cur * &q_cur - &q_cur * &q_cur * c
        } else {
            &p_cur * &p_cur - &q_cur * &q_cur * d
        };
        if norm.abs().is_one() {
            let norm = if norm.is_positive() { 1 } else { -1 };
            let unit = if half_integral {
                let x: BigInt = &p_cur * 2 - &q_cur;
                let y = q_cur.clone();
                if x.is_even() && y.is_even() {
                    QuadUnit { d, x: x / 2, y: y / 2, denom: 1, norm }
                } else {
                    QuadUnit { d, x, y, denom: 2, norm }
                }
            } else {
                QuadUnit { d, x: p_cur.clone(), y: q_cur.clone(), denom: 1, norm }
            };
            debug_assert!(unit.satisfies_norm_equation());
            return Ok(unit);
        }

        big_p = a * big_q - big_p;
        big_q = (d - big_p * big_p) / big_q;
    }
}
