//! Real and imaginary quadratic fields: fundamental units, class numbers and
//! the unit decompositions used by the multiquadratic layer.

mod decomposition;
mod forms;
mod units;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use decomposition::{
    check_lemma_3_3, check_pair_hypotheses, classify_decomposition, pair_symbol,
    DecompositionReport, Lemma33Report, LemmaDecomposition, LemmaId,
};
pub use forms::{class_number, field_discriminant, is_fundamental_discriminant, two_class_number};
pub use units::{fundamental_unit, QuadUnit};

use crate::error::{Error, Result};
use crate::exactnum::is_prime_u64;

/// `Q(√d)` for squarefree `d ≠ 0, 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadField {
    pub d: i64,
    pub discriminant: i64,
}

impl QuadField {
    pub fn new(d: i64) -> Result<Self> {
        Ok(QuadField { d, discriminant: field_discriminant(d)? })
    }

    pub fn is_real(&self) -> bool {
        self.d > 0
    }

    pub fn fundamental_unit(&self) -> Result<QuadUnit> {
        fundamental_unit(self.d)
    }

    pub fn class_number(&self) -> Result<u64> {
        class_number(self.discriminant)
    }

    pub fn two_class_number(&self) -> Result<u64> {
        two_class_number(self.d)
    }
}

/// Checks `p ≡ 5`, `q ≡ 7`, `s ≡ 3 (mod 8)` with all three prime.
pub fn check_triple_congruences(p: u64, q: u64, s: u64) -> Result<()> {
    for n in [p, q, s] {
        if !is_prime_u64(n) {
            return Err(Error::NotOddPrime(n.to_string()));
        }
    }
    if p % 8 != 5 || q % 8 != 7 || s % 8 != 3 {
        return Err(Error::HypothesesViolated(format!(
            "need p ≡ 5, q ≡ 7, s ≡ 3 (mod 8); got {}, {}, {}",
            p % 8,
            q % 8,
            s % 8
        )));
    }
    Ok(())
}

/// The seven radicands of the quadratic subfields of `Q(√2, √pq, √ps)`, in
/// the order `2, pq, 2pq, ps, 2ps, qs, 2qs`.
pub fn subfield_radicands(p: u64, q: u64, s: u64) -> [i64; 7] {
    let (p, q, s) = (p as i64, q as i64, s as i64);
    [2, p * q, 2 * p * q, p * s, 2 * p * s, q * s, 2 * q * s]
}

/// Expected 2-class numbers of the seven quadratic subfields:
/// `h₂(2) = h₂(qs) = 1`, all others `2`.
pub fn expected_h2(p: u64, q: u64, s: u64) -> Result<BTreeMap<i64, u64>> {
    check_triple_congruences(p, q, s)?;
    let qs = (q * s) as i64;
    Ok(subfield_radicands(p, q, s)
        .into_iter()
        .map(|d| (d, if d == 2 || d == qs { 1 } else { 2 }))
        .collect())
}
