//! The field `L⁺ = Q(√2, √pq, √ps)` of a prime triple and its seed units.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::legendre_i64;
use crate::mqfield::{embed_quad_unit, MQField, SeedUnit};
use crate::quadfield::{check_triple_congruences, fundamental_unit, QuadUnit};

/// Which of the two symbol patterns a triple satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Case {
    /// `(p/q) = (p/s) = (s/q) = 1`.
    #[serde(rename = "1")]
    One,
    /// `(p/q) = (p/s) = (s/q) = −1`.
    #[serde(rename = "2")]
    Two,
}

impl Case {
    pub fn number(self) -> u8 {
        match self {
            Case::One => 1,
            Case::Two => 2,
        }
    }

    pub fn from_number(n: u8) -> Result<Case> {
        match n {
            1 => Ok(Case::One),
            2 => Ok(Case::Two),
            _ => Err(Error::InvalidInput(format!("case must be 1 or 2, got {n}"))),
        }
    }

    pub fn symbol(self) -> i8 {
        match self {
            Case::One => 1,
            Case::Two => -1,
        }
    }
}

/// `[(p/q), (p/s), (s/q)]`.
pub fn triple_symbols(p: u64, q: u64, s: u64) -> Result<[i8; 3]> {
    Ok([
        legendre_i64(p as i64, q)?,
        legendre_i64(p as i64, s)?,
        legendre_i64(s as i64, q)?,
    ])
}

/// Classifies a triple, rejecting anything outside the two cases.
pub fn classify_triple(p: u64, q: u64, s: u64) -> Result<Case> {
    check_triple_congruences(p, q, s)?;
    let sym = triple_symbols(p, q, s)?;
    match sym {
        [1, 1, 1] => Ok(Case::One),
        [-1, -1, -1] => Ok(Case::Two),
        _ => Err(Error::HypothesesViolated(format!(
            "symbols (p/q), (p/s), (s/q) = {sym:?} match neither case"
        ))),
    }
}

/// Seed names in the fixed order used for exponent vectors.
pub const SEED_NAMES: [&str; 7] = ["2", "pq", "2pq", "ps", "2ps", "qs", "2qs"];

/// `L⁺` with the fundamental units of its seven quadratic subfields.
#[derive(Debug, Clone)]
pub struct TripleField {
    pub p: u64,
    pub q: u64,
    pub s: u64,
    pub field: Arc<MQField>,
    /// Quadratic units in [`SEED_NAMES`] order.
    pub units: Vec<QuadUnit>,
    pub seeds: Vec<SeedUnit>,
}

impl TripleField {
    pub fn new(p: u64, q: u64, s: u64) -> Result<TripleField> {
        check_triple_congruences(p, q, s)?;
        let (pi, qi, si) = (p as i64, q as i64, s as i64);
        let field = MQField::new(&[2, pi * qi, pi * si])?;
        let radicands = [2, pi * qi, 2 * pi * qi, pi * si, 2 * pi * si, qi * si, 2 * qi * si];
        let mut units = Vec::with_capacity(7);
        let mut seeds = Vec::with_capacity(7);
        for (name, d) in SEED_NAMES.iter().zip(radicands) {
            let u = fundamental_unit(d)?;
            seeds.push(SeedUnit { name: name.to_string(), element: embed_quad_unit(&u, &field)? });
            units.push(u);
        }
        Ok(TripleField { p, q, s, field, units, seeds })
    }

    pub fn radicand(&self, name: &str) -> Result<i64> {
        SEED_NAMES
            .iter()
            .position(|n| *n == name)
            .map(|i| self.units[i].d)
            .ok_or_else(|| Error::InvalidInput(format!("unknown seed ε_{name}")))
    }

    pub fn seed(&self, name: &str) -> Result<&SeedUnit> {
        self.seeds
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| Error::InvalidInput(format!("unknown seed ε_{name}")))
    }
}
