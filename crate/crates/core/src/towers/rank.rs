use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::kuroda::{kuroda_h2, KurodaInput};
use crate::error::{Error, Result};
use crate::exactnum::{hilbert_symbol_rational, legendre_i64, Place};
use crate::mqfield::{embed_quad_unit, saturate, MQField, SeedUnit, Subgroup, Torsion};
use crate::quadfield::{check_triple_congruences, fundamental_unit, two_class_number};

/// The explicit reductions behind the lower bound on the 2-rank of the
/// class group of `Q(√2, √pq, √ps)`, recomputed.
#[derive(Debug, Clone, Serialize)]
pub struct RankCheck {
    pub p: u64,
    pub q: u64,
    pub s: u64,
    /// `N_{L₃/Q(√qs)}(ε₂)` with `L₃ = Q(√2, √qs)`; expected `−1`.
    pub norm_eps2: String,
    /// `(−1, p)_p`; expected `1`.
    pub hilbert_minus1_p: i8,
    /// `h₂` of the quadratic subfields of `L₃`, by radicand.
    pub l3_subfield_h2: BTreeMap<String, u64>,
    pub l3_index_log2: u32,
    #[serde(serialize_with = "crate::exactnum::decimal::serialize")]
    pub l3_h2: BigInt,
    pub holds: bool,
}

/// Recomputes `N(ε₂) = −1` in `L₃/Q(√qs)`, `(−1, p)_p = 1` and `h₂(L₃) = 1`.
pub fn rank_bound_check(p: u64, q: u64, s: u64) -> Result<RankCheck> {
    check_triple_congruences(p, q, s)?;
    if legendre_i64(p as i64, q)? != legendre_i64(p as i64, s)? {
        return Err(Error::HypothesesViolated(format!("({p}/{q}) ≠ ({p}/{s})")));
    }
    let qs = (q * s) as i64;
    let l3 = MQField::new(&[2, qs])?;
    let names = ["2", "qs", "2qs"];
    let radicands = [2, qs, 2 * qs];
    let mut seeds = Vec::new();
    let mut h2 = BTreeMap::new();
    for (name, d) in names.iter().zip(radicands) {
        seeds.push(SeedUnit {
            name: name.to_string(),
            element: embed_quad_unit(&fundamental_unit(d)?, &l3)?,
        });
        h2.insert(d.to_string(), two_class_number(d)?);
    }
    let eps2 = &seeds[0].element;
    let norm = eps2.relative_norm(&Subgroup::generated_by(&[l3.sigma(0)]))?;
    let norm_ok = norm.as_rational() == Some(BigRational::from_integer((-1).into()));

    let hilbert = hilbert_symbol_rational(
        &BigRational::from_integer((-1).into()),
        &BigRational::from_integer(p.into()),
        &Place::Prime(BigInt::from(p)),
    )?;

    let units = saturate(&seeds, Torsion::MinusOne)?;
    let input = KurodaInput::new(
        2,
        true,
        BigInt::from(1u32) << units.index_log2,
        radicands.iter().map(|d| BigInt::from(h2[&d.to_string()])).collect(),
    )?;
    let l3_h2 = kuroda_h2(&input)?;
    let holds = norm_ok && hilbert == 1 && l3_h2 == BigInt::from(1);
    Ok(RankCheck {
        p,
        q,
        s,
        norm_eps2: norm.to_string(),
        hilbert_minus1_p: hilbert,
        l3_subfield_h2: h2,
        l3_index_log2: units.index_log2,
        l3_h2,
        holds,
    })
}
