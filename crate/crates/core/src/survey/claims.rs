//! The statements being checked for each case: the unit system of `L⁺`, the
//! relative norm tables over `Q(√2)` and the unit groups of `L⁺(√−ℓ)`.
//!
//! Exponents refer to the seed units in [`SEED_NAMES`] order; `ε_d` is always
//! the fundamental unit, half-integral or not.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::triple::{Case, TripleField, SEED_NAMES};
use crate::error::{Error, Result};
use crate::mqfield::MQElement;
use crate::towers::CMBranch;

/// `(seed, numerator, denominator)`.
pub type Term = (&'static str, i64, i64);

/// A unit written as a product of rational powers of the seeds.
#[derive(Debug, Clone, Copy)]
pub struct UnitExpr {
    pub label: &'static str,
    pub terms: &'static [Term],
}

const fn u(label: &'static str, terms: &'static [Term]) -> UnitExpr {
    UnitExpr { label, terms }
}

pub const E2: UnitExpr = u("ε_2", &[("2", 1, 1)]);
pub const EPQ: UnitExpr = u("ε_pq", &[("pq", 1, 1)]);
pub const R_PQ_2PQ: UnitExpr = u("√(ε_pq ε_2pq)", &[("pq", 1, 2), ("2pq", 1, 2)]);
pub const R_PS_2PS: UnitExpr = u("√(ε_ps ε_2ps)", &[("ps", 1, 2), ("2ps", 1, 2)]);
pub const R_QS_2QS: UnitExpr = u("√(ε_qs ε_2qs)", &[("qs", 1, 2), ("2qs", 1, 2)]);
pub const R_PQ_PS: UnitExpr = u("√(ε_pq ε_ps)", &[("pq", 1, 2), ("ps", 1, 2)]);
pub const R_PQ_QS: UnitExpr = u("√(ε_pq ε_qs)", &[("pq", 1, 2), ("qs", 1, 2)]);
pub const R4: UnitExpr = u(
    "⁴√(ε_pq ε_2pq ε_qs ε_2qs)",
    &[("pq", 1, 4), ("2pq", 1, 4), ("qs", 1, 4), ("2qs", 1, 4)],
);

/// Fundamental system of `L⁺` (torsion `−1` omitted).
pub fn stated_system(case: Case) -> Vec<UnitExpr> {
    match case {
        Case::One => vec![E2, EPQ, R_PQ_2PQ, R_PS_2PS, R_PQ_PS, R_PQ_QS, R4],
        Case::Two => vec![E2, EPQ, R_PQ_2PQ, R_PS_2PS, R_QS_2QS, R_PQ_PS, R_PQ_QS],
    }
}

pub fn stated_index_log2(case: Case) -> u32 {
    match case {
        Case::One => 6,
        Case::Two => 5,
    }
}

pub fn stated_h2(case: Case) -> u64 {
    match case {
        Case::One => 4,
        Case::Two => 2,
    }
}

/// Exponent vector of `expr` over the seeds in [`SEED_NAMES`] order.
pub fn exponents(expr: &UnitExpr) -> Result<Vec<BigRational>> {
    let mut v = vec![BigRational::zero(); SEED_NAMES.len()];
    for &(name, num, den) in expr.terms {
        let i = SEED_NAMES
            .iter()
            .position(|n| *n == name)
            .ok_or_else(|| Error::InvalidInput(format!("unknown seed ε_{name}")))?;
        v[i] += BigRational::new(BigInt::from(num), BigInt::from(den));
    }
    Ok(v)
}

/// The element `∏ εᵢ^eᵢ`, found by extracting square roots of the integral
/// power `∏ εᵢ^(D·eᵢ)`, `D` a power of two; the sign of each intermediate
/// root is chosen so that the next root exists. Sign-normalized.
pub fn evaluate(tf: &TripleField, exps: &[BigRational]) -> Result<MQElement> {
    let den = exps.iter().fold(BigInt::one(), |acc, e| acc.lcm(e.denom()));
    let levels = den.bits() - 1;
    if BigInt::one() << levels != den {
        return Err(Error::InvalidInput(format!("exponent denominator {den} is not a power of 2")));
    }
    let mut product = MQElement::one(&tf.field);
    for (seed, e) in tf.seeds.iter().zip(exps) {
        let k: i64 = (e * BigRational::from_integer(den.clone()))
            .to_integer()
            .try_into()
            .map_err(|_| Error::InvalidInput("exponent too large".into()))?;
        if k != 0 {
            product = product.mul(&seed.element.pow(k)?)?;
        }
    }
    descend(&product, levels as u32)
        .map(|r| r.sign_normalized())
        .ok_or_else(|| Error::Verification(format!("no {den}-th root of {product} in {}", tf.field)))
}

fn descend(x: &MQElement, levels: u32) -> Option<MQElement> {
    if levels == 0 {
        return Some(x.clone());
    }
    for cand in [x.clone(), x.neg()] {
        if let Ok(Some(r)) = cand.try_sqrt() {
            if let Some(out) = descend(&r, levels - 1) {
                return Some(out);
            }
        }
    }
    None
}

/// One cell of a norm table: `row^(1+σ)` should equal `value`, exactly or
/// up to sign.
#[derive(Debug, Clone, Copy)]
pub struct NormClaim {
    pub table: &'static str,
    pub row: UnitExpr,
    /// Galois element as a mask over `σ₁, σ₂, σ₃`.
    pub sigma: u8,
    /// `None` when the sign is left undetermined.
    pub sign: Option<i8>,
    pub value: UnitExpr,
}

/// Column order of every table: `1+σ₁, 1+σ₂, 1+σ₃, 1+σ₁σ₂, 1+σ₁σ₃, 1+σ₂σ₃`.
pub const COLUMNS: [u8; 6] = [1, 2, 4, 3, 5, 6];

const ONE: UnitExpr = u("1", &[]);
const E2_SQ: UnitExpr = u("ε_2²", &[("2", 2, 1)]);
const V_PQ: UnitExpr = EPQ;
const V_2PQ: UnitExpr = u("ε_2pq", &[("2pq", 1, 1)]);
const V_PS: UnitExpr = u("ε_ps", &[("ps", 1, 1)]);
const V_2PS: UnitExpr = u("ε_2ps", &[("2ps", 1, 1)]);
const V_QS: UnitExpr = u("ε_qs", &[("qs", 1, 1)]);
const V_2QS: UnitExpr = u("ε_2qs", &[("2qs", 1, 1)]);
const V_PQ_2PQ: UnitExpr = u("ε_pq ε_2pq", &[("pq", 1, 1), ("2pq", 1, 1)]);
const V_PS_2PS: UnitExpr = u("ε_ps ε_2ps", &[("ps", 1, 1), ("2ps", 1, 1)]);
const V_QS_2QS: UnitExpr = u("ε_qs ε_2qs", &[("qs", 1, 1), ("2qs", 1, 1)]);
const V_PQ_PS: UnitExpr = u("ε_pq ε_ps", &[("pq", 1, 1), ("ps", 1, 1)]);
const V_PQ_QS: UnitExpr = u("ε_pq ε_qs", &[("pq", 1, 1), ("qs", 1, 1)]);
const R_2PQ_2QS: UnitExpr = u("√(ε_2pq ε_2qs)", &[("2pq", 1, 2), ("2qs", 1, 2)]);
const R_PQ_2QS: UnitExpr = u("√(ε_pq ε_2qs)", &[("pq", 1, 2), ("2qs", 1, 2)]);

type Row = (UnitExpr, [(Option<i8>, UnitExpr); 6]);

const P: Option<i8> = Some(1);
const M: Option<i8> = Some(-1);
const X: Option<i8> = None;

const ROW_E2: Row = (E2, [(M, ONE), (P, E2_SQ), (P, E2_SQ), (M, ONE), (M, ONE), (P, E2_SQ)]);
const ROW_PS_2PS: Row =
    (R_PS_2PS, [(P, V_PS), (P, V_PS_2PS), (M, ONE), (P, V_PS), (M, V_2PS), (M, ONE)]);

const CASE_ONE_A: [Row; 4] = [
    ROW_E2,
    (R_PQ_2PQ, [(M, V_PQ), (P, ONE), (P, V_PQ_2PQ), (M, V_2PQ), (M, V_PQ), (P, ONE)]),
    ROW_PS_2PS,
    (R_QS_2QS, [(M, V_QS), (P, ONE), (P, ONE), (M, V_2QS), (M, V_2QS), (P, V_QS_2QS)]),
];

const CASE_ONE_B: [Row; 3] = [
    (R_PQ_PS, [(P, V_PQ_PS), (P, V_PS), (P, V_PQ), (P, V_PS), (P, V_PQ), (P, ONE)]),
    (R_PQ_QS, [(P, V_PQ_QS), (P, ONE), (M, V_PQ), (P, ONE), (M, V_PQ), (M, V_QS)]),
    (R4, [(X, R_PQ_QS), (X, ONE), (X, R_PQ_2PQ), (X, R_2PQ_2QS), (X, R_PQ_2QS), (X, R_QS_2QS)]),
];

const CASE_TWO_A: [Row; 4] = [
    ROW_E2,
    (R_PQ_2PQ, [(P, V_PQ), (P, ONE), (P, V_PQ_2PQ), (P, V_2PQ), (P, V_PQ), (P, ONE)]),
    ROW_PS_2PS,
    (R_QS_2QS, [(P, V_QS), (P, ONE), (P, ONE), (P, V_2QS), (P, V_2QS), (P, V_QS_2QS)]),
];

const CASE_TWO_B: [Row; 2] = [
    (R_PQ_PS, [(P, V_PQ_PS), (M, V_PS), (P, V_PQ), (M, V_PS), (P, V_PQ), (M, ONE)]),
    (R_PQ_QS, [(M, V_PQ_QS), (P, ONE), (P, V_PQ), (M, ONE), (M, V_PQ), (P, V_QS)]),
];

fn cells(table: &'static str, rows: &[Row]) -> Vec<NormClaim> {
    rows.iter()
        .flat_map(|(row, cols)| {
            COLUMNS.iter().zip(cols).map(move |(&sigma, &(sign, value))| NormClaim {
                table,
                row: *row,
                sigma,
                sign,
                value,
            })
        })
        .collect()
}

/// Every cell of the two norm tables of a case.
pub fn norm_claims(case: Case) -> Vec<NormClaim> {
    match case {
        Case::One => [cells("1a", &CASE_ONE_A), cells("1b", &CASE_ONE_B)].concat(),
        Case::Two => [cells("2a", &CASE_TWO_A), cells("2b", &CASE_TWO_B)].concat(),
    }
}

/// Stated outcomes of the CM search for `ℓ`.
///
/// In case 2 with `ℓ = 1` the statement lists four possible groups; the
/// fourth would need both `A` and `ε_pq·A` (with
/// `A = √(ε_pq ε_2pq)·√(ε_qs ε_2qs)`) to pass the test, which would make
/// `ε_pq` a square, so only three can occur.
pub fn cm_branches(case: Case, ell: u64) -> Result<Vec<CMBranch>> {
    if ell != 1 {
        return Ok(vec![CMBranch { label: "⟨-1⟩ × E".into(), class: None }]);
    }
    let mut out = vec![CMBranch { label: "⟨ζ8⟩ × E".into(), class: None }];
    if case == Case::Two {
        let a: Vec<BigRational> = exponents(&R_PQ_2PQ)?
            .iter()
            .zip(exponents(&R_QS_2QS)?)
            .map(|(x, y)| x + y)
            .collect();
        let mut pq_a = a.clone();
        pq_a[1] += BigRational::one();
        out.push(CMBranch {
            label: "√(ζ8 ε_pq √(ε_pq ε_2pq) √(ε_qs ε_2qs))".into(),
            class: Some(pq_a),
        });
        out.push(CMBranch {
            label: "√(ζ8 √(ε_pq ε_2pq) √(ε_qs ε_2qs))".into(),
            class: Some(a),
        });
    }
    Ok(out)
}
