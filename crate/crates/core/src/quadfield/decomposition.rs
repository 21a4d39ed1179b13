//! Two-term square-root decompositions of norm `+1` fundamental units.
//!
//! If `ε = x + y√d` has norm `+1` then `(x+1)(x−1) = d y²`, and the gcd
//! structure forces `x + σ = k r₁ c₁²`, `x − σ = k r₂ c₂²` with `r₁ r₂ = d`,
//! `k ∈ {1, 2}` and `σ = ±1`. This yields
//! `√((2/k) ε) = c₁√r₁ + c₂√r₂` with `r₁c₁² − r₂c₂² = 2σ/k`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::units::{fundamental_unit, QuadUnit};
use crate::error::{Error, Result};
use crate::exactnum::{exact_sqrt, is_prime_u64, is_rational_square, legendre_i64};

/// Lemmas whose statements the classifier re-derives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LemmaId {
    #[serde(rename = "3.3")]
    L3_3,
    #[serde(rename = "3.4")]
    L3_4,
    #[serde(rename = "3.5")]
    L3_5,
    #[serde(rename = "3.6")]
    L3_6,
    #[serde(rename = "4.1")]
    L4_1,
    #[serde(rename = "4.2")]
    L4_2,
    #[serde(rename = "4.3")]
    L4_3,
}

impl LemmaId {
    pub const ALL: [LemmaId; 7] = [
        LemmaId::L3_3,
        LemmaId::L3_4,
        LemmaId::L3_5,
        LemmaId::L3_6,
        LemmaId::L4_1,
        LemmaId::L4_2,
        LemmaId::L4_3,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            LemmaId::L3_3 => "3.3",
            LemmaId::L3_4 => "3.4",
            LemmaId::L3_5 => "3.5",
            LemmaId::L3_6 => "3.6",
            LemmaId::L4_1 => "4.1",
            LemmaId::L4_2 => "4.2",
            LemmaId::L4_3 => "4.3",
        }
    }

    /// Residues of the two primes mod 8 and the required value of
    /// `(second/first)` (or `(first/second)`, the same here by reciprocity
    /// since one prime is `≡ 1 mod 4`, or sign-adjusted for two `≡ 3 mod 4`
    /// primes; see [`pair_symbol`]). `None` for Lemma 3.3, which is not a
    /// statement about prime pairs.
    pub fn pair_hypotheses(self) -> Option<(u64, u64, i8)> {
        match self {
            LemmaId::L3_3 => None,
            LemmaId::L3_4 => Some((5, 3, 1)),
            LemmaId::L3_5 => Some((7, 3, 1)),
            LemmaId::L3_6 => Some((5, 7, 1)),
            LemmaId::L4_1 => Some((5, 7, -1)),
            LemmaId::L4_2 => Some((5, 3, -1)),
            LemmaId::L4_3 => Some((7, 3, -1)),
        }
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LemmaId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LemmaId::ALL
            .into_iter()
            .find(|l| l.as_str() == s.trim())
            .ok_or_else(|| Error::InvalidInput(format!("unsupported lemma id {s:?}")))
    }
}

/// The symbol constraining a lemma's pair: `(p/q)` when the first prime is
/// `≡ 5 mod 8`, and `(q₂/q₁)` for the two-`3 mod 4` lemmas.
pub fn pair_symbol(first: u64, second: u64) -> Result<i8> {
    if first % 4 == 1 {
        legendre_i64(first as i64, second)
    } else {
        legendre_i64(second as i64, first)
    }
}

/// Checks that `(first, second)` satisfies the named lemma's hypotheses.
pub fn check_pair_hypotheses(first: u64, second: u64, lemma: LemmaId) -> Result<()> {
    let (r1, r2, symbol) = lemma.pair_hypotheses().ok_or_else(|| {
        Error::InvalidInput("lemma 3.3 concerns a single radicand, not a prime pair".into())
    })?;
    let fail = |why: String| Err(Error::HypothesesViolated(format!("lemma {lemma}: {why}")));
    for n in [first, second] {
        if !is_prime_u64(n) || n == 2 {
            return fail(format!("{n} is not an odd prime"));
        }
    }
    if first % 8 != r1 || second % 8 != r2 {
        return fail(format!(
            "need {r1} and {r2} mod 8, got {} and {}",
            first % 8,
            second % 8
        ));
    }
    let got = pair_symbol(first, second)?;
    if got != symbol {
        return fail(format!("Legendre symbol is {got}, lemma needs {symbol}"));
    }
    Ok(())
}

/// One displayed system `x ± 1 = k·r·c²` in the lemma's numbering.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct System {
    index: u8,
    r1: i64,
    r2: i64,
    k: i64,
}

/// Candidate systems for `d = P·Q` (odd) or `d = 2PQ`. The last entry is the
/// system ruled out by Lemma 3.3; it is still tested so a violation can be
/// reported.
fn systems(first: i64, second: i64, even: bool) -> ([System; 3], System) {
    let d = first * second;
    if even {
        (
            [
                System { index: 1, r1: 1, r2: 2 * d, k: 1 },
                System { index: 2, r1: first, r2: 2 * second, k: 1 },
                System { index: 3, r1: 2 * first, r2: second, k: 1 },
            ],
            System { index: 0, r1: 2, r2: d, k: 1 },
        )
    } else {
        (
            [
                System { index: 1, r1: first, r2: second, k: 1 },
                System { index: 2, r1: 1, r2: d, k: 1 },
                System { index: 3, r1: first, r2: second, k: 2 },
            ],
            System { index: 0, r1: 1, r2: d, k: 2 },
        )
    }
}

/// What a lemma item asserts: radicand shape, system, sign and the name of
/// the perfect square exhibited in the proof.
struct Assertion {
    even: bool,
    system: u8,
    sign: i8,
    witness: &'static str,
}

fn assertions(lemma: LemmaId) -> [Assertion; 2] {
    use LemmaId::*;
    let a = |even, system, sign, witness| Assertion { even, system, sign, witness };
    match lemma {
        L3_4 => [a(true, 2, -1, "p(x-1)"), a(false, 3, 1, "2p(a+1)")],
        L3_5 => [a(false, 3, -1, "2q1(x-1)"), a(true, 3, -1, "2q1(a-1)")],
        L3_6 => [a(true, 2, 1, "p(x+1)"), a(false, 3, 1, "2p(a+1)")],
        L4_1 => [a(false, 1, -1, "p(a-1)"), a(true, 3, -1, "2p(x-1)")],
        L4_2 => [a(true, 3, -1, "2p(x-1)"), a(false, 1, 1, "p(a+1)")],
        L4_3 => [a(false, 3, 1, "2q1(x+1)"), a(true, 3, 1, "2q1(a+1)")],
        L3_3 => unreachable!("lemma 3.3 has no decomposition items"),
    }
}

/// Which system holds for one radicand, with its exact witnesses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub lemma_id: LemmaId,
    pub item: u8,
    pub d: i64,
    pub unit: QuadUnit,
    pub system_index: u8,
    /// `σ` in `x + σ = k r₁ c₁²`.
    pub sign: i8,
    /// `2/k`: the decomposition is `√(scaling·ε) = c₁√r₁ + c₂√r₂`.
    pub scaling: u8,
    pub radicand_1: i64,
    pub radicand_2: i64,
    #[serde(with = "crate::exactnum::decimal")]
    pub coeff_1: BigInt,
    #[serde(with = "crate::exactnum::decimal")]
    pub coeff_2: BigInt,
    /// `r₁c₁² − r₂c₂²`, equal to `σ·scaling`.
    pub relation_rhs: i8,
    pub witness_label: String,
    /// `k·r₁·(x + σ)`, a perfect square.
    #[serde(with = "crate::exactnum::decimal")]
    pub witness_quantity: BigInt,
    /// `k·r₁·c₁`, whose square is the witness quantity.
    #[serde(with = "crate::exactnum::decimal")]
    pub square_witness: BigInt,
    pub asserted_system: u8,
    pub asserted_sign: i8,
    pub holds_as_asserted: bool,
}

impl DecompositionReport {
    /// Re-checks every exact identity carried by the report.
    pub fn verify(&self) -> bool {
        let (c1, c2) = (&self.coeff_1, &self.coeff_2);
        let (r1, r2) = (BigInt::from(self.radicand_1), BigInt::from(self.radicand_2));
        let s = BigInt::from(self.scaling);
        // (c1√r1 + c2√r2)^2 = r1c1² + r2c2² + 2c1c2√(r1r2) against scaling·ε
        let rational = &r1 * c1 * c1 + &r2 * c2 * c2;
        let irrational = BigInt::from(2) * c1 * c2;
        let unit_ok = r1.clone() * &r2 == BigInt::from(self.d)
            && rational == &s * &self.unit.x
            && irrational == &s * &self.unit.y
            && self.unit.denom == 1;
        let relation_ok = &r1 * c1 * c1 - &r2 * c2 * c2 == BigInt::from(self.relation_rhs)
            && i16::from(self.relation_rhs) == i16::from(self.sign) * i16::from(self.scaling);
        let witness_ok = &self.square_witness * &self.square_witness == self.witness_quantity;
        unit_ok && relation_ok && witness_ok
    }
}

/// Both items of a lemma for one prime pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaDecomposition {
    pub lemma_id: LemmaId,
    pub first: u64,
    pub second: u64,
    pub items: Vec<DecompositionReport>,
}

impl LemmaDecomposition {
    pub fn holds(&self) -> bool {
        self.items.iter().all(|r| r.holds_as_asserted && r.verify())
    }
}

/// Tries `x + σ = k r₁ c₁²`, `x − σ = k r₂ c₂²`; returns `(c₁, c₂)`.
fn try_system(x: &BigInt, sys: System, sign: i64) -> Option<(BigInt, BigInt)> {
    let solve = |v: BigInt, r: i64| -> Option<BigInt> {
        let m = BigInt::from(sys.k * r);
        if v.is_negative() || !(&v % &m).is_zero() {
            return None;
        }
        exact_sqrt(&(v / m))
    };
    let c1 = solve(x + sign, sys.r1)?;
    let c2 = solve(x - sign, sys.r2)?;
    Some((c1, c2))
}

/// Lemma 3.3: for `N(ε_d) = 1`, none of `2(x±1)`, `2d(x±1)` is a rational
/// square. Returns the four quantities that were tested.
pub fn check_lemma_3_3(d: i64) -> Result<Lemma33Report> {
    let unit = fundamental_unit(d)?;
    if unit.norm != 1 {
        return Err(Error::HypothesesViolated(format!(
            "lemma 3.3 needs N(ε_{d}) = 1, found -1"
        )));
    }
    let (x, _) = unit.coordinates();
    let one = BigRational::from_integer(1.into());
    let two = BigRational::from_integer(2.into());
    let two_d = BigRational::from_integer((2 * d).into());
    let quantities = [
        &two * (&x + &one),
        &two * (&x - &one),
        &two_d * (&x + &one),
        &two_d * (&x - &one),
    ];
    let squares: Vec<bool> = quantities.iter().map(is_rational_square).collect();
    Ok(Lemma33Report {
        d,
        holds: squares.iter().all(|s| !s),
        unit,
        quantities: quantities.iter().map(|q| q.to_string()).collect(),
        squares,
    })
}

/// Outcome of the Lemma 3.3 exclusion test for one radicand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma33Report {
    pub d: i64,
    pub unit: QuadUnit,
    /// `2(x+1), 2(x−1), 2d(x+1), 2d(x−1)` as exact rationals.
    pub quantities: Vec<String>,
    pub squares: Vec<bool>,
    pub holds: bool,
}

fn classify_item(first: i64, second: i64, lemma: LemmaId, item: u8, a: &Assertion) -> Result<DecompositionReport> {
    let d = if a.even { 2 * first * second } else { first * second };
    let unit = fundamental_unit(d)?;
    if unit.denom != 1 {
        return Err(Error::HalfIntegralUnit(d));
    }
    if unit.norm != 1 {
        return Err(Error::Verification(format!(
            "lemma {lemma}: ε_{d} has norm -1, but the lemma's setting forces +1"
        )));
    }
    let l33 = check_lemma_3_3(d)?;
    if !l33.holds {
        return Err(Error::Verification(format!(
            "lemma 3.3 exclusion fails for d = {d}: {:?}",
            l33.quantities
        )));
    }
    let (candidates, excluded) = systems(first, second, a.even);
    for sign in [1, -1] {
        if try_system(&unit.x, excluded, sign).is_some() {
            return Err(Error::Verification(format!(
                "d = {d}: the system excluded by lemma 3.3 holds"
            )));
        }
    }
    let mut hits = Vec::new();
    for sys in candidates {
        for sign in [1i8, -1] {
            if let Some(c) = try_system(&unit.x, sys, sign.into()) {
                hits.push((sys, sign, c));
            }
        }
    }
    let (sys, sign, (c1, c2)) = match hits.len() {
        0 => return Err(Error::NoSystemMatches(d)),
        1 => hits.pop().unwrap(),
        _ => {
            return Err(Error::Verification(format!(
                "d = {d}: several systems hold at once"
            )))
        }
    };
    let k = BigInt::from(sys.k);
    let witness_quantity = &k * sys.r1 * (&unit.x + i64::from(sign));
    let square_witness = &k * sys.r1 * &c1;
    let scaling = (2 / sys.k) as u8;
    let report = DecompositionReport {
        lemma_id: lemma,
        item,
        d,
        system_index: sys.index,
        sign,
        scaling,
        radicand_1: sys.r1,
        radicand_2: sys.r2,
        coeff_1: c1,
        coeff_2: c2,
        relation_rhs: sign * scaling as i8,
        witness_label: a.witness.to_string(),
        witness_quantity,
        square_witness,
        asserted_system: a.system,
        asserted_sign: a.sign,
        holds_as_asserted: sys.index == a.system && sign == a.sign,
        unit,
    };
    if !report.verify() {
        return Err(Error::Verification(format!(
            "d = {d}: decomposition identities do not hold exactly"
        )));
    }
    Ok(report)
}

/// Classifies both radicands (`d = PQ` and `d = 2PQ`) of a lemma for the
/// prime pair `(first, second)`, ordered as in the lemma's statement.
///
/// A disagreement with the lemma is reported through
/// [`DecompositionReport::holds_as_asserted`], never repaired.
pub fn classify_decomposition(first: u64, second: u64, lemma: LemmaId) -> Result<LemmaDecomposition> {
    check_pair_hypotheses(first, second, lemma)?;
    let items = assertions(lemma)
        .iter()
        .zip(1u8..)
        .map(|(a, item)| classify_item(first as i64, second as i64, lemma, item, a))
        .collect::<Result<Vec<_>>>()?;
    Ok(LemmaDecomposition { lemma_id: lemma, first, second, items })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eps35_under_lemma_4_1() {
        let r = classify_decomposition(5, 7, LemmaId::L4_1).unwrap();
        assert!(r.holds());
        let it = &r.items[0];
        assert_eq!(it.d, 35);
        assert_eq!((it.scaling, it.radicand_1, it.radicand_2), (2, 5, 7));
        assert_eq!((it.coeff_1.clone(), it.coeff_2.clone()), (1.into(), 1.into()));
        assert_eq!(it.relation_rhs, -2);
        assert_eq!(it.witness_quantity, BigInt::from(25));
        assert_eq!(it.witness_label, "p(a-1)");
        assert_eq!(r.items[1].d, 70);
    }

    #[test]
    fn eps55_under_lemma_3_4() {
        let r = classify_decomposition(5, 11, LemmaId::L3_4).unwrap();
        assert!(r.holds());
        let it = &r.items[1];
        assert_eq!(it.d, 55);
        assert_eq!(it.scaling, 1);
        assert_eq!((it.coeff_1.clone(), it.coeff_2.clone()), (3.into(), 2.into()));
        assert_eq!(it.relation_rhs, 1);
        assert_eq!(it.witness_quantity, BigInt::from(900));
        assert_eq!(it.square_witness, BigInt::from(30));
    }

    #[test]
    fn hypotheses_are_checked() {
        assert!(matches!(
            classify_decomposition(5, 7, LemmaId::L3_6),
            Err(Error::HypothesesViolated(_))
        ));
        assert!(matches!(
            classify_decomposition(5, 9, LemmaId::L4_2),
            Err(Error::HypothesesViolated(_))
        ));
        assert!(classify_decomposition(5, 7, LemmaId::L3_3).is_err());
    }

    #[test]
    fn lemma_3_3_examples() {
        for d in [3, 6, 7, 14, 35, 70, 55, 110] {
            assert!(check_lemma_3_3(d).unwrap().holds, "d = {d}");
        }
        // 2 has a unit of norm -1
        assert!(matches!(check_lemma_3_3(2), Err(Error::HypothesesViolated(_))));
    }

    #[test]
    fn lemma_ids_parse() {
        for l in LemmaId::ALL {
            assert_eq!(l.as_str().parse::<LemmaId>().unwrap(), l);
        }
        assert!("9.9".parse::<LemmaId>().is_err());
    }
}
