//! Saturation of a product of subfield unit groups by exact square roots.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::element::MQElement;
use crate::error::{Error, Result};

/// Torsion subgroup of a unit group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Torsion {
    #[serde(rename = "-1")]
    MinusOne,
    #[serde(rename = "ζ8")]
    Zeta8,
}

impl fmt::Display for Torsion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Torsion::MinusOne => "-1",
            Torsion::Zeta8 => "ζ8",
        })
    }
}

/// A named seed unit (normally a quadratic fundamental unit).
#[derive(Debug, Clone)]
pub struct SeedUnit {
    /// Symbol used in labels, e.g. `pq` for `ε_pq`.
    pub name: String,
    pub element: MQElement,
}

/// Where a generator comes from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// A seed unit itself.
    FundamentalUnit,
    /// A product of seeds with integral exponents.
    Product,
    /// A `2^k`-th root of a product of seeds (`k = 1`: square root,
    /// `k = 2`: fourth root).
    Root { degree: u32 },
}

/// One generator: the element and its exponent vector over the seeds, so
/// that `element² ^ (2^k)` equals `± ∏ seed_i^(2^k·e_i)`.
#[derive(Debug, Clone, Serialize)]
pub struct UnitGenerator {
    pub label: String,
    pub provenance: Provenance,
    #[serde(serialize_with = "ser_rationals")]
    pub exponents: Vec<BigRational>,
    /// Coefficients as `[radicand, coefficient]` pairs.
    pub element: MQElement,
}

fn ser_rationals<S: serde::Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|q| q.to_string()))
}

/// A fundamental system of units together with how it was obtained.
#[derive(Debug, Clone, Serialize)]
pub struct UnitGroupDescription {
    pub seed_names: Vec<String>,
    pub generators: Vec<UnitGenerator>,
    pub torsion: Torsion,
    pub index_log2: u32,
    /// Each accepted root, in order: the product (as seed exponents, before
    /// halving) found to be a square, and whether it carried the `−1` twist.
    pub steps: Vec<SaturationStep>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SaturationStep {
    pub mask: u32,
    pub negated: bool,
    pub replaced: usize,
    pub root_label: String,
}

impl UnitGroupDescription {
    /// Exponent matrix, one row per generator.
    pub fn exponent_matrix(&self) -> Vec<Vec<BigRational>> {
        self.generators.iter().map(|g| g.exponents.clone()).collect()
    }

    pub fn labels(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.label.clone()).collect()
    }

    /// Number of generators that are `2^k`-th roots with `k = degree_log2`.
    pub fn count_roots(&self, degree: u32) -> usize {
        self.generators
            .iter()
            .filter(|g| g.provenance == Provenance::Root { degree })
            .count()
    }
}

/// `[E : ⟨seeds⟩] = 2^index_log2`.
pub fn unit_index(desc: &UnitGroupDescription) -> BigInt {
    BigInt::one() << desc.index_log2
}

/// Label for `∏ seed_i^e_i`, e.g. `√(ε_pq ε_2pq)` or `⁴√(ε_pq ε_2pq ε_qs ε_2qs)`.
pub fn exponent_label(names: &[String], exps: &[BigRational]) -> String {
    let nonzero: Vec<(usize, &BigRational)> = exps.iter().enumerate().filter(|(_, e)| !e.is_zero()).collect();
    if nonzero.is_empty() {
        return "1".into();
    }
    let common = nonzero[0].1;
    let uniform = nonzero.iter().all(|(_, e)| *e == common) && common.numer().is_one();
    if uniform {
        let body: Vec<String> = nonzero.iter().map(|(i, _)| format!("ε_{}", names[*i])).collect();
        let body = body.join(" ");
        return match common.denom().to_string().as_str() {
            "1" => body,
            "2" => format!("√({body})"),
            "4" => format!("⁴√({body})"),
            n => format!("{n}√({body})"),
        };
    }
    // common-denominator form, e.g. ⁴√(ε_pq³ ε_2pq ε_qs ε_2qs)
    let den = nonzero.iter().fold(BigInt::one(), |acc, (_, e)| acc.lcm(e.denom()));
    if nonzero.iter().all(|(_, e)| e.is_positive()) {
        let body: Vec<String> = nonzero
            .iter()
            .map(|(i, e)| {
                let k = (*e * BigRational::from_integer(den.clone())).to_integer();
                if k.is_one() {
                    format!("ε_{}", names[*i])
                } else {
                    format!("ε_{}{}", names[*i], superscript(&k.to_string()))
                }
            })
            .collect();
        let body = body.join(" ");
        return match den.to_string().as_str() {
            "1" => body,
            "2" => format!("√({body})"),
            "4" => format!("⁴√({body})"),
            n => format!("{n}√({body})"),
        };
    }
    let parts: Vec<String> = nonzero
        .iter()
        .map(|(i, e)| {
            if e.is_one() {
                format!("ε_{}", names[*i])
            } else {
                format!("ε_{}^({e})", names[*i])
            }
        })
        .collect();
    parts.join(" ")
}

fn superscript(digits: &str) -> String {
    digits
        .chars()
        .map(|c| match c {
            '0' => '⁰',
            '1' => '¹',
            '2' => '²',
            '3' => '³',
            '4' => '⁴',
            '5' => '⁵',
            '6' => '⁶',
            '7' => '⁷',
            '8' => '⁸',
            '9' => '⁹',
            other => other,
        })
        .collect()
}

fn provenance_of(exps: &[BigRational]) -> Provenance {
    let max_den = exps.iter().map(|e| e.denom().clone()).max().unwrap_or_else(BigInt::one);
    if max_den.is_one() {
        let unit = exps.iter().filter(|e| !e.is_zero()).count() == 1 && exps.iter().any(|e| e.is_one());
        if unit {
            Provenance::FundamentalUnit
        } else {
            Provenance::Product
        }
    } else {
        Provenance::Root { degree: max_den.bits() as u32 - 1 }
    }
}

fn make_generator(names: &[String], exponents: Vec<BigRational>, element: MQElement) -> UnitGenerator {
    UnitGenerator {
        label: exponent_label(names, &exponents),
        provenance: provenance_of(&exponents),
        exponents,
        element,
    }
}

/// `∏_{i∈mask} elems[i]` for every mask, built incrementally.
pub(crate) fn subset_products(elems: &[MQElement]) -> Result<Vec<MQElement>> {
    let field = elems
        .first()
        .map(|e| e.field().clone())
        .ok_or_else(|| Error::InvalidInput("no generators".into()))?;
    let mut out = Vec::with_capacity(1 << elems.len());
    out.push(MQElement::one(&field));
    for mask in 1usize..1 << elems.len() {
        let low = mask.trailing_zeros() as usize;
        let prev = &out[mask & (mask - 1)];
        out.push(prev.mul(&elems[low])?);
    }
    Ok(out)
}

/// Adjoins square roots of products of generators (with exponents in
/// `{0, 1}`, optionally times `−1`) until none remains.
///
/// Masks are scanned in increasing order, the untwisted product before the
/// twisted one, and the first square wins; its root replaces the
/// participating generator of highest index. A final pass reduces each root's
/// exponents modulo the seed units that are still generators.
pub fn saturate(seeds: &[SeedUnit], torsion: Torsion) -> Result<UnitGroupDescription> {
    if seeds.is_empty() {
        return Err(Error::InvalidInput("saturation needs at least one seed".into()));
    }
    for s in seeds {
        if !s.element.is_unit()? {
            return Err(Error::NotAUnit(format!("seed ε_{} = {}", s.name, s.element)));
        }
    }
    let names: Vec<String> = seeds.iter().map(|s| s.name.clone()).collect();
    let n = seeds.len();
    let mut gens: Vec<UnitGenerator> = seeds
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let mut e = vec![BigRational::zero(); n];
            e[i] = BigRational::one();
            make_generator(&names, e, s.element.clone())
        })
        .collect();
    let mut steps = Vec::new();

    'outer: loop {
        let elems: Vec<MQElement> = gens.iter().map(|g| g.element.clone()).collect();
        let products = subset_products(&elems)?;
        for (mask, prod) in products.iter().enumerate().skip(1) {
            for negated in [false, true] {
                let cand = if negated { prod.neg() } else { prod.clone() };
                let Some(root) = cand.try_sqrt()? else {
                    continue;
                };
                let replaced = usize::BITS as usize - 1 - mask.leading_zeros() as usize;
                let half = BigRational::new(1.into(), 2.into());
                let exps: Vec<BigRational> = (0..n)
                    .map(|c| {
                        (0..gens.len())
                            .filter(|i| mask >> i & 1 == 1)
                            .fold(BigRational::zero(), |acc, i| acc + &gens[i].exponents[c])
                            * &half
                    })
                    .collect();
                let g = make_generator(&names, exps, root);
                steps.push(SaturationStep {
                    mask: mask as u32,
                    negated,
                    replaced,
                    root_label: g.label.clone(),
                });
                gens[replaced] = g;
                continue 'outer;
            }
        }
        break;
    }

    tidy(&names, seeds, &mut gens)?;
    let desc = UnitGroupDescription {
        seed_names: names,
        index_log2: steps.len() as u32,
        generators: gens,
        torsion,
        steps,
    };
    let det = determinant(&desc.exponent_matrix())
        .ok_or_else(|| Error::Verification("saturated generators are dependent".into()))?;
    let expected = BigRational::new(BigInt::one(), unit_index(&desc));
    if det.abs() != expected {
        return Err(Error::Verification(format!(
            "exponent determinant {det} disagrees with index 2^{}",
            desc.index_log2
        )));
    }
    Ok(desc)
}

/// Reduces root exponents into `[0, 1)` along seeds that are generators.
fn tidy(names: &[String], seeds: &[SeedUnit], gens: &mut [UnitGenerator]) -> Result<()> {
    let seed_rows: Vec<usize> = (0..seeds.len())
        .filter(|&i| {
            gens.iter().any(|g| g.provenance == Provenance::FundamentalUnit && g.exponents[i].is_one())
        })
        .collect();
    for g in gens.iter_mut() {
        if g.provenance == Provenance::FundamentalUnit {
            continue;
        }
        let mut exps = g.exponents.clone();
        let mut element = g.element.clone();
        for &i in &seed_rows {
            let k = exps[i].floor().to_integer();
            if k.is_zero() {
                continue;
            }
            let k_i64: i64 = (&k).try_into().map_err(|_| Error::Inconsistent("exponent overflow".into()))?;
            element = element.mul(&seeds[i].element.pow(-k_i64)?)?;
            exps[i] -= BigRational::from_integer(k);
        }
        *g = make_generator(names, exps, element.sign_normalized());
    }
    Ok(())
}

/// Determinant of a square rational matrix, `None` if singular.
#[allow(clippy::needless_range_loop)]
pub fn determinant(m: &[Vec<BigRational>]) -> Option<BigRational> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m.to_vec();
    let mut det = BigRational::one();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            for c in col..n {
                let v = &f * &a[col][c];
                a[r][c] -= v;
            }
        }
    }
    Some(det)
}

/// Solves `x·A = b` for a row vector `x`, `A` square and invertible:
/// the coordinates of `b` in the lattice spanned by the rows of `A`.
#[allow(clippy::needless_range_loop)]
pub fn lattice_coordinates(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = a.len();
    // transpose: Aᵀ xᵀ = bᵀ
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = (0..n).map(|j| a[j][i].clone()).collect();
            row.push(b[i].clone());
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(pivot, col);
        let p = m[col][col].clone();
        for c in col..=n {
            m[col][c] = &m[col][c] / &p;
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for c in col..=n {
                let v = &f * &m[col][c];
                m[r][c] -= v;
            }
        }
    }
    Some((0..n).map(|i| m[i][n].clone()).collect())
}

/// Whether the rows of `a` and `b` span the same `Z`-lattice.
pub fn same_lattice(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> bool {
    if a.len() != b.len() || a.iter().chain(b).any(|r| r.len() != a.len()) {
        return false;
    }
    let inside = |x: &[Vec<BigRational>], y: &[Vec<BigRational>]| {
        x.iter().all(|row| {
            lattice_coordinates(y, row).is_some_and(|coords| coords.iter().all(BigRational::is_integer))
        })
    };
    inside(a, b) && inside(b, a)
}

/// Exponent vector over `names` for a product given as `(name, exponent)`.
pub fn exponent_vector(names: &[String], terms: &[(&str, BigRational)]) -> Result<Vec<BigRational>> {
    let mut v = vec![BigRational::zero(); names.len()];
    for (name, e) in terms {
        let i = names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::InvalidInput(format!("unknown seed ε_{name}")))?;
        v[i] += e;
    }
    Ok(v)
}
