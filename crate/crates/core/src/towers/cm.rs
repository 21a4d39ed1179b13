use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::is_squarefree;
use crate::mqfield::{lattice_coordinates, subset_products, MQElement, Torsion, UnitGroupDescription};

/// An expected outcome of the CM search, as stated for a family of fields.
#[derive(Debug, Clone)]
pub struct CMBranch {
    pub label: String,
    /// Class modulo squares of the unit `ε` with `multiplier·ε` a square, or
    /// `None` when no such unit should exist.
    pub class: Option<Vec<BigRational>>,
}

/// The unit `ε` (a product of real generators) found with `multiplier·ε` a
/// square in the real field.
#[derive(Debug, Clone, Serialize)]
pub struct CMHit {
    pub mask: u32,
    pub negated: bool,
    pub product: String,
    #[serde(serialize_with = "ser_rationals")]
    pub exponents: Vec<BigRational>,
    /// Index of the real generator the new root replaces.
    pub replaced: usize,
    pub new_generator: String,
}

fn ser_rationals<S: serde::Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|q| q.to_string()))
}

/// Unit group of `K(√−ℓ)` described through the real subfield `K`.
#[derive(Debug, Clone, Serialize)]
pub struct CMResult {
    pub ell: u64,
    /// `2+√2` for `ℓ = 1`, `ℓ` otherwise.
    pub multiplier: String,
    pub torsion: Torsion,
    /// The new unit: `ζ8` / `-1` when nothing is replaced, else the symbolic
    /// root `√(ζ8·ε)` / `√(−ε)`.
    pub eta: String,
    pub hit: Option<CMHit>,
    pub generators: Vec<String>,
    pub unit_rank: usize,
    pub patterns_tested: usize,
    pub matched_theorem_branch: Option<String>,
}

/// Searches all `multiplier · (±∏ gᵢ^{aᵢ})`, `aᵢ ∈ {0, 1}`, for squares in the
/// real field, where `multiplier` is `2+√2` when `ℓ = 1` and `ℓ` otherwise.
///
/// `real_units` must be a saturated system of a real field containing `√2`;
/// `ℓ` must be odd, squarefree and prime to every radicand.
pub fn cm_unit_group(real_units: &UnitGroupDescription, ell: u64, branches: &[CMBranch]) -> Result<CMResult> {
    let first = real_units
        .generators
        .first()
        .ok_or_else(|| Error::InvalidInput("empty unit system".into()))?;
    let field = first.element.field().clone();
    if !field.is_real() {
        return Err(Error::InvalidInput("the base field must be real".into()));
    }
    if ell == 0 || ell.is_multiple_of(2) || !is_squarefree(ell as i64) {
        return Err(Error::InvalidInput(format!("ℓ = {ell} must be odd, positive and squarefree")));
    }
    if let Some(r) = field.radicands().iter().find(|r| (r.unsigned_abs()).gcd(&ell) != 1) {
        return Err(Error::InvalidInput(format!("ℓ = {ell} shares a factor with radicand {r}")));
    }
    let (multiplier, multiplier_label) = if ell == 1 {
        field.mask_of(2).map_err(|_| Error::InvalidInput("ℓ = 1 needs √2 in the field".into()))?;
        let two = MQElement::from_coefficients(&field, &[(1, BigRational::from_integer(2.into())), (2, BigRational::one())])?;
        (two, "2+√2".to_string())
    } else {
        (MQElement::from_integer(&field, ell as i64), ell.to_string())
    };

    let elems: Vec<MQElement> = real_units.generators.iter().map(|g| g.element.clone()).collect();
    let products = subset_products(&elems)?;
    let mut hits = Vec::new();
    for (mask, prod) in products.iter().enumerate() {
        for negated in [false, true] {
            let eps = if negated { prod.neg() } else { prod.clone() };
            if multiplier.mul(&eps)?.try_sqrt()?.is_some() {
                hits.push((mask, negated));
            }
        }
    }
    if hits.len() > 1 {
        return Err(Error::Inconsistent(format!(
            "{} square classes found for ℓ = {ell}; the real system is not saturated",
            hits.len()
        )));
    }

    let n = real_units.seed_names.len();
    let mut generators = real_units.labels();
    let torsion = if ell == 1 { Torsion::Zeta8 } else { Torsion::MinusOne };
    let hit = hits.first().map(|&(mask, negated)| {
        let exponents: Vec<BigRational> = (0..n)
            .map(|c| {
                real_units
                    .generators
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .fold(BigRational::zero(), |acc, (_, g)| acc + &g.exponents[c])
            })
            .collect();
        let mut product = if mask == 0 {
            "1".to_string()
        } else {
            (0..real_units.generators.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| real_units.generators[i].label.clone())
                .collect::<Vec<_>>()
                .join(" ")
        };
        if negated {
            product = format!("-{product}");
        }
        let new_generator = if ell == 1 {
            format!("√(ζ8 {product})")
        } else {
            format!("√(-{product})")
        };
        let replaced = if mask == 0 { 0 } else { usize::BITS as usize - 1 - mask.leading_zeros() as usize };
        CMHit {
            mask: mask as u32,
            negated,
            product,
            exponents,
            replaced,
            new_generator,
        }
    });
    if let Some(h) = &hit {
        if h.mask == 0 {
            return Err(Error::Inconsistent(format!("{multiplier_label} is itself a square")));
        }
        generators[h.replaced] = h.new_generator.clone();
    }
    let eta = match &hit {
        Some(h) => h.new_generator.clone(),
        None => torsion.to_string(),
    };

    let matrix = real_units.exponent_matrix();
    let matched_theorem_branch = branches
        .iter()
        .find(|b| match (&b.class, &hit) {
            (None, None) => true,
            (Some(class), Some(h)) => same_class_mod_squares(&matrix, class, &h.exponents),
            _ => false,
        })
        .map(|b| b.label.clone());

    Ok(CMResult {
        ell,
        multiplier: multiplier_label,
        torsion,
        eta,
        hit,
        unit_rank: generators.len(),
        generators,
        patterns_tested: 2 * products.len(),
        matched_theorem_branch,
    })
}

/// Whether `a / b` is a square of a unit in the lattice spanned by `matrix`.
pub fn same_class_mod_squares(matrix: &[Vec<BigRational>], a: &[BigRational], b: &[BigRational]) -> bool {
    let diff: Vec<BigRational> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    lattice_coordinates(matrix, &diff).is_some_and(|c| {
        c.iter().all(|x| x.is_integer() && x.numer().is_even())
    })
}
