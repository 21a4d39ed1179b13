use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use super::field::{GaloisElement, MQField, Subgroup};
use super::raw::{self, Obstruction, Raw};
use crate::error::{Error, Result};
use crate::quadfield::QuadUnit;

/// An exact element of a multiquadratic field.
#[derive(Clone)]
pub struct MQElement {
    field: Arc<MQField>,
    pub(crate) raw: Raw,
}

/// Why an element is not a square.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NonSquareCertificate {
    /// Negative under the real embedding obtained by composing with
    /// `sigma`.
    NegativeEmbedding { sigma: GaloisElement },
    /// Quadratic nonresidue modulo a prime `ℓ` splitting completely; `hom`
    /// selects the signs of the chosen square roots of the radicands mod `ℓ`.
    QuadraticResidue { prime: u64, hom: u8 },
    /// A rational that is not a rational square.
    RationalNonSquare,
}

impl MQElement {
    pub(crate) fn from_raw(field: &Arc<MQField>, raw: Raw) -> MQElement {
        MQElement { field: Arc::clone(field), raw }
    }

    pub fn zero(field: &Arc<MQField>) -> MQElement {
        MQElement::from_raw(field, Raw::zero(field.degree()))
    }

    pub fn one(field: &Arc<MQField>) -> MQElement {
        MQElement::from_raw(field, Raw::one(field.degree()))
    }

    pub fn from_integer(field: &Arc<MQField>, n: i64) -> MQElement {
        MQElement::from_rational(field, &BigRational::from_integer(n.into()))
    }

    pub fn from_rational(field: &Arc<MQField>, q: &BigRational) -> MQElement {
        MQElement::from_raw(field, Raw::rational(field.degree(), q))
    }

    /// `Σ c·√b` over `(b, c)` pairs; every `b` must be a basis radicand.
    pub fn from_coefficients(field: &Arc<MQField>, terms: &[(i64, BigRational)]) -> Result<MQElement> {
        let mut acc = Raw::zero(field.degree());
        for (b, c) in terms {
            let m = field.mask_of(*b)?;
            let mut term = Raw::zero(field.degree());
            // √b = θ_m / factor_m
            let q = c / BigRational::from_integer(field.factor(m).clone());
            term.num[m] = q.numer().clone();
            term.den = q.denom().clone();
            acc = acc.add(&term);
        }
        Ok(MQElement::from_raw(field, acc))
    }

    /// `√b` for a basis radicand `b`.
    pub fn sqrt_of_radicand(field: &Arc<MQField>, b: i64) -> Result<MQElement> {
        MQElement::from_coefficients(field, &[(b, BigRational::one())])
    }

    pub fn field(&self) -> &Arc<MQField> {
        &self.field
    }

    /// Coefficient of `√b` in the squarefree basis.
    pub fn coefficient(&self, b: i64) -> Result<BigRational> {
        let m = self.field.mask_of(b)?;
        Ok(self.coefficient_at(m))
    }

    fn coefficient_at(&self, m: usize) -> BigRational {
        self.raw.coeff(m) * BigRational::from_integer(self.field.factor(m).clone())
    }

    /// Nonzero `(radicand, coefficient)` pairs in basis order.
    pub fn coefficients(&self) -> Vec<(i64, BigRational)> {
        (0..self.field.degree())
            .filter(|&m| !self.raw.num[m].is_zero())
            .map(|m| (self.field.basis()[m], self.coefficient_at(m)))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.raw.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.raw.is_rational() && self.raw.rational_part().is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.raw.is_rational()
    }

    /// The rational value, if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.raw.rational_part())
    }

    /// Largest bit length of any stored integer.
    pub fn bits(&self) -> u64 {
        self.raw.bits()
    }

    fn check_field(&self, other: &MQElement) -> Result<()> {
        if self.field.same_as(&other.field) {
            Ok(())
        } else {
            Err(Error::FieldMismatch(format!("{} vs {}", self.field, other.field)))
        }
    }

    pub fn mul(&self, other: &MQElement) -> Result<MQElement> {
        self.check_field(other)?;
        Ok(MQElement::from_raw(&self.field, raw::mul(&self.field.tower, &self.raw, &other.raw)?))
    }

    pub fn add(&self, other: &MQElement) -> Result<MQElement> {
        self.check_field(other)?;
        Ok(MQElement::from_raw(&self.field, self.raw.add(&other.raw)))
    }

    pub fn sub(&self, other: &MQElement) -> Result<MQElement> {
        self.check_field(other)?;
        Ok(MQElement::from_raw(&self.field, self.raw.sub(&other.raw)))
    }

    pub fn neg(&self) -> MQElement {
        MQElement::from_raw(&self.field, self.raw.neg())
    }

    pub fn scale(&self, q: &BigRational) -> MQElement {
        MQElement::from_raw(&self.field, self.raw.scale(q))
    }

    pub fn square(&self) -> Result<MQElement> {
        self.mul(self)
    }

    /// Multiplicative inverse: the product of the nontrivial conjugates
    /// divided by the norm.
    pub fn inverse(&self) -> Result<MQElement> {
        let inv = raw::inverse(&self.field.tower, &self.raw)?.ok_or(Error::Zero)?;
        Ok(MQElement::from_raw(&self.field, inv))
    }

    pub fn div(&self, other: &MQElement) -> Result<MQElement> {
        self.mul(&other.inverse()?)
    }

    pub fn pow(&self, e: i64) -> Result<MQElement> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = MQElement::one(&self.field);
        let mut sq = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&sq)?;
            }
            k >>= 1;
            if k > 0 {
                sq = sq.square()?;
            }
        }
        Ok(acc)
    }

    pub fn galois_apply(&self, sigma: GaloisElement) -> MQElement {
        MQElement::from_raw(&self.field, self.raw.conj(sigma.0 as usize))
    }

    /// `∏_{σ∈H} σ(u)`, computed as `v ↦ v·σ(v)` over a basis of `H`.
    pub fn relative_norm(&self, h: &Subgroup) -> Result<MQElement> {
        let mut v = self.clone();
        for &g in h.basis() {
            v = v.mul(&v.galois_apply(g))?;
        }
        Ok(v)
    }

    /// Norm to `Q`.
    pub fn absolute_norm(&self) -> Result<BigRational> {
        raw::norm(&self.field.tower, &self.raw)
    }

    /// Coefficients of `∏_σ (X − σ(u))`, constant term first.
    pub fn characteristic_polynomial(&self) -> Result<Vec<BigRational>> {
        let mut poly = vec![MQElement::one(&self.field)];
        for g in self.field.galois_group() {
            let root = self.galois_apply(g).neg();
            let mut next = vec![MQElement::zero(&self.field); poly.len() + 1];
            for (i, c) in poly.iter().enumerate() {
                next[i] = next[i].add(&c.mul(&root)?)?;
                next[i + 1] = next[i + 1].add(c)?;
            }
            poly = next;
        }
        poly.into_iter()
            .map(|c| {
                c.as_rational()
                    .ok_or_else(|| Error::Verification("characteristic polynomial is not rational".into()))
            })
            .collect()
    }

    /// Whether the element is an algebraic integer of norm `±1`.
    pub fn is_unit(&self) -> Result<bool> {
        if self.is_zero() {
            return Ok(false);
        }
        let poly = self.characteristic_polynomial()?;
        Ok(poly.iter().all(BigRational::is_integer) && poly[0].abs().is_one())
    }

    /// Trace to `Q`.
    pub fn trace(&self) -> Result<BigRational> {
        Ok(self.raw.rational_part() * BigRational::from_integer(self.field.degree().into()))
    }

    /// Signs under all real embeddings, indexed by Galois element (the
    /// identity is the embedding with every `√rₖ > 0`).
    pub fn embedding_signs(&self) -> Result<Vec<i8>> {
        if !self.field.is_real() {
            return Err(Error::InvalidInput("field has no real embeddings".into()));
        }
        (0..self.field.degree())
            .map(|s| raw::sign(&self.field.tower, &self.raw.conj(s)))
            .collect()
    }

    /// A cheap proof that the element is not a square, when one exists.
    pub fn non_square_certificate(&self) -> Result<Option<NonSquareCertificate>> {
        Ok(raw::obstruction(&self.field.tower, &self.raw)?.map(|o| match o {
            Obstruction::Embedding(s) => NonSquareCertificate::NegativeEmbedding { sigma: GaloisElement(s as u8) },
            Obstruction::Residue { prime, hom } => NonSquareCertificate::QuadraticResidue { prime, hom: hom as u8 },
            Obstruction::Rational => NonSquareCertificate::RationalNonSquare,
        }))
    }

    /// Re-checks a certificate independently of how it was found.
    pub fn check_certificate(&self, cert: &NonSquareCertificate) -> Result<bool> {
        Ok(match cert {
            NonSquareCertificate::NegativeEmbedding { sigma } => {
                self.field.is_real() && raw::sign(&self.field.tower, &self.raw.conj(sigma.0 as usize))? < 0
            }
            NonSquareCertificate::QuadraticResidue { prime, hom } => {
                let (value, ok) = self.residue_image(*prime, *hom as usize)?;
                ok && value != 0 && crate::exactnum::legendre_i64(value as i64, *prime)? == -1
            }
            NonSquareCertificate::RationalNonSquare => self
                .as_rational()
                .is_some_and(|q| !crate::exactnum::is_rational_square(&q)),
        })
    }

    /// Image in `F_ℓ` under the homomorphism sending `√rₖ` to `±` the
    /// smallest square root of `rₖ` mod `ℓ`, signs selected by `hom`; `ok` is
    /// false when `ℓ` is not an odd prime, the denominator vanishes mod `ℓ`,
    /// or some radicand is not a nonzero square mod `ℓ`.
    fn residue_image(&self, ell: u64, hom: usize) -> Result<(u64, bool)> {
        use num_integer::Integer;
        use num_traits::ToPrimitive;
        if ell < 3 || !crate::exactnum::is_prime_u64(ell) {
            return Ok((0, false));
        }
        let big_ell = BigInt::from(ell);
        let modp = |x: &BigInt| -> u64 { x.mod_floor(&big_ell).to_u64().unwrap() };
        let mut roots = Vec::new();
        for &r in self.field.radicands() {
            match raw::canonical_root(r, ell) {
                Some(s) => roots.push(s),
                None => return Ok((0, false)),
            }
        }
        let den = modp(&self.raw.den);
        if den == 0 {
            return Ok((0, false));
        }
        let mut value = 0u64;
        for (m, c) in self.raw.num.iter().enumerate() {
            let mut term = modp(c);
            for (k, root) in roots.iter().enumerate() {
                if m >> k & 1 == 1 {
                    let s = if hom >> k & 1 == 1 { ell - root } else { *root };
                    term = term * s % ell;
                }
            }
            value = (value + term) % ell;
        }
        let inv = raw::pow_mod(den, ell - 2, ell);
        Ok((value * inv % ell, true))
    }

    /// Exact square root with positive leading coefficient, or `None`.
    pub fn try_sqrt(&self) -> Result<Option<MQElement>> {
        if self.is_zero() {
            return Err(Error::Zero);
        }
        let Some(root) = raw::sqrt(&self.field.tower, &self.raw)? else {
            return Ok(None);
        };
        let root = if root.leading_sign() < 0 { root.neg() } else { root };
        let root = MQElement::from_raw(&self.field, root);
        if root.square()? != *self {
            return Err(Error::Verification("square root failed exact re-squaring".into()));
        }
        Ok(Some(root))
    }

    /// The element or its negative, whichever has positive leading
    /// coefficient.
    pub fn sign_normalized(&self) -> MQElement {
        if self.raw.leading_sign() < 0 {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Equality up to sign.
    pub fn eq_up_to_sign(&self, other: &MQElement) -> bool {
        self == other || *self == other.neg()
    }
}

impl PartialEq for MQElement {
    fn eq(&self, other: &MQElement) -> bool {
        self.field.same_as(&other.field) && self.raw == other.raw
    }
}

impl Eq for MQElement {}

impl fmt::Debug for MQElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MQElement({self})")
    }
}

impl fmt::Display for MQElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.coefficients();
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (b, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let mag_s = if mag.is_integer() { mag.numer().to_string() } else { format!("({mag})") };
            if *b == 1 {
                f.write_str(&mag_s)?;
            } else if mag.is_one() {
                write!(f, "√{b}")?;
            } else {
                write!(f, "{mag_s}√{b}")?;
            }
        }
        Ok(())
    }
}

/// Serialized as `[[radicand, "coefficient"], ...]` in basis order.
impl Serialize for MQElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms = self.coefficients();
        let mut seq = s.serialize_seq(Some(terms.len()))?;
        for (b, c) in terms {
            seq.serialize_element(&(b.to_string(), c.to_string()))?;
        }
        seq.end()
    }
}

/// `(x + y√d)/denom` as an element of `field`.
pub fn embed_quad_unit(eps: &QuadUnit, field: &Arc<MQField>) -> Result<MQElement> {
    let den = BigInt::from(eps.denom);
    MQElement::from_coefficients(
        field,
        &[
            (1, BigRational::new(eps.x.clone(), den.clone())),
            (eps.d, BigRational::new(eps.y.clone(), den)),
        ],
    )
}
