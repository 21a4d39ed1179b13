use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::raw::Tower;
use crate::error::{Error, Result};
use crate::exactnum::{is_squarefree, squarefree_decompose};

/// Largest supported number of generators (degree 16).
pub const MAX_GENERATORS: usize = 4;

/// `Q(√r₀, …, √r_{n−1})` together with its squarefree basis and Galois group.
#[derive(Debug)]
pub struct MQField {
    radicands: Vec<i64>,
    /// Squarefree part (with sign) of each subset product, indexed by mask.
    basis: Vec<i64>,
    /// `∏_{k∈m} √r_k = factor_m · √basis_m`.
    factors: Vec<BigInt>,
    pub(crate) tower: Tower,
}

impl MQField {
    /// Builds the field; the radicands must be squarefree, different from 0
    /// and 1, and multiplicatively independent modulo squares.
    pub fn new(radicands: &[i64]) -> Result<Arc<MQField>> {
        if radicands.is_empty() || radicands.len() > MAX_GENERATORS {
            return Err(Error::InvalidInput(format!(
                "need between 1 and {MAX_GENERATORS} radicands, got {}",
                radicands.len()
            )));
        }
        for &r in radicands {
            if r == 0 || r == 1 || !is_squarefree(r) {
                return Err(Error::NotSquarefree(r.to_string()));
            }
        }
        let n = radicands.len();
        let mut basis = Vec::with_capacity(1 << n);
        let mut factors = Vec::with_capacity(1 << n);
        for m in 0..1usize << n {
            let members: Vec<i64> = (0..n).filter(|k| m >> k & 1 == 1).map(|k| radicands[k]).collect();
            let product = members.iter().fold(BigInt::one(), |acc, &r| acc * r.abs());
            let negatives = members.iter().filter(|&&r| r < 0).count();
            let (dec, _) = squarefree_decompose(&product)?;
            let sign: i64 = if negatives % 2 == 1 { -1 } else { 1 };
            let b: i64 = i64::try_from(dec.squarefree_part * sign).map_err(|_| {
                Error::InvalidInput("basis radicand exceeds 64 bits".into())
            })?;
            // i^negatives with the odd leftover absorbed into √b
            let twist = if (negatives / 2) % 2 == 1 { -1 } else { 1 };
            basis.push(b);
            factors.push(dec.square_factor * twist);
        }
        let mut sorted = basis.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != basis.len() || basis[1..].contains(&1) {
            return Err(Error::InvalidInput(format!(
                "radicands {radicands:?} are not independent modulo squares"
            )));
        }
        Ok(Arc::new(MQField {
            radicands: radicands.to_vec(),
            basis,
            factors,
            tower: Tower::new(radicands.to_vec()),
        }))
    }

    pub fn radicands(&self) -> &[i64] {
        &self.radicands
    }

    pub fn generator_count(&self) -> usize {
        self.radicands.len()
    }

    pub fn degree(&self) -> usize {
        1 << self.radicands.len()
    }

    /// Basis radicands in mask order; entry 0 is `1`.
    pub fn basis(&self) -> &[i64] {
        &self.basis
    }

    pub fn is_real(&self) -> bool {
        self.radicands.iter().all(|&r| r > 0)
    }

    pub fn mask_of(&self, radicand: i64) -> Result<usize> {
        self.basis
            .iter()
            .position(|&b| b == radicand)
            .ok_or(Error::NotInBasis { radicand })
    }

    pub(crate) fn factor(&self, mask: usize) -> &BigInt {
        &self.factors[mask]
    }

    /// All automorphisms, identity first.
    pub fn galois_group(&self) -> Vec<GaloisElement> {
        (0..self.degree() as u8).map(GaloisElement).collect()
    }

    /// The automorphism negating exactly the `k`-th generator.
    pub fn sigma(&self, k: usize) -> GaloisElement {
        assert!(k < self.generator_count(), "generator index out of range");
        GaloisElement(1 << k)
    }

    pub fn same_as(&self, other: &MQField) -> bool {
        std::ptr::eq(self, other) || self.radicands == other.radicands
    }
}

impl fmt::Display for MQField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.radicands.iter().map(|r| format!("√{r}")).collect();
        write!(f, "Q({})", parts.join(", "))
    }
}

/// An automorphism, as the set of generators whose square roots it negates.
/// Composition is XOR of the masks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GaloisElement(pub u8);

impl GaloisElement {
    pub const IDENTITY: GaloisElement = GaloisElement(0);

    pub fn compose(self, other: GaloisElement) -> GaloisElement {
        GaloisElement(self.0 ^ other.0)
    }

    /// Sign by which this automorphism multiplies the basis element of
    /// `mask`.
    pub fn sign_on(self, mask: usize) -> i8 {
        if (mask & self.0 as usize).count_ones() % 2 == 1 {
            -1
        } else {
            1
        }
    }
}

impl fmt::Display for GaloisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return f.write_str("1");
        }
        let parts: Vec<String> = (0..8)
            .filter(|k| self.0 >> k & 1 == 1)
            .map(|k| format!("σ{}", k + 1))
            .collect();
        f.write_str(&parts.join(""))
    }
}

/// A subgroup of the Galois group, kept with an F₂-basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subgroup {
    elements: Vec<GaloisElement>,
    basis: Vec<GaloisElement>,
}

impl Subgroup {
    pub fn generated_by(generators: &[GaloisElement]) -> Subgroup {
        let mut elements = vec![GaloisElement::IDENTITY];
        let mut basis = Vec::new();
        for &g in generators {
            if elements.contains(&g) {
                continue;
            }
            basis.push(g);
            let extra: Vec<GaloisElement> = elements.iter().map(|e| e.compose(g)).collect();
            elements.extend(extra);
        }
        elements.sort_unstable();
        Subgroup { elements, basis }
    }

    pub fn trivial() -> Subgroup {
        Subgroup::generated_by(&[])
    }

    pub fn elements(&self) -> &[GaloisElement] {
        &self.elements
    }

    pub fn basis(&self) -> &[GaloisElement] {
        &self.basis
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: GaloisElement) -> bool {
        self.elements.contains(&g)
    }

    /// Masks of the basis elements fixed by every member.
    pub fn fixed_masks(&self, degree: usize) -> Vec<usize> {
        (0..degree)
            .filter(|&m| self.elements.iter().all(|g| g.sign_on(m) == 1))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_of_triple_field() {
        let f = MQField::new(&[2, 35, 15]).unwrap();
        assert_eq!(f.basis(), &[1, 2, 35, 70, 15, 30, 21, 42]);
        assert_eq!(f.factor(6), &BigInt::from(5));
        assert_eq!(f.mask_of(21).unwrap(), 6);
        assert_eq!(f.mask_of(5), Err(Error::NotInBasis { radicand: 5 }));
    }

    #[test]
    fn negative_radicands() {
        let f = MQField::new(&[-1, -3, 2]).unwrap();
        // √-1·√-3 = -√3
        assert_eq!(f.basis()[3], 3);
        assert_eq!(f.factor(3), &BigInt::from(-1));
        assert!(!f.is_real());
    }

    #[test]
    fn dependent_radicands_rejected() {
        assert!(MQField::new(&[2, 3, 6]).is_err());
        assert!(MQField::new(&[2, 2]).is_err());
        assert!(MQField::new(&[4]).is_err());
        assert!(MQField::new(&[2, 3, 5, 7, 11]).is_err());
    }

    #[test]
    fn subgroups() {
        let h = Subgroup::generated_by(&[GaloisElement(2), GaloisElement(4), GaloisElement(6)]);
        assert_eq!(h.order(), 4);
        assert_eq!(h.basis().len(), 2);
        assert_eq!(h.fixed_masks(8), vec![0, 1]);
        assert_eq!(GaloisElement(6).to_string(), "σ2σ3");
    }
}
