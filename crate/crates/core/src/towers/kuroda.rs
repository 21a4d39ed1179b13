use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Data for Kuroda's class number formula on a multiquadratic field of
/// degree `2ⁿ`, restricted to 2-parts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KurodaInput {
    pub n: u32,
    pub is_real: bool,
    #[serde(with = "crate::exactnum::decimal")]
    pub q_index: BigInt,
    /// `h₂` of the `2ⁿ − 1` quadratic subfields.
    #[serde(with = "crate::exactnum::decimal::vec")]
    pub subfield_h2: Vec<BigInt>,
}

fn is_power_of_two(x: &BigInt) -> bool {
    x > &BigInt::zero() && (x & (x - 1u32)).is_zero()
}

/// The exponent `v` in `h = q·∏hᵢ / 2^v`.
pub fn kuroda_exponent(n: u32, is_real: bool) -> Result<u32> {
    if n < 1 {
        return Err(Error::InvalidInput("tower rank must be at least 1".into()));
    }
    Ok(if is_real {
        n * ((1 << (n - 1)) - 1)
    } else if n == 1 {
        0
    } else {
        (n - 1) * ((1 << (n - 2)) - 1) + (1 << (n - 1)) - 1
    })
}

impl KurodaInput {
    pub fn new(n: u32, is_real: bool, q_index: BigInt, subfield_h2: Vec<BigInt>) -> Result<Self> {
        let input = KurodaInput { n, is_real, q_index, subfield_h2 };
        input.validate()?;
        Ok(input)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 || self.n > 8 {
            return Err(Error::InvalidInput(format!("tower rank {} out of range", self.n)));
        }
        let want = (1usize << self.n) - 1;
        if self.subfield_h2.len() != want {
            return Err(Error::InvalidInput(format!(
                "need {want} subfield class numbers, got {}",
                self.subfield_h2.len()
            )));
        }
        for x in std::iter::once(&self.q_index).chain(&self.subfield_h2) {
            if !is_power_of_two(x) {
                return Err(Error::InvalidInput(format!("{x} is not a power of 2")));
            }
        }
        Ok(())
    }

    /// `v` for this input.
    pub fn v(&self) -> u32 {
        kuroda_exponent(self.n, self.is_real).unwrap_or(0)
    }
}

/// `q · ∏ h₂(kᵢ) / 2^v`; errors when that is not an integer.
pub fn kuroda_h2(input: &KurodaInput) -> Result<BigInt> {
    input.validate()?;
    let numerator = input.subfield_h2.iter().fold(input.q_index.clone(), |acc, h| acc * h);
    let denominator = BigInt::one() << input.v();
    let (quot, rem) = numerator.div_rem(&denominator);
    if !rem.is_zero() {
        return Err(Error::Inconsistent(format!(
            "Kuroda formula gives {numerator}/{denominator}, not an integer"
        )));
    }
    Ok(quot)
}
