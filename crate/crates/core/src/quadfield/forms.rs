//! Class numbers of quadratic fields by counting reduced binary quadratic
//! forms (definite case) or cycles of reduced forms (indefinite case).

use std::collections::HashMap;

use num_integer::{Integer, Roots};

use super::units::fundamental_unit;
use crate::error::{Error, Result};
use crate::exactnum::is_squarefree;

/// Whether `disc` is the discriminant of a quadratic field.
pub fn is_fundamental_discriminant(disc: i64) -> bool {
    if disc == 0 || disc == 1 {
        return false;
    }
    match disc.rem_euclid(4) {
        1 => is_squarefree(disc),
        0 => {
            let m = disc / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m)
        }
        _ => false,
    }
}

/// Discriminant of `Q(√d)` for squarefree `d ≠ 0, 1`.
pub fn field_discriminant(d: i64) -> Result<i64> {
    if d == 0 || d == 1 {
        return Err(Error::InvalidInput(format!("Q(√{d}) is not a quadratic field")));
    }
    if !is_squarefree(d) {
        return Err(Error::NotSquarefree(d.to_string()));
    }
    Ok(if d.rem_euclid(4) == 1 { d } else { 4 * d })
}

/// Squarefree kernel `d` of a fundamental discriminant.
fn radicand_of(disc: i64) -> i64 {
    if disc.rem_euclid(4) == 0 {
        disc / 4
    } else {
        disc
    }
}

/// Class number `h(D)` of the quadratic field of fundamental discriminant `D`.
///
/// For `D > 0` this is the wide class number: the number of cycles of reduced
/// indefinite forms counts narrow classes, which is halved when the
/// fundamental unit has norm `+1`.
pub fn class_number(disc: i64) -> Result<u64> {
    if !is_fundamental_discriminant(disc) {
        return Err(Error::NotFundamentalDiscriminant(disc));
    }
    if disc < 0 {
        Ok(count_definite(disc))
    } else {
        let narrow = count_cycles(disc);
        let unit = fundamental_unit(radicand_of(disc))?;
        Ok(if unit.norm == 1 { narrow / 2 } else { narrow })
    }
}

/// Largest power of two dividing the class number of `Q(√d)`.
pub fn two_class_number(d: i64) -> Result<u64> {
    let h = class_number(field_discriminant(d)?)?;
    Ok(1u64 << h.trailing_zeros())
}

/// Reduced positive definite forms `(a, b, c)`: `|b| ≤ a ≤ c`, with `b ≥ 0`
/// whenever `|b| = a` or `a = c`.
fn count_definite(disc: i64) -> u64 {
    let n = -disc;
    let mut count = 0;
    let mut a = 1i64;
    while 3 * a * a <= n {
        for b in -a + 1..=a {
            if (b - disc).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (a == c && b < 0) {
                continue;
            }
            if a.gcd(&b).gcd(&c) == 1 {
                count += 1;
            }
        }
        a += 1;
    }
    count
}

/// Reduced indefinite form: `0 < b < √D` and `√D − b < 2|a| < √D + b`,
/// tested in integers.
fn is_reduced(disc: i64, root: i64, a: i64, b: i64) -> bool {
    let two_a = 2 * a.abs();
    b > 0 && b <= root && (two_a + b) * (two_a + b) > disc && (two_a <= b || (two_a - b) * (two_a - b) < disc)
}

fn count_cycles(disc: i64) -> u64 {
    let root = disc.sqrt();
    let mut forms = Vec::new();
    for b in 1..=root {
        if (b - disc).rem_euclid(2) != 0 {
            continue;
        }
        let n = (disc - b * b) / 4;
        if n == 0 {
            continue;
        }
        let mut a = 1;
        while a * a <= n {
            if n % a == 0 {
                for x in [a, n / a] {
                    for (fa, fc) in [(x, -(n / x)), (-x, n / x)] {
                        if is_reduced(disc, root, fa, b) && fa.gcd(&b).gcd(&fc) == 1 {
                            forms.push((fa, b, fc));
                        }
                    }
                    if a * a == n {
                        break;
                    }
                }
            }
            a += 1;
        }
    }
    forms.sort_unstable();
    forms.dedup();

    let index: HashMap<(i64, i64, i64), usize> =
        forms.iter().enumerate().map(|(i, f)| (*f, i)).collect();
    let mut seen = vec![false; forms.len()];
    let mut cycles = 0;
    for start in 0..forms.len() {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            let next = rho(disc, root, forms[i]);
            i = *index
                .get(&next)
                .expect("reduction operator maps reduced forms to reduced forms");
        }
    }
    cycles
}

/// One step of the reduction operator `(a, b, c) ↦ (c, b', (b'^2 − D)/4c)`
/// with `b' ≡ −b (mod 2|c|)` and `√D − 2|c| < b' < √D`.
fn rho(disc: i64, root: i64, (_, b, c): (i64, i64, i64)) -> (i64, i64, i64) {
    let m = 2 * c.abs();
    let b2 = root - (root + b).rem_euclid(m);
    (c, b2, (b2 * b2 - disc) / (4 * c))
}
