//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library.

#![allow(dead_code)]

/// Smallest prime factor of every n < bound (0 and 1 map to themselves).
pub fn smallest_prime_factors(bound: usize) -> Vec<usize> {
    let mut spf: Vec<usize> = (0..bound).collect();
    let mut i = 2;
    while i * i < bound {
        if spf[i] == i {
            let mut j = i * i;
            while j < bound {
                if spf[j] == j {
                    spf[j] = i;
                }
                j += i;
            }
        }
        i += 1;
    }
    spf
}

pub fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let m = m as u128;
    let (mut r, mut b) = (1u128, b as u128 % m);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r as u64
}

/// `(a/p)` for an odd prime `p` by Euler's criterion.
pub fn euler_symbol(a: i64, p: u64) -> i8 {
    let r = pow_mod(a.rem_euclid(p as i64) as u64, (p - 1) / 2, p);
    match r {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// Kronecker symbol `(D/2)`.
fn kronecker_two(d: i64) -> i8 {
    if d % 2 == 0 {
        0
    } else if matches!(d.rem_euclid(8), 1 | 7) {
        1
    } else {
        -1
    }
}

/// Kronecker symbol `(D/a)` for `1 ≤ a < spf.len()`, by complete
/// multiplicativity in `a`.
pub fn kronecker_table(d: i64, n: usize, spf: &[usize]) -> Vec<i8> {
    let mut chi = vec![0i8; n];
    if n > 1 {
        chi[1] = 1;
    }
    for a in 2..n {
        let p = spf[a];
        let chi_p = if p == a {
            if p == 2 {
                kronecker_two(d)
            } else {
                euler_symbol(d, p as u64)
            }
        } else {
            chi[p]
        };
        chi[a] = if p == a { chi_p } else { chi_p * chi[a / p] };
    }
    chi
}

pub fn is_squarefree(n: i64) -> bool {
    let n = n.unsigned_abs();
    if n == 0 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= n {
        if n.is_multiple_of(k * k) {
            return false;
        }
        k += 1;
    }
    true
}

pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree(d),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m)
        }
        _ => false,
    }
}

/// `h(D)` for a fundamental discriminant `D < 0` by the character sum
/// `h = −w/(2|D|) Σ_{a=1}^{|D|} χ(a)·a`.
pub fn dirichlet_class_number(d: i64, spf: &[usize]) -> u64 {
    assert!(d < 0);
    let n = d.unsigned_abs() as usize;
    let chi = kronecker_table(d, n + 1, spf);
    let sum: i64 = (1..n).map(|a| chi[a] as i64 * a as i64).sum();
    let w = match d {
        -3 => 6,
        -4 => 4,
        _ => 2,
    };
    let h = -w * sum;
    assert!(h > 0 && h % (2 * n as i64) == 0, "character sum gives non-integral h for D = {d}");
    (h / (2 * n as i64)) as u64
}

pub fn isqrt_exact(n: u64) -> Option<u64> {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    (r * r == n).then_some(r)
}

/// Fundamental unit `(x, y, denom, norm)` of `Q(√d)` found by trying every
/// `y ≤ y_max` in the equation `x² − d y² = ±c²`, `c` the denominator;
/// `None` if the unit lies outside the window.
pub fn pell_brute(d: u64, y_max: u64) -> Option<(u64, u64, u8, i8)> {
    let c2 = if d % 4 == 1 { 4 } else { 1 };
    for y in 1..=y_max {
        let dy2 = d * y * y;
        // norm −1 before +1: for d = 5 both occur at y = 1
        if dy2 >= c2 {
            if let Some(x) = isqrt_exact(dy2 - c2) {
                return Some(normalize(x, y, c2, -1));
            }
        }
        if let Some(x) = isqrt_exact(dy2 + c2) {
            return Some(normalize(x, y, c2, 1));
        }
    }
    None
}

fn normalize(x: u64, y: u64, c2: u64, norm: i8) -> (u64, u64, u8, i8) {
    if c2 == 4 {
        if x.is_multiple_of(2) && y.is_multiple_of(2) {
            (x / 2, y / 2, 1, norm)
        } else {
            (x, y, 2, norm)
        }
    } else {
        (x, y, 1, norm)
    }
}

/// Squarefree part of a positive integer.
pub fn squarefree_part(mut n: u64) -> u64 {
    let mut out = 1;
    let mut k = 2;
    while k * k <= n {
        let mut e = 0;
        while n.is_multiple_of(k) {
            n /= k;
            e += 1;
        }
        if e % 2 == 1 {
            out *= k;
        }
        k += 1;
    }
    out * n
}
