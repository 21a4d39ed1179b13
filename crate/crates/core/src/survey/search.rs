use serde::Serialize;

use super::triple::Case;
use crate::error::{Error, Result};
use crate::exactnum::{jacobi_i64, primes_below};

/// Result of a triple search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TripleSearch {
    pub case: Case,
    pub max_prime: u64,
    pub count: usize,
    pub triples: Vec<(u64, u64, u64)>,
    /// Fewer than `count` triples exist below `max_prime`.
    pub shortfall: bool,
}

/// The `count` lexicographically smallest `(p, q, s)` with all primes
/// `< max_prime`, `p ≡ 5`, `q ≡ 7`, `s ≡ 3 (mod 8)` and
/// `(p/q) = (p/s) = (s/q)` equal to `+1` (case 1) or `−1` (case 2).
pub fn find_triples(case: Case, max_prime: u64, count: usize) -> Result<TripleSearch> {
    if count == 0 {
        return Err(Error::InvalidInput("count must be at least 1".into()));
    }
    if max_prime < 3 {
        return Err(Error::InvalidInput("max prime must be at least 3".into()));
    }
    let primes = primes_below(max_prime);
    let class = |r: u64| primes.iter().copied().filter(move |x| x % 8 == r);
    let want = case.symbol();
    let mut triples = Vec::new();
    'search: for p in class(5) {
        for q in class(7) {
            if jacobi_i64(p as i64, q)? != want {
                continue;
            }
            for s in class(3) {
                if jacobi_i64(p as i64, s)? == want && jacobi_i64(s as i64, q)? == want {
                    triples.push((p, q, s));
                    if triples.len() == count {
                        break 'search;
                    }
                }
            }
        }
    }
    Ok(TripleSearch { case, max_prime, count, shortfall: triples.len() < count, triples })
}
