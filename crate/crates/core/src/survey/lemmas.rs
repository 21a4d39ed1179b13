use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{is_squarefree, primes_below};
use crate::quadfield::{
    check_lemma_3_3, check_pair_hypotheses, classify_decomposition, fundamental_unit, Lemma33Report,
    LemmaDecomposition, LemmaId,
};

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum LemmaWitness {
    Pair(LemmaDecomposition),
    Radicand(Lemma33Report),
}

/// A sample on which the lemma's statement could not be confirmed.
#[derive(Debug, Clone, Serialize)]
pub struct PotentialCounterexample {
    pub first: u64,
    pub second: Option<u64>,
    pub error: String,
    /// Full data, when the classifier got far enough to produce it.
    pub witness: Option<LemmaWitness>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SkippedSample {
    pub first: u64,
    pub second: Option<u64>,
    pub reason: String,
}

/// Outcome of a lemma campaign.
#[derive(Debug, Clone, Serialize)]
pub struct LemmaSummary {
    pub lemma_id: LemmaId,
    pub samples_requested: usize,
    pub max_prime: u64,
    pub tested: usize,
    pub witnesses: Vec<LemmaWitness>,
    pub skipped: Vec<SkippedSample>,
    pub counterexamples: Vec<PotentialCounterexample>,
    /// Fewer than `samples_requested` conforming samples below the bound.
    pub shortfall: bool,
    pub passed: bool,
}

/// All conforming prime pairs below `max_prime`, ordered by product then by
/// first prime.
pub fn sample_pairs(lemma: LemmaId, max_prime: u64) -> Result<Vec<(u64, u64)>> {
    let (r1, r2, _) = lemma
        .pair_hypotheses()
        .ok_or_else(|| Error::InvalidInput("lemma 3.3 samples radicands, not pairs".into()))?;
    let primes = primes_below(max_prime);
    let mut pairs: Vec<(u64, u64)> = primes
        .iter()
        .filter(|&&a| a % 8 == r1)
        .flat_map(|&a| primes.iter().filter(move |&&b| b % 8 == r2).map(move |&b| (a, b)))
        .filter(|&(a, b)| check_pair_hypotheses(a, b, lemma).is_ok())
        .collect();
    pairs.sort_by_key(|&(a, b)| (a * b, a));
    Ok(pairs)
}

/// Classifies conforming samples until `samples` of them have been tested
/// (half-integral units are skipped and do not count) and collects every
/// witness and every potential counterexample.
pub fn verify_lemma(lemma: LemmaId, samples: usize, max_prime: u64) -> Result<LemmaSummary> {
    if samples == 0 {
        return Err(Error::InvalidInput("sample count must be at least 1".into()));
    }
    if max_prime < 3 {
        return Err(Error::InvalidInput("max prime must be at least 3".into()));
    }
    let mut summary = LemmaSummary {
        lemma_id: lemma,
        samples_requested: samples,
        max_prime,
        tested: 0,
        witnesses: Vec::new(),
        skipped: Vec::new(),
        counterexamples: Vec::new(),
        shortfall: false,
        passed: false,
    };
    if lemma == LemmaId::L3_3 {
        for d in 2..max_prime as i64 {
            if summary.tested == samples {
                break;
            }
            if !is_squarefree(d) || fundamental_unit(d)?.norm != 1 {
                continue;
            }
            let r = check_lemma_3_3(d)?;
            summary.tested += 1;
            if !r.holds {
                summary.counterexamples.push(PotentialCounterexample {
                    first: d as u64,
                    second: None,
                    error: "an excluded quantity is a square".into(),
                    witness: Some(LemmaWitness::Radicand(r.clone())),
                });
            }
            summary.witnesses.push(LemmaWitness::Radicand(r));
        }
    } else {
        for (a, b) in sample_pairs(lemma, max_prime)? {
            if summary.tested == samples {
                break;
            }
            match classify_decomposition(a, b, lemma) {
                Ok(r) => {
                    summary.tested += 1;
                    if !r.holds() {
                        summary.counterexamples.push(PotentialCounterexample {
                            first: a,
                            second: Some(b),
                            error: "a system other than the stated one holds".into(),
                            witness: Some(LemmaWitness::Pair(r.clone())),
                        });
                    }
                    summary.witnesses.push(LemmaWitness::Pair(r));
                }
                Err(e @ (Error::HalfIntegralUnit(_) | Error::SizeLimit { .. })) => {
                    summary.skipped.push(SkippedSample { first: a, second: Some(b), reason: e.to_string() });
                }
                Err(e) if e.is_assertion_failure() => {
                    summary.tested += 1;
                    summary.counterexamples.push(PotentialCounterexample {
                        first: a,
                        second: Some(b),
                        error: e.to_string(),
                        witness: None,
                    });
                }
                Err(e) => return Err(e),
            }
        }
    }
    summary.shortfall = summary.tested < samples;
    summary.passed = summary.counterexamples.is_empty() && summary.tested > 0;
    Ok(summary)
}
