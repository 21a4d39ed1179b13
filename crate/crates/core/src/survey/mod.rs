//! Prime-triple search and verification campaigns.

mod claims;
mod lemmas;
mod report;
mod search;
mod triple;

pub use claims::{
    cm_branches, evaluate, exponents, norm_claims, stated_h2, stated_index_log2, stated_system,
    NormClaim, Term, UnitExpr, COLUMNS,
};
pub use lemmas::{sample_pairs, verify_lemma, LemmaSummary, LemmaWitness, PotentialCounterexample, SkippedSample};
pub use report::{
    verify_triple, Check, DecompositionOutcome, H2Entry, NormCell, SeedReport, TripleReport,
};
pub use search::{find_triples, TripleSearch};
pub use triple::{classify_triple, triple_symbols, Case, TripleField, SEED_NAMES};
