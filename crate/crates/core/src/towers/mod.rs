//! Class numbers via Kuroda's formula, unit groups of CM extensions
//! `K(√−ℓ)`, and the explicit checks behind the 2-rank bound.

mod cm;
mod kuroda;
mod rank;

pub use cm::{cm_unit_group, same_class_mod_squares, CMBranch, CMHit, CMResult};
pub use kuroda::{kuroda_exponent, kuroda_h2, KurodaInput};
pub use rank::{rank_bound_check, RankCheck};
