//! Exact computation of unit groups, unit indices and 2-class numbers of the
//! real multiquadratic fields `Q(√2, √pq, √ps)` and their CM extensions
//! `Q(√2, √pq, √ps, √-ℓ)`.
//!
//! The crate is layered bottom-up:
//!
//! - [`exactnum`]: integer/rational kernels and residue symbols,
//! - [`quadfield`]: quadratic fundamental units, class numbers, unit
//!   decompositions,
//! - [`mqfield`]: multiquadratic arithmetic, Galois action, relative norms,
//!   square roots and unit saturation,
//! - [`towers`]: Kuroda's class number formula and the CM unit criteria,
//! - [`survey`]: triple search and per-triple verification campaigns,
//! - [`cli`]: the command-line front end.

pub mod cli;
pub mod error;
pub mod exactnum;
pub mod mqfield;
pub mod quadfield;
pub mod survey;
pub mod towers;

pub use error::{Error, Result};
