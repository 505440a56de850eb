//! Exact multiplicities of irreducible symmetric-group characters in the
//! `q`-th root number function `r_q(π) = #{σ ∈ S_n : σ^q = π}`.
//!
//! Three independent routes are provided: a class sum over `S_n`
//! ([`multiplicity::MultiplicityEngine::brute`]), a closed form in cycle-count
//! moments that never touches `S_n` ([`multiplicity::MultiplicityEngine::closed_form`]),
//! and the large-`q` main term with its error scale
//! ([`multiplicity::multiplicity_asymptotic`]).

pub mod character;
pub mod cycles;
pub mod error;
pub mod multiplicity;
pub mod number_theory;
pub mod oracle;
pub mod partition;
pub mod sampler;
pub mod verify;

pub use error::{Error, Result};
pub use number_theory::ExactScalar;
pub use partition::Partition;
