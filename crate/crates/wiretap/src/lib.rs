//! Wiretap coset coding over space-time code lattices.
//!
//! A wiretap code nests a coarse lattice inside the real lattice spanned by a
//! space-time code; messages live in the quotient, and the encoder hides each
//! one behind a random coarse point. Eve's side is scored through computable
//! proxies: the truncated ECDP bound, the first coding gain, and the expected
//! flatness factor of the faded coarse lattice. A comparison driver ranks
//! candidate sublattices by those proxies.
//!
//! Conventions: squared norms throughout, complex Gaussians carry the stated
//! variance in each real component, and all channel draws are deterministic
//! in a `(seed, draw index)` pair.

pub mod code;
pub mod compare;
pub mod ecdp;
pub mod error;
pub mod flatness;

pub use code::{
    coset_encode, decode_message, real_fading_matrix, un_iota, Encoded, Randomness, WiretapCode,
};
pub use compare::{
    wr_sublattice_compare, CompareConfig, RejectedCandidate, WrCompareReport, WrCompareRow,
};
pub use ecdp::{ecdp_bound, first_coding_gain, EcdpReport};
pub use error::{Result, WiretapError};
pub use flatness::{expected_flatness, faded_coarse_lattice, FlatnessStats};
