//! Compute-and-forward over real-valued channels: computation rates, integer
//! coefficient selection, relay decoding against nested lattice codes, and
//! destination-side recovery of the individual sources.
//!
//! Channels are real throughout; complex networks map into this crate after
//! a real decomposition. SNR is linear (`rho = P / sigma_n2` with `P` the
//! per-dimension codeword power), and Monte Carlo runs follow the
//! `(seed, stream)` convention of the channel crate.

pub mod error;
pub mod rate;
pub mod scenario;
pub mod sim;
pub mod solve;

pub use error::{CfError, Result};
pub use rate::{
    alpha_rate, best_coefficients, candidate_set_choice, computation_rate, optimal_alpha,
    CoefficientChoice, Strategy,
};
pub use scenario::{
    relay_decode_ml, relay_decode_sd, CFScenario, MLCandidate, MLDecode, RelayDecode,
    ML_DEFAULT_CAP,
};
pub use sim::{singularity_probability, RelayStrategy};
pub use solve::{destination_solve, SolveOutcome};
