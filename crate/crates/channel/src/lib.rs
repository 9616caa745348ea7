//! Rayleigh-fading MIMO simulation: channel draws, sphere-decoder ML
//! detection, amplify-and-forward virtual channels, and Monte Carlo
//! codeword-error reports.
//!
//! Conventions used throughout: complex Gaussians carry the stated variance
//! in each of their real and imaginary parts, so E|h|^2 = 2 sigma_h2; SNR is
//! ρ = P/σ_n² with P the average codeword power of the finite code; every
//! randomized routine draws from an explicit (seed, stream) ChaCha pair, so
//! results are independent of scheduling.

pub mod af;
pub mod decode;
pub mod error;
pub mod mimo;
pub mod rng;
pub mod sim;

pub use af::{
    af_codeword, af_decode, af_virtual_channel, scaled_identity_amplifier, transmit_af,
    whiten_received, whitened_real_system, AFPowerSplit, AFRelayFrame, AFRelayPath,
    VirtualAFChannel,
};
pub use decode::{sphere_decode, sphere_decode_system};
pub use error::{ChannelError, Result};
pub use mimo::{sample_channel, transmit, ChannelRealization};
pub use rng::{complex_gaussian, stream_rng};
pub use sim::{
    average_codeword_power, monte_carlo_cwer, wilson_interval, SimRow, SimulationReport,
    SIM_SIGMA_H2,
};
