//! Reverse reconciliation softening for discretely modulated links.
//!
//! Bob, the receiver, takes MAP decisions on PAM symbols received over an
//! AWGN channel and publishes a soft metric `n ∈ [0, 1]` for every symbol.
//! The metric is built piecewise from the channel-output CDF so that its
//! distribution does not depend on the decision; an eavesdropper learns
//! nothing about Bob's symbols from it. Alice, who knows what she sent, turns
//! the metric into per-bit log a-posteriori probability ratios and runs a
//! syndrome-aware belief-propagation decoder to recover Bob's bits.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only the numerical
//! pieces:
//!
//! - [`constellation`]: PAM alphabets, priors, Gray labels and MAP regions.
//! - [`channel`]: the Gaussian-mixture channel output (density, CDF, quantile).
//! - [`softening`]: the piecewise softening transform and its inverse.
//! - [`metrics`]: Alice-side joint densities, posteriors and bit LAPPRs.
//! - [`infotheory`]: mutual information of the direct, hard and softened
//!   channels and the leakage of the disclosed metric.
//! - [`ldpc`]: sparse parity-check codes, the DVB-S2 rate 1/2 code and the
//!   syndrome belief-propagation decoder.
//!
//! File formats, experiment orchestration and the command line live in the
//! companion `rrs` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod channel;
pub mod constellation;
pub mod error;
pub mod infotheory;
pub mod ldpc;
pub mod math;
pub mod metrics;
pub mod quadrature;
pub mod softening;

pub use channel::ChannelModel;
pub use constellation::{Constellation, DecisionRegions};
pub use error::{Error, Result};
pub use infotheory::{MiValue, QuadratureOptions};
pub use ldpc::{BpDecoder, DecodeOutcome, LdpcCode, Syndrome};
pub use metrics::{LapprVector, LAPPR_CLAMP, PRESET_ALPHA};
pub use softening::{Monotonicity, MonotonicityConfig, SoftMetric, SofteningTransform};
