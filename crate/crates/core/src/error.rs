use alloc::string::String;

/// Errors reported by the numerical core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("noise variance must be positive and finite, got {0}")]
    InvalidNoiseVariance(f64),
    #[error("input is NaN")]
    NotANumber,
    #[error("invalid constellation: {0}")]
    InvalidConstellation(String),
    #[error("symbol {index} (amplitude {amplitude}) has an empty MAP decision region")]
    DominatedSymbol { index: usize, amplitude: f64 },
    #[error("symbol index {index} out of range for a constellation of order {order}")]
    SymbolOutOfRange { index: usize, order: usize },
    #[error("bit position {position} out of range for {bits_per_symbol} bits per symbol")]
    BitPositionOutOfRange { position: usize, bits_per_symbol: usize },
    #[error("constellation has no bit labels")]
    NoBitLabels,
    #[error("probability {0} outside the open interval (0, 1)")]
    ProbabilityOutOfRange(f64),
    #[error("soft metric {0} outside [0, 1]")]
    MetricOutOfRange(f64),
    #[error("tail saturation: metric {n} in region {index} maps to an infinite channel output")]
    TailSaturation { index: usize, n: f64 },
    #[error("invalid monotonicity configuration: {0}")]
    InvalidConfig(String),
    #[error("quadrature did not converge: estimate {estimate}, error {error}")]
    QuadratureNotConverged { estimate: f64, error: f64 },
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("invalid parity-check matrix: {0}")]
    InvalidCode(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
