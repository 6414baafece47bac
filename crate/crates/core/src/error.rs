//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension {0} must be a power of two and at least 2")]
    DimensionNotPowerOfTwo(usize),

    #[error("index {index} out of range for q = {q} qubits")]
    IndexOutOfRange { index: usize, q: usize },

    #[error("closed-form spectrum is only available for even q, got q = {0}")]
    OddQubitCount(usize),

    #[error("walsh angle overflowed 64-bit integer arithmetic at j = {0}")]
    AngleOverflow(usize),

    #[error("spectrum built for q = {spectrum_q} does not match parameters with d = {d}")]
    SpectrumParamsMismatch { spectrum_q: usize, d: usize },

    #[error("omega must be positive and finite, got {0}")]
    InvalidOmega(f64),

    #[error("time must be finite, got {0}")]
    InvalidTime(f64),

    #[error("gate {gate} does not fit in a circuit of width {width}")]
    GateOutOfBounds { gate: String, width: usize },

    #[error("gate {0} uses the same qubit more than once")]
    DuplicateQubit(String),

    #[error("measurements must come last in a circuit")]
    MeasurementNotTerminal,

    #[error("swap test requires an even qubit count per copy, got q = {0}")]
    OddSwapTestWidth(usize),

    #[error("circuit width {expected} does not match {found}")]
    WidthMismatch { expected: usize, found: usize },

    #[error("cannot apply a measurement gate to a statevector; strip measurements first")]
    MeasurementInUnitary,

    #[error("partial-trace cut {cut} must be half the register width {width}")]
    InvalidCut { cut: usize, width: usize },

    #[error("probability {0} is outside [0, 1]")]
    InvalidProbability(f64),

    #[error("shot count must be at least 1")]
    ZeroShots,

    #[error("initial-state coefficients invalid: {0}")]
    InvalidCoefficients(String),

    #[error("purity series invalid: {0}")]
    InvalidSeries(String),

    #[error("Simpson integration needs an even interval count, got {0}")]
    OddPartitionCount(usize),

    #[error("mode index {n} outside [{lo}, {hi}]")]
    ModeOutOfRange { n: usize, lo: usize, hi: usize },

    #[error("spectrum is missing lower bounds for n = {0}; attach bounds first")]
    MissingBound(usize),

    #[error("spectrum covers modes only up to {have}, need at least {need}")]
    SpectrumTooShort { have: usize, need: usize },
}
