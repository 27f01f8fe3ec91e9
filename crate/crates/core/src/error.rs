use thiserror::Error;

/// Errors raised by the topology-control library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("instance must contain at least one point")]
    EmptyInstance,
    #[error("dimension must be positive")]
    ZeroDimension,
    #[error("expected {expected} coordinates, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("coordinate {value} of point {index} is not finite")]
    NonFiniteCoordinate { index: usize, value: f64 },
    #[error("sensor index {index} out of range for {n} sensors")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("r_min is undefined for singleton")]
    Singleton,
    #[error("empty candidate set")]
    EmptyCandidates,
    #[error("radius {value} of sensor {index} must be finite and nonnegative")]
    InvalidRadius { index: usize, value: f64 },
    #[error("assignment has {found} radii but the instance has {expected} sensors")]
    LengthMismatch { expected: usize, found: usize },
    #[error("grid cell side must be positive and finite, got {0}")]
    InvalidCellSide(f64),
    #[error("mode requires dimension {required} ({mode})")]
    ModeDimension { mode: &'static str, required: usize },
    #[error("sampled mode requires a seed")]
    MissingSeed,
    #[error("nearest-neighbor graph needs at least 2 active sensors, got {0}")]
    TooFewActive(usize),
    #[error("radius below connectivity threshold ({radius} < r_min = {r_min})")]
    RadiusBelowThreshold { radius: f64, r_min: f64 },
    #[error("input assignment not valid")]
    InvalidInputAssignment,
    #[error("k too large (k = {k}, maximum {max})")]
    KTooLarge { k: u32, max: u32 },
    #[error("instance too large for exhaustive search (n = {n}, maximum {max})")]
    InstanceTooLarge { n: usize, max: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
