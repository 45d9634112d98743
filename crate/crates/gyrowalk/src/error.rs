use thiserror::Error;

/// Errors shared across the geometry, walk, and analysis layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("point lies outside the closed unit disk (|z| = {modulus})")]
    OutsideDisk { modulus: f64 },

    #[error("operation requires an interior point of the disk")]
    BoundaryPoint,

    #[error("expected a unit-modulus complex number, got |w| = {modulus}")]
    NotUnitModulus { modulus: f64 },

    #[error("point coincides with a pole of the coordinate system")]
    PoleSingularity,

    #[error("orbit circle is degenerate: the point lies on the diameter through the poles")]
    DegenerateCircle,

    #[error("|tau| = {tau} exceeds the overflow guard; use the saturating conversion instead")]
    TauOverflow { tau: f64 },

    #[error("parameter x must lie in (-1, 1), got {x}")]
    XOutOfRange { x: f64 },

    #[error("group elements belong to different pole systems")]
    PoleMismatch,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("ensemble aborted after {completed} of {requested} trajectories: {reason}")]
    ResourceExhausted {
        completed: u64,
        requested: u64,
        reason: String,
    },

    #[error("quadrature failed to converge (estimated error {err:.3e})")]
    QuadratureDiverged { err: f64 },

    #[error("io error after writing {written} records")]
    Io {
        written: usize,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
