use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid spin: 2j = {0} (must be in 1..={max})", max = crate::dicke::MAX_TWO_J)]
    InvalidSpin(i64),
    #[error("magnetic quantum number 2m = {two_m} out of range for 2j = {two_j}")]
    MOutOfRange { two_j: u32, two_m: i32 },
    #[error("vector length {len} does not match Dicke dimension {dim}")]
    DimensionMismatch { len: usize, dim: usize },
    #[error("invalid angle {name} = {value}")]
    InvalidAngle { name: &'static str, value: f64 },
    #[error(
        "degenerate cat state: squared norm {norm_sq:e} of the superposition is below the floor"
    )]
    DegenerateCat { norm_sq: f64 },
    #[error("finite-difference step {0:e} outside the stable window [1e-5, 1e-2]")]
    StepSizeOutOfRange(f64),
    #[error("parameters violate the {family} constraint: {detail}")]
    ConstraintViolation {
        family: &'static str,
        detail: String,
    },
    #[error("invalid scan specification: {0}")]
    InvalidSpec(String),
    #[error("no Heisenberg-limited point found within relative tolerance {tolerance:e}")]
    NoHlFound { tolerance: f64 },
}
