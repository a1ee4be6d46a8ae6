use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("conjugate of identically +inf")]
    IdenticallyInfinite,

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("dual points must be sorted in increasing order")]
    UnsortedDuals,

    #[error("unsupported dimension {0} (supported: 1 to 3)")]
    UnsupportedDimension(usize),

    #[error("exp overflow at coordinate {coordinate} (t = {value})")]
    ExpOverflow { coordinate: usize, value: f64 },

    #[error("supremum not localized after {0} doublings")]
    NotLocalized(u32),

    #[error("profile is not monotone: value decreases near t = {0}")]
    NonMonotoneProfile(f64),

    #[error("quadrature order {0} is below the accuracy floor of 8")]
    QuadratureOrder(usize),

    #[error("tail bound {bound:e} exceeds tolerance {tolerance:e}: increase truncation radius")]
    TailTooLarge { bound: f64, tolerance: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown quantity `{requested}`; available: {available:?}")]
    UnknownQuantity {
        requested: String,
        available: Vec<String>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
