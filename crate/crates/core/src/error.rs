use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// A function was evaluated at one of its poles.
    #[error("singular point at x = {0}")]
    Singular(f64),

    #[error("non-finite state at grid index {index}")]
    Overflow { index: usize },

    #[error("no sign change and no interior minimum on [{lo}, {hi}]")]
    Bracket { lo: f64, hi: f64 },

    /// ℘ with D < 0 has complex-conjugate periods; its potentials are not evaluated.
    #[error("unsupported regime: discriminant D = {discriminant:e} < 0")]
    UnsupportedRegime { discriminant: f64 },

    #[error("solver failure: {0}")]
    Solver(String),
}
