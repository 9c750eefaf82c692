use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("modulus {0} is not irreducible over F_p")]
    Reducible(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precision exhausted: {0}")]
    Precision(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("tower stub too shallow: {0}")]
    Depth(String),
    #[error("window too small: {0}")]
    Window(String),
    #[error("reduction did not settle within {0} steps")]
    CycleLimit(usize),
    #[error("reduction stalled: {0}")]
    Stalled(String),
}

pub type Result<T> = std::result::Result<T, Error>;
