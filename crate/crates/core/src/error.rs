use alloc::string::String;

/// Errors raised by the sequence lab.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("weight evaluates to zero at t = {t}")]
    ZeroWeight { t: f64 },

    #[error("input is not nonincreasing at index {index}")]
    NotSorted { index: usize },

    #[error("negative entry at index {index}")]
    NegativeEntry { index: usize },

    #[error("prefix has {len} entries but {needed} are required")]
    PrefixTooShort { len: usize, needed: usize },

    #[error("insufficient prefix: unseen values may reach {bound:e}, above the {rank}-th value {value:e}")]
    InsufficientPrefix { rank: usize, bound: f64, value: f64 },

    #[error("tail bound {achieved:e} exceeds the requested {requested:e}")]
    TailBoundFailure { achieved: f64, requested: f64 },

    #[error("insufficient blocks: {needed} dyadic blocks needed, {available} available")]
    InsufficientBlocks { needed: u64, available: u64 },

    #[error("interval midpoint {midpoint} and extrapolated value {extrapolated} disagree beyond {limit}")]
    InconsistentEstimates { midpoint: f64, extrapolated: f64, limit: f64 },

    #[error("growth bound violated at n = {n}: |x_n| / n^(alpha-1) = {ratio}")]
    GrowthBoundViolated { n: u64, ratio: f64 },

    #[error("Re(s) = {re} is not above the abscissa of convergence {abscissa}")]
    AbscissaViolation { re: f64, abscissa: f64 },

    #[error("dimension {n} is not supported (need n >= 2)")]
    UnsupportedDimension { n: u32 },

    #[error("matrix is not symmetric (max deviation {deviation:e})")]
    NotSymmetric { deviation: f64 },

    #[error("sequence kind mismatch: {0}")]
    KindMismatch(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
