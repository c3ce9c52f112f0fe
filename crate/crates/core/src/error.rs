use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid rank {rank} for family {family}: {reason}")]
    InvalidRank {
        family: &'static str,
        rank: usize,
        reason: String,
    },

    #[error("Weyl group order {order} exceeds enumeration cap {cap}")]
    WeylCapExceeded { order: u128, cap: u128 },

    #[error("weight {0:?} is not dominant")]
    NonDominant(Vec<i64>),

    #[error("dimension {dim} exceeds bound {bound}")]
    DimensionBound { dim: u128, bound: u128 },

    #[error("quadrature bandwidth insufficient: need nodes_per_dim >= {needed}, have {have}")]
    Bandwidth { needed: usize, have: usize },

    #[error("rejection envelope violated: density {density} > envelope {envelope}; grid too coarse")]
    EnvelopeViolation { density: f64, envelope: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
