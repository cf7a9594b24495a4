//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrimeP(u64),
    #[error("modulus is reducible or has wrong shape")]
    ReducibleModulus,
    #[error("budget exceeded for {what}: needs {needed}, budget {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: u128,
    },
    #[error("{h} does not divide the extension degree {n}")]
    BadSubfield { h: u32, n: u32 },
    #[error("scalar must be nonzero")]
    ZeroScalar,
    #[error("subspace meets the vertical line <(0,1)>, not a graph")]
    NotAGraph,
    #[error("subspace has rank {got}, expected {expected}")]
    WrongRank { expected: u32, got: u32 },
    #[error("maximum field of linearity is F_q^{d}, expected F_q")]
    MaxFieldTooLarge { d: u32 },
    #[error("linear set contains the point at infinity; normalize first")]
    PointAtInfinity,
    #[error("operation requires n = {expected}, field has n = {got}")]
    WrongN { expected: u32, got: u32 },
    #[error("polynomial is a scalar multiple of x, code degenerates")]
    DegeneratePoly,
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("projection center meets the canonical subgeometry")]
    CenterMeetsSubgeometry,
    #[error("projection center meets the axis")]
    CenterMeetsAxis,
    #[error("point must lie outside the plane of the Redei line")]
    BadAffinePoint,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
