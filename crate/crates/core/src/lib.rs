//! F_q-linear sets of rank n on the projective line PG(1,q^n).
//!
//! The crate builds the finite-field tower F_p <= F_q <= F_{q^n}, represents
//! linear sets via linearized q-polynomials and F_q-subspaces of F_{q^n}^2,
//! classifies them up to scalar and semilinear equivalence by pruned
//! exhaustive search, and realizes the companion objects: dual subspaces
//! under the symplectic trace form, rank-metric codes, Redei-type blocking
//! sets, and projections of canonical subgeometries.

pub mod arith;
pub mod classify;
pub mod error;
pub mod field;
pub mod geometry;
pub mod mrd;
pub mod projline;
pub mod qpoly;
pub mod verify;

pub use error::{Error, Result};
pub use field::{build_field, FElem, FieldCtx};
