//! Invariant Hermitian geometry of `S^{2n+1} × S^{2p+1} = U(n+1)/U(n) × U(p+1)/U(p)`.
//!
//! Everything is computed at the identity coset: tangent vectors are
//! coefficient vectors over the frame `X¹, Y¹₁..Y¹₂ₙ, X², Y²₁..Y²₂ₚ` of the
//! reductive complement `p`, and the geometry is fixed by the two-parameter
//! family of complex structures `I(a, c)`, the invariant 2-form `ω` and the
//! associated metrics `g(a, c) = ω(·, I ·)`.
//!
//! Closed-form quantities (connection tensor, curvature-operator entries,
//! Ricci and scalar curvature, sectional-curvature bounds) are paired with
//! brute-force routes built from matrix commutators so that each can be
//! checked against the other.

pub mod connection;
pub mod curvature;
mod error;
pub mod extremes;
pub mod hermitian;
pub mod lie_algebra;
mod space;
pub mod tolerances;
pub mod verify;

pub use error::{Error, Result};
pub use hermitian::StructureParams;
pub use lie_algebra::BasisLayout;
pub use space::HermitianSpace;
