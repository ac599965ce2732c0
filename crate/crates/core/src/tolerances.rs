//! Validation tolerances shared by the verification suite, the CLI and the
//! tests. All are absolute unless stated otherwise.

/// Skew-Hermitian defect accepted for algebra elements.
pub const SKEW_HERMITIAN_TOL: f64 = 1e-12;
/// Relative residual above which an element is not in `g`.
pub const SPAN_RESIDUAL_TOL: f64 = 1e-10;
/// Jacobi identity on basis triples.
pub const JACOBI_TOL: f64 = 1e-10;
/// `h`-component of `[h, p]`.
pub const REDUCTIVITY_TOL: f64 = 1e-12;

/// `J² + Id`, `JᵀΩJ − Ω`, orthonormality of the Z-frame.
pub const STRUCTURE_TOL: f64 = 1e-12;
/// Commutation of `I(a, c)` with `ad h`.
pub const AD_INVARIANCE_TOL: f64 = 1e-10;
/// Symmetry of `ω(·, I·)` and agreement with the block formulas.
pub const METRIC_BLOCK_TOL: f64 = 1e-14;

/// Connection tensor: symmetry.
pub const U_SYMMETRY_TOL: f64 = 1e-12;
/// Connection tensor: defining identity, closed form vs solve, torsion and
/// metric compatibility.
pub const CONNECTION_TOL: f64 = 1e-10;

/// Curvature operator entries and curvature symmetries.
pub const CURVATURE_TOL: f64 = 1e-10;
/// Ricci routes, Ricci eigenvalues and scalar curvature.
pub const RICCI_TOL: f64 = 1e-9;
/// Plücker relations for decomposability.
pub const PLUCKER_TOL: f64 = 1e-10;
/// Accepted deviation of a bivector norm from 1.
pub const UNIT_NORM_TOL: f64 = 1e-10;

/// Containment of numeric sectional extremes in closed-form bounds.
pub const CONTAINMENT_TOL: f64 = 1e-6;
/// Mismatch between adjacent bound branches on a region boundary.
pub const BRANCH_CONTINUITY_TOL: f64 = 1e-9;
