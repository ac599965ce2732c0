//! Complex structures `I(a, c)`, the invariant 2-form `ω`, the associated
//! metrics `g(a, c)(X, Y) = ω(X, I(a, c) Y)` and the `g`-orthonormal frame.
//!
//! All operators are real `D × D` matrices acting on coefficient vectors over
//! the frame `X¹, Y¹₁..Y¹₂ₙ, X², Y²₁..Y²₂ₚ`; column `j` holds the image of
//! the `j`-th basis vector. Bilinear forms are matrices `B` with
//! `B(X, Y) = Xᵀ B Y`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::lie_algebra::BasisLayout;
use crate::tolerances::{METRIC_BLOCK_TOL, STRUCTURE_TOL};
use crate::{Error, Result};

/// `(n, p, a, c)`: the manifold `S^{2n+1} × S^{2p+1}` and the member of the
/// Hermitian family. `c > 0` always holds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructureParams {
    layout: BasisLayout,
    a: f64,
    c: f64,
}

impl StructureParams {
    pub fn new(n: usize, p: usize, a: f64, c: f64) -> Result<Self> {
        let layout = BasisLayout::new(n, p)?;
        if !a.is_finite() {
            return Err(Error::InvalidParams(format!("a must be finite (got {a})")));
        }
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidParams(format!(
                "c must be finite and strictly positive (got {c})"
            )));
        }
        Ok(Self { layout, a, c })
    }

    pub fn n(&self) -> usize {
        self.layout.n
    }

    pub fn p(&self) -> usize {
        self.layout.p
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn layout(&self) -> BasisLayout {
        self.layout
    }

    pub fn dim(&self) -> usize {
        self.layout.dim()
    }

    /// `a² + c²`, which recurs in every formula touching `X²`.
    pub(crate) fn q(&self) -> f64 {
        self.a * self.a + self.c * self.c
    }
}

/// Matrix of `I(a, c)`.
///
/// On the fibre directions
/// `I X¹ = (a/c) X¹ + (1/c) X²` and `I X² = −((a²+c²)/c) X¹ − (a/c) X²`;
/// on horizontal pairs `I Y₂ᵥ₋₁ = Y₂ᵥ`. The action `I Y₂ᵥ = −Y₂ᵥ₋₁` is not
/// given explicitly and follows from `I² = −Id`.
pub fn complex_structure(params: &StructureParams) -> DMatrix<f64> {
    let l = params.layout();
    let (a, c) = (params.a(), params.c());
    let mut j = DMatrix::zeros(l.dim(), l.dim());
    let (x1, x2) = (l.x1(), l.x2());
    j[(x1, x1)] = a / c;
    j[(x2, x1)] = 1.0 / c;
    j[(x1, x2)] = -params.q() / c;
    j[(x2, x2)] = -a / c;
    for (odd, even) in horizontal_pairs(l) {
        j[(even, odd)] = 1.0;
        j[(odd, even)] = -1.0;
    }
    j
}

/// Positions `(Y₂ᵥ₋₁, Y₂ᵥ)` of every horizontal pair in both factors.
pub(crate) fn horizontal_pairs(l: BasisLayout) -> impl Iterator<Item = (usize, usize)> {
    let first = (1..=l.n).map(move |v| (l.y1(2 * v - 1), l.y1(2 * v)));
    let second = (1..=l.p).map(move |v| (l.y2(2 * v - 1), l.y2(2 * v)));
    first.chain(second)
}

/// `ω = X¹∧X² + Σ Y¹₂ᵥ₋₁∧Y¹₂ᵥ + Σ Y²₂ᵥ₋₁∧Y²₂ᵥ` with `ω(X¹, X²) = +1`.
pub fn fundamental_form(layout: BasisLayout) -> DMatrix<f64> {
    let mut w = DMatrix::zeros(layout.dim(), layout.dim());
    let pairs = std::iter::once((layout.x1(), layout.x2())).chain(horizontal_pairs(layout));
    for (u, v) in pairs {
        w[(u, v)] = 1.0;
        w[(v, u)] = -1.0;
    }
    w
}

/// Outcome of testing whether `J` is positive associated with `ω`.
#[derive(Debug, Clone, PartialEq)]
pub struct PositivityReport {
    /// `max |JᵀΩJ − Ω|`.
    pub compatibility_defect: f64,
    /// Smallest eigenvalue of the symmetric part of `(X, Y) ↦ ω(X, JY)`.
    pub min_eigenvalue: f64,
}

impl PositivityReport {
    pub fn compatible(&self) -> bool {
        self.compatibility_defect <= STRUCTURE_TOL
    }

    pub fn positive(&self) -> bool {
        self.min_eigenvalue > 0.0
    }

    pub fn holds(&self) -> bool {
        self.compatible() && self.positive()
    }
}

/// Checks `ω(JX, JY) = ω(X, Y)` and `ω(X, JX) > 0` for `X ≠ 0`.
pub fn check_positive_associated(j: &DMatrix<f64>, omega: &DMatrix<f64>) -> PositivityReport {
    let compat = j.transpose() * omega * j - omega;
    let form = omega * j;
    let sym = (&form + form.transpose()) * 0.5;
    let min_eigenvalue = SymmetricEigen::new(sym).eigenvalues.min();
    PositivityReport {
        compatibility_defect: compat.amax(),
        min_eigenvalue,
    }
}

/// `g(a, c)` over the frame of `p`.
#[derive(Debug, Clone)]
pub struct MetricTensor {
    params: StructureParams,
    matrix: DMatrix<f64>,
}

/// `g(a, c)(X, Y) = ω(X, I(a, c) Y)`.
///
/// The result is required to come out symmetric; a convention mismatch
/// between `ω` and `I` is reported rather than symmetrized away.
pub fn metric(params: &StructureParams) -> Result<MetricTensor> {
    let omega = fundamental_form(params.layout());
    let matrix = omega * complex_structure(params);
    let defect = (&matrix - matrix.transpose()).amax();
    if defect > METRIC_BLOCK_TOL {
        return Err(Error::AsymmetricMetric(defect));
    }
    Ok(MetricTensor {
        params: *params,
        matrix,
    })
}

/// The block matrix for `g(a, c)` written out directly: `g₁₁` has corner
/// `1/c`, `g₂₂` has corner `(a² + c²)/c`, identities elsewhere, and the only
/// off-diagonal entry couples `X¹` and `X²` with `−a/c`.
pub fn metric_block_form(params: &StructureParams) -> DMatrix<f64> {
    let l = params.layout();
    let (a, c) = (params.a(), params.c());
    let mut g = DMatrix::identity(l.dim(), l.dim());
    g[(l.x1(), l.x1())] = 1.0 / c;
    g[(l.x2(), l.x2())] = params.q() / c;
    g[(l.x1(), l.x2())] = -a / c;
    g[(l.x2(), l.x1())] = -a / c;
    g
}

impl MetricTensor {
    pub fn params(&self) -> &StructureParams {
        &self.params
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn inner(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        (x.transpose() * &self.matrix * y)[(0, 0)]
    }

    /// Lowers an index: `v ↦ g v`.
    pub fn lower(&self, v: &DVector<f64>) -> DVector<f64> {
        &self.matrix * v
    }

    pub fn min_eigenvalue(&self) -> f64 {
        SymmetricEigen::new(self.matrix.clone()).eigenvalues.min()
    }

    pub fn inverse(&self) -> Result<DMatrix<f64>> {
        self.matrix
            .clone()
            .cholesky()
            .map(|ch| ch.inverse())
            .ok_or(Error::SingularMetric)
    }
}

/// The `g(a, c)`-orthonormal frame `Z₀..Z_{D−1}`, stored as the columns of
/// a matrix over the frame of `p`:
///
/// ```text
/// Z₀ = √c X¹,  Zᵥ = Y¹ᵥ,  Z₂ₙ₊₁ = (a/√c) X¹ + (1/√c) X²,  Z₂ₙ₊₁₊ᵤ = Y²ᵤ
/// ```
#[derive(Debug, Clone)]
pub struct OrthonormalFrame {
    vectors: DMatrix<f64>,
    inverse: DMatrix<f64>,
}

pub fn orthonormal_frame(params: &StructureParams) -> OrthonormalFrame {
    let l = params.layout();
    let (a, c) = (params.a(), params.c());
    let sc = c.sqrt();
    let mut z = DMatrix::identity(l.dim(), l.dim());
    let (x1, x2) = (l.x1(), l.x2());
    z[(x1, x1)] = sc;
    z[(x1, x2)] = a / sc;
    z[(x2, x2)] = 1.0 / sc;
    // Only the 2×2 fibre block is non-trivial: its inverse is written out.
    let mut inverse = DMatrix::identity(l.dim(), l.dim());
    inverse[(x1, x1)] = 1.0 / sc;
    inverse[(x1, x2)] = -a / sc;
    inverse[(x2, x2)] = sc;
    OrthonormalFrame {
        vectors: z,
        inverse,
    }
}

impl OrthonormalFrame {
    pub fn dim(&self) -> usize {
        self.vectors.ncols()
    }

    /// Columns are `Z_i` over the frame of `p`.
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.vectors
    }

    pub fn z(&self, i: usize) -> DVector<f64> {
        self.vectors.column(i).into_owned()
    }

    /// Z-coordinates to invariant-frame coordinates.
    pub fn to_invariant(&self, v: &DVector<f64>) -> DVector<f64> {
        &self.vectors * v
    }

    /// Invariant-frame coordinates to Z-coordinates.
    pub fn from_invariant(&self, v: &DVector<f64>) -> DVector<f64> {
        &self.inverse * v
    }

    /// `Zᵀ B Z` for a bilinear form `B` in the invariant frame.
    pub fn pull_back_form(&self, form: &DMatrix<f64>) -> DMatrix<f64> {
        self.vectors.transpose() * form * &self.vectors
    }

    /// Inverse of `pull_back_form`.
    pub fn push_forward_form(&self, form: &DMatrix<f64>) -> DMatrix<f64> {
        self.inverse.transpose() * form * &self.inverse
    }
}
