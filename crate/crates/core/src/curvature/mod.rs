//! Riemann curvature at the identity coset, the curvature operator on
//! bivectors and sectional curvature.
//!
//! With the Nomizu map `Λ(X) Y = D_X Y` the curvature endomorphism is
//!
//! ```text
//! R(X, Y) = [Λ(X), Λ(Y)] − Λ([X, Y]_p) − ad([X, Y]_h)
//! ```
//!
//! and the operator on bivectors has entries
//! `R_{(αν)(ρμ)} = ⟨R(Z_α, Z_ν) Z_μ, Z_ρ⟩`, so that `K(Z_α ∧ Z_ν)` is the
//! diagonal entry and round spheres come out with curvature `+1`.

mod bivector;
mod ricci;

pub use bivector::{bivector_dim, pair_index, pairs, Bivector};
pub use ricci::{
    ricci_closed_form, ricci_contraction_invariant, ricci_eigenvalues,
    ricci_eigenvalues_closed_form, ricci_quadratic_from_brackets, ricci_via_brackets,
    ricci_via_contraction, scalar_closed_form, scalar_via_trace, u_trace_vector,
};

use nalgebra::{DMatrix, DVector};

use crate::hermitian::StructureParams;
use crate::lie_algebra::BasisLayout;
use crate::tolerances::{PLUCKER_TOL, UNIT_NORM_TOL};
use crate::{Error, HermitianSpace, Result};

/// Matrix of `Z ↦ R(X, Y) Z` on `p` (invariant-frame coordinates).
pub fn curvature_endomorphism(
    space: &HermitianSpace,
    x: &DVector<f64>,
    y: &DVector<f64>,
) -> DMatrix<f64> {
    let conn = space.connection();
    let sc = space.structure();
    let lx = conn.nomizu(x);
    let ly = conn.nomizu(y);
    &lx * &ly - &ly * &lx - conn.nomizu(&sc.bracket_p(x, y)) - sc.ad_h(&sc.bracket_h(x, y))
}

/// `R(X, Y) Z`.
pub fn riemann(
    space: &HermitianSpace,
    x: &DVector<f64>,
    y: &DVector<f64>,
    z: &DVector<f64>,
) -> DVector<f64> {
    curvature_endomorphism(space, x, y) * z
}

/// The expansion
/// `D_X(½[Y,Z]_p + U(Y,Z)) − D_Y(½[X,Z]_p + U(X,Z)) − (½[[X,Y]_p,Z]_p + U([X,Y]_p,Z))`
/// without the isotropy term `−[[X, Y]_h, Z]`. Kept for comparison only.
pub fn riemann_truncated(
    space: &HermitianSpace,
    x: &DVector<f64>,
    y: &DVector<f64>,
    z: &DVector<f64>,
) -> DVector<f64> {
    let conn = space.connection();
    let sc = space.structure();
    let lx = conn.nomizu(x);
    let ly = conn.nomizu(y);
    &lx * (&ly * z) - &ly * (&lx * z) - conn.nomizu(&sc.bracket_p(x, y)) * z
}

/// `⟨R(Z_a, Z_b) Z_c, Z_d⟩` for all index quadruples, flattened as
/// `((a·D + b)·D + c)·D + d`.
pub fn curvature_tensor(space: &HermitianSpace) -> Vec<f64> {
    let d = space.dim();
    let z = space.orthonormal().matrix();
    let gz = space.metric().matrix() * z;
    let mut out = vec![0.0; d * d * d * d];
    for a in 0..d {
        for b in 0..d {
            let endo =
                curvature_endomorphism(space, &z.column(a).into_owned(), &z.column(b).into_owned());
            // (c, d) ↦ Z_dᵀ G R Z_c
            let block = gz.transpose() * endo * z;
            for c in 0..d {
                for dd in 0..d {
                    out[((a * d + b) * d + c) * d + dd] = block[(dd, c)];
                }
            }
        }
    }
    out
}

/// Largest violations of the algebraic curvature identities over the
/// orthonormal frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryDefects {
    /// `R(X, Y) = −R(Y, X)`.
    pub antisymmetry: f64,
    /// `⟨R(X, Y) Z, W⟩ = −⟨R(X, Y) W, Z⟩`.
    pub skew: f64,
    /// `⟨R(X, Y) Z, W⟩ = ⟨R(Z, W) X, Y⟩`.
    pub pair_symmetry: f64,
    /// `R(X, Y) Z + R(Y, Z) X + R(Z, X) Y = 0`.
    pub bianchi: f64,
}

impl SymmetryDefects {
    pub fn worst(&self) -> f64 {
        self.antisymmetry
            .max(self.skew)
            .max(self.pair_symmetry)
            .max(self.bianchi)
    }
}

pub fn symmetry_defects(space: &HermitianSpace) -> SymmetryDefects {
    let d = space.dim();
    let t = curvature_tensor(space);
    let at = |a: usize, b: usize, c: usize, e: usize| t[((a * d + b) * d + c) * d + e];
    let mut out = SymmetryDefects {
        antisymmetry: 0.0,
        skew: 0.0,
        pair_symmetry: 0.0,
        bianchi: 0.0,
    };
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                for e in 0..d {
                    let v = at(a, b, c, e);
                    out.antisymmetry = out.antisymmetry.max((v + at(b, a, c, e)).abs());
                    out.skew = out.skew.max((v + at(a, b, e, c)).abs());
                    // ⟨R(X,Y)Z,W⟩ = ⟨R(Z,W)X,Y⟩ reads at(c, e, a, b) in (X,Y,Z,W) → (a,b,c,e).
                    out.pair_symmetry = out.pair_symmetry.max((v - at(c, e, a, b)).abs());
                    out.bianchi = out.bianchi.max((v + at(b, c, a, e) + at(c, a, b, e)).abs());
                }
            }
        }
    }
    out
}

/// Symmetric matrix of the curvature operator on `Λ²p` over the basis
/// `Z_ν ∧ Z_μ`, `ν < μ`.
#[derive(Debug, Clone)]
pub struct CurvatureOperator {
    params: StructureParams,
    dim: usize,
    matrix: DMatrix<f64>,
    sparse: Vec<(usize, usize, f64)>,
}

/// Entries below this fraction of the largest entry are treated as exact
/// zeros in the sparse view used by the optimizers.
const SPARSE_CUTOFF: f64 = 1e-14;

pub fn curvature_operator(space: &HermitianSpace) -> CurvatureOperator {
    let d = space.dim();
    let z = space.orthonormal().matrix();
    let gz = space.metric().matrix() * z;
    let ps = pairs(d);
    let m = ps.len();
    let mut matrix = DMatrix::zeros(m, m);
    for (row, &(alpha, nu)) in ps.iter().enumerate() {
        let endo = curvature_endomorphism(
            space,
            &z.column(alpha).into_owned(),
            &z.column(nu).into_owned(),
        );
        // block[(ρ, μ)] = ⟨R(Z_α, Z_ν) Z_μ, Z_ρ⟩
        let block = gz.transpose() * endo * z;
        for (col, &(rho, mu)) in ps.iter().enumerate() {
            matrix[(row, col)] = block[(rho, mu)];
        }
    }
    CurvatureOperator::from_matrix(*space.params(), matrix)
}

impl CurvatureOperator {
    fn from_matrix(params: StructureParams, matrix: DMatrix<f64>) -> Self {
        let cutoff = SPARSE_CUTOFF * matrix.amax().max(1.0);
        let mut sparse = Vec::new();
        for (col, column) in matrix.column_iter().enumerate() {
            for (row, &v) in column.iter().enumerate() {
                if v.abs() > cutoff {
                    sparse.push((row, col, v));
                }
            }
        }
        Self {
            params,
            dim: params.dim(),
            matrix,
            sparse,
        }
    }

    pub fn params(&self) -> &StructureParams {
        &self.params
    }

    /// Dimension `D` of the underlying tangent space.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Non-negligible entries `(row, col, value)`.
    pub fn sparse_entries(&self) -> &[(usize, usize, f64)] {
        &self.sparse
    }

    /// `R_{(αν)(ρμ)}` for arbitrary index order, using antisymmetry within
    /// each pair.
    pub fn entry(&self, alpha: usize, nu: usize, rho: usize, mu: usize) -> f64 {
        if alpha == nu || rho == mu {
            return 0.0;
        }
        let (i, s1) = if alpha < nu {
            (pair_index(self.dim, alpha, nu), 1.0)
        } else {
            (pair_index(self.dim, nu, alpha), -1.0)
        };
        let (j, s2) = if rho < mu {
            (pair_index(self.dim, rho, mu), 1.0)
        } else {
            (pair_index(self.dim, mu, rho), -1.0)
        };
        s1 * s2 * self.matrix[(i, j)]
    }

    pub fn symmetry_defect(&self) -> f64 {
        (&self.matrix - self.matrix.transpose()).amax()
    }

    /// `⟨R·Bᵀ, B⟩` with no constraint on `B`.
    pub fn quadratic(&self, b: &Bivector) -> f64 {
        assert_eq!(b.dim(), self.dim, "bivector dimension");
        let c = b.coeffs();
        c.dot(&(&self.matrix * c))
    }

    /// Sectional curvature `K(B) = ⟨R·Bᵀ, B⟩` of a unit decomposable
    /// bivector.
    pub fn sectional(&self, b: &Bivector) -> Result<f64> {
        if b.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: b.dim(),
            });
        }
        let norm = b.norm();
        if (norm - 1.0).abs() > UNIT_NORM_TOL {
            return Err(Error::NotUnit(norm));
        }
        let residual = b.plucker_residual();
        if residual > PLUCKER_TOL {
            return Err(Error::NotDecomposable(residual));
        }
        Ok(self.quadratic(b))
    }

    /// `K(X ∧ Y)` for an orthonormal pair given in Z-coordinates.
    pub fn sectional_of_pair(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        self.quadratic(&Bivector::wedge(x, y))
    }
}

/// One closed-form curvature-operator entry, keyed by Z-indices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrintedEntry {
    pub first: (usize, usize),
    pub second: (usize, usize),
    pub value: f64,
    pub source: &'static str,
}

/// Index families whose entries are all given in closed form: rows through
/// `Z₀`, rows `(2n+1, ν)` with `ν` in the second factor, horizontal planes
/// of one factor against the other, and mixed planes against mixed planes.
fn covered(layout: BasisLayout, first: (usize, usize), second: (usize, usize)) -> bool {
    let x2 = layout.x2();
    let in1 = |i: usize| layout.first_factor().contains(&i);
    let in2 = |i: usize| layout.second_factor().contains(&i);
    let fibre_row = |(i, j): (usize, usize)| i == 0 || (i == x2 && in2(j));
    let horizontal1 = |(i, j): (usize, usize)| in1(i) && in1(j);
    let horizontal2 = |(i, j): (usize, usize)| in2(i) && in2(j);
    let mixed = |(i, j): (usize, usize)| in1(i) && in2(j);
    fibre_row(first)
        || fibre_row(second)
        || (horizontal1(first) && horizontal2(second))
        || (horizontal2(first) && horizontal1(second))
        || (mixed(first) && mixed(second))
}

/// Every nonzero entry given in closed form, including pair-symmetric
/// partners.
pub fn printed_nonzero_entries(params: &StructureParams) -> Vec<PrintedEntry> {
    let l = params.layout();
    let (a, c) = (params.a(), params.c());
    let x2 = l.x2();
    let mut out = Vec::new();
    let mut push = |first, second, value, source| {
        out.push(PrintedEntry {
            first,
            second,
            value,
            source,
        });
    };
    for nu in l.first_factor() {
        push((0, nu), (0, nu), 1.0 / c, "K(Z0, Y1)");
    }
    for nu in l.second_factor() {
        push((0, nu), (0, nu), a * a / c, "K(Z0, Y2)");
        push((0, nu), (x2, nu), -a, "R(Z0 Y2)(Z2n+1 Y2)");
        push((x2, nu), (0, nu), -a, "R(Z2n+1 Y2)(Z0 Y2)");
        push((x2, nu), (x2, nu), c, "K(Z2n+1, Y2)");
    }
    for lq in 1..=l.n {
        let (o1, e1) = (l.y1(2 * lq - 1), l.y1(2 * lq));
        for m in 1..=l.p {
            let (o2, e2) = (l.y2(2 * m - 1), l.y2(2 * m));
            push((o1, e1), (o2, e2), 2.0 * a / c, "R(Y1 Y1)(Y2 Y2)");
            push((o2, e2), (o1, e1), 2.0 * a / c, "R(Y2 Y2)(Y1 Y1)");
            push((o1, o2), (e1, e2), a / c, "R(Y1 Y2)(Y1 Y2)");
            push((e1, o2), (o1, e2), -a / c, "R(Y1 Y2)(Y1 Y2)");
            push((o1, e2), (e1, o2), -a / c, "R(Y1 Y2)(Y1 Y2)");
            push((e1, e2), (o1, o2), a / c, "R(Y1 Y2)(Y1 Y2)");
        }
    }
    out
}

/// Entries `(I, J)`, `I ≤ J` in linear order, that the closed forms state to
/// be zero.
pub fn printed_zero_entries(layout: BasisLayout) -> Vec<((usize, usize), (usize, usize))> {
    let d = layout.dim();
    // a and c only scale the nonzero set; any admissible values give the pattern.
    let probe = StructureParams::new(layout.n, layout.p, 1.0, 1.0).expect("valid probe params");
    let nonzero: std::collections::HashSet<_> = printed_nonzero_entries(&probe)
        .into_iter()
        .map(|e| (e.first, e.second))
        .collect();
    let ps = pairs(d);
    let mut out = Vec::new();
    for (i, &first) in ps.iter().enumerate() {
        for &second in &ps[i..] {
            if covered(layout, first, second)
                && !nonzero.contains(&(first, second))
                && !nonzero.contains(&(second, first))
            {
                out.push((first, second));
            }
        }
    }
    out
}

/// An operator entry where the full and truncated curvature formulas
/// disagree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntryDiscrepancy {
    pub first: (usize, usize),
    pub second: (usize, usize),
    pub full: f64,
    pub truncated: f64,
}

/// Compares the full curvature formula with the truncated expansion entry by
/// entry over the upper triangle of the operator.
pub fn h_term_discrepancies(space: &HermitianSpace, tol: f64) -> Vec<EntryDiscrepancy> {
    let d = space.dim();
    let z = space.orthonormal().matrix();
    let g = space.metric();
    let op = curvature_operator(space);
    let ps = pairs(d);
    let mut out = Vec::new();
    for (i, &(alpha, nu)) in ps.iter().enumerate() {
        for &(rho, mu) in &ps[i..] {
            let col = |k: usize| z.column(k).into_owned();
            let truncated = g.inner(
                &riemann_truncated(space, &col(alpha), &col(nu), &col(mu)),
                &col(rho),
            );
            let full = op.entry(alpha, nu, rho, mu);
            if (full - truncated).abs() > tol {
                out.push(EntryDiscrepancy {
                    first: (alpha, nu),
                    second: (rho, mu),
                    full,
                    truncated,
                });
            }
        }
    }
    out
}
