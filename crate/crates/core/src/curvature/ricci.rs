//! Ricci and scalar curvature by three routes: the closed-form block
//! matrix, the homogeneous-space formula in terms of brackets, and direct
//! contraction of the curvature tensor.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::curvature_endomorphism;
use crate::hermitian::StructureParams;
use crate::{HermitianSpace, Result};

/// The fibre-block entries `(x, y, z)` of the closed-form Ricci matrix:
/// `Ric(X¹, X¹)`, `Ric(X², X²)` and `Ric(X¹, X²)`.
fn fibre_block(params: &StructureParams) -> (f64, f64, f64) {
    let (n, p) = (params.n() as f64, params.p() as f64);
    let (a, c) = (params.a(), params.c());
    let q = params.q();
    let c2 = c * c;
    let x = 2.0 * (n + p * a * a) / c2;
    let y = 2.0 * (n * a * a + p * q * q) / c2;
    let z = -2.0 * a / c2 * (n + p * q);
    (x, y, z)
}

fn horizontal_values(params: &StructureParams) -> (f64, f64) {
    let (n, p) = (params.n() as f64, params.p() as f64);
    let c = params.c();
    (2.0 * (1.0 + n - 1.0 / c), 2.0 * (1.0 + p - params.q() / c))
}

/// Closed-form Ricci tensor over the invariant frame.
pub fn ricci_closed_form(params: &StructureParams) -> DMatrix<f64> {
    let l = params.layout();
    let (x, y, z) = fibre_block(params);
    let (h1, h2) = horizontal_values(params);
    let mut r = DMatrix::zeros(l.dim(), l.dim());
    r[(l.x1(), l.x1())] = x;
    r[(l.x2(), l.x2())] = y;
    r[(l.x1(), l.x2())] = z;
    r[(l.x2(), l.x1())] = z;
    for k in l.first_factor() {
        r[(k, k)] = h1;
    }
    for k in l.second_factor() {
        r[(k, k)] = h2;
    }
    r
}

/// Eigenvalues of the closed-form Ricci matrix, ascending: the two roots
/// `(x + y ± √((x − y)² + 4z²)) / 2` of the fibre block, `2(1 + n − 1/c)`
/// with multiplicity `2n` and `2(1 + p − (a² + c²)/c)` with multiplicity
/// `2p`.
pub fn ricci_eigenvalues_closed_form(params: &StructureParams) -> Vec<f64> {
    let (x, y, z) = fibre_block(params);
    let (h1, h2) = horizontal_values(params);
    let mean = 0.5 * (x + y);
    let half_gap = 0.5 * ((x - y).powi(2) + 4.0 * z * z).sqrt();
    let mut out = vec![mean - half_gap, mean + half_gap];
    out.extend(std::iter::repeat_n(h1, 2 * params.n()));
    out.extend(std::iter::repeat_n(h2, 2 * params.p()));
    out.sort_by(f64::total_cmp);
    out
}

/// Ascending eigenvalues of a symmetric matrix.
pub fn ricci_eigenvalues(matrix: &DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(matrix.clone())
        .eigenvalues
        .iter()
        .copied()
        .collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// `Ric(u_a, u_b) = Σ_i ⟨R(Z_i, u_a) u_b, Z_i⟩` for the columns `u` of
/// `vectors` (invariant coordinates).
fn contraction(space: &HermitianSpace, vectors: &DMatrix<f64>) -> DMatrix<f64> {
    let d = space.dim();
    let z = space.orthonormal().matrix();
    let g = space.metric().matrix();
    let k = vectors.ncols();
    let mut out = DMatrix::zeros(k, k);
    for i in 0..d {
        let zi = z.column(i).into_owned();
        let gzi = g * &zi;
        for a in 0..k {
            let endo = curvature_endomorphism(space, &zi, &vectors.column(a).into_owned());
            let row = gzi.transpose() * endo * vectors;
            for b in 0..k {
                out[(a, b)] += row[(0, b)];
            }
        }
    }
    out
}

/// Ricci tensor over the orthonormal frame by contracting the curvature
/// tensor.
pub fn ricci_via_contraction(space: &HermitianSpace) -> DMatrix<f64> {
    contraction(space, space.orthonormal().matrix())
}

/// Ricci tensor over the invariant frame by contraction.
pub fn ricci_contraction_invariant(space: &HermitianSpace) -> DMatrix<f64> {
    let d = space.dim();
    contraction(space, &DMatrix::identity(d, d))
}

/// `Z = Σ_i U(v_i, v_i)` over the orthonormal frame.
pub fn u_trace_vector(space: &HermitianSpace) -> DVector<f64> {
    let z = space.orthonormal().matrix();
    (0..space.dim()).fold(DVector::zeros(space.dim()), |acc, i| {
        let v = z.column(i).into_owned();
        acc + space.u().apply(&v, &v)
    })
}

/// `Ric(X, X)` from brackets alone:
///
/// ```text
/// − ½ Σ|[X, vᵢ]_p|² − ½ Σ⟨[X, [X, vᵢ]_p]_p, vᵢ⟩ − Σ⟨[X, [X, vᵢ]_h]_p, vᵢ⟩
///   + ¼ Σ⟨[vᵢ, vⱼ]_p, X⟩² − ⟨[Z, X]_p, X⟩
/// ```
///
/// with `vᵢ` the orthonormal frame and `Z` from [`u_trace_vector`].
pub fn ricci_quadratic_from_brackets(space: &HermitianSpace, x: &DVector<f64>) -> f64 {
    let sc = space.structure();
    let g = space.metric();
    let frame = space.orthonormal().matrix();
    let basis: Vec<DVector<f64>> = frame.column_iter().map(|c| c.into_owned()).collect();
    let mut total = 0.0;
    for v in &basis {
        let xv = sc.bracket_p(x, v);
        total -= 0.5 * g.inner(&xv, &xv);
        total -= 0.5 * g.inner(&sc.bracket_p(x, &xv), v);
        // [X, W]_p = −[W, X] for W in h.
        let x_w = -(sc.ad_h(&sc.bracket_h(x, v)) * x);
        total -= g.inner(&x_w, v);
    }
    for vi in &basis {
        for vj in &basis {
            total += 0.25 * g.inner(&sc.bracket_p(vi, vj), x).powi(2);
        }
    }
    let z = u_trace_vector(space);
    total - g.inner(&sc.bracket_p(&z, x), x)
}

/// Ricci tensor over the orthonormal frame by polarizing
/// [`ricci_quadratic_from_brackets`].
pub fn ricci_via_brackets(space: &HermitianSpace) -> DMatrix<f64> {
    let d = space.dim();
    let z = space.orthonormal().matrix();
    let cols: Vec<DVector<f64>> = z.column_iter().map(|c| c.into_owned()).collect();
    let mut out = DMatrix::zeros(d, d);
    for i in 0..d {
        out[(i, i)] = ricci_quadratic_from_brackets(space, &cols[i]);
        for j in 0..i {
            let plus = ricci_quadratic_from_brackets(space, &(&cols[i] + &cols[j]));
            let minus = ricci_quadratic_from_brackets(space, &(&cols[i] - &cols[j]));
            let v = 0.25 * (plus - minus);
            out[(i, j)] = v;
            out[(j, i)] = v;
        }
    }
    out
}

/// `s = 4n(1 + n − 1/(2c)) + 4p(1 + p − (a² + c²)/(2c))`.
pub fn scalar_closed_form(params: &StructureParams) -> f64 {
    let (n, p) = (params.n() as f64, params.p() as f64);
    let c = params.c();
    4.0 * n * (1.0 + n - 1.0 / (2.0 * c)) + 4.0 * p * (1.0 + p - params.q() / (2.0 * c))
}

/// `s = Ric_ij g^{ij}` with the contraction-route Ricci tensor.
pub fn scalar_via_trace(space: &HermitianSpace) -> Result<f64> {
    let ric = ricci_contraction_invariant(space);
    let g_inv = space.metric().inverse()?;
    Ok((g_inv * ric).trace())
}
