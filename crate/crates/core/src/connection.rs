//! Invariant Levi-Civita connection `D_X Y = ½[X, Y]_p + U(X, Y)`.
//!
//! The symmetric tensor `U` is fixed by
//! `2 g(U(X, Y), Z) = g([Z, X]_p, Y) + g(X, [Z, Y]_p)`.
//! [`u_tensor_solve`] solves that identity basis pair by basis pair;
//! [`u_tensor_closed_form`] writes down the sparse table directly. The solved
//! tensor is the one used downstream.

use nalgebra::{DMatrix, DVector};

use crate::hermitian::{MetricTensor, StructureParams};
use crate::lie_algebra::StructureConstants;
use crate::{Error, Result};

/// `U(e_i, e_j)` for every pair of frame vectors, as coefficient vectors.
#[derive(Debug, Clone)]
pub struct UTensor {
    params: StructureParams,
    table: Vec<DVector<f64>>,
}

impl UTensor {
    pub fn params(&self) -> &StructureParams {
        &self.params
    }

    pub fn dim(&self) -> usize {
        self.params.dim()
    }

    pub fn get(&self, i: usize, j: usize) -> &DVector<f64> {
        &self.table[i * self.dim() + j]
    }

    /// Bilinear extension `U(x, y)`.
    pub fn apply(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        let d = self.dim();
        let mut out = DVector::zeros(d);
        for i in 0..d {
            for j in 0..d {
                let w = x[i] * y[j];
                if w != 0.0 {
                    out.axpy(w, self.get(i, j), 1.0);
                }
            }
        }
        out
    }

    /// `max |U(e_i, e_j) − U(e_j, e_i)|`.
    pub fn symmetry_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..i {
                worst = worst.max((self.get(i, j) - self.get(j, i)).amax());
            }
        }
        worst
    }

    /// Largest entrywise difference from another tensor of the same shape.
    pub fn max_discrepancy(&self, other: &UTensor) -> f64 {
        assert_eq!(self.dim(), other.dim(), "tensor dimensions differ");
        self.table
            .iter()
            .zip(&other.table)
            .map(|(u, v)| (u - v).amax())
            .fold(0.0, f64::max)
    }

    /// Largest violation of
    /// `2⟨U(e_i, e_j), e_k⟩ = ⟨[e_k, e_i]_p, e_j⟩ + ⟨e_i, [e_k, e_j]_p⟩`.
    pub fn defining_identity_defect(
        &self,
        metric: &MetricTensor,
        structure: &StructureConstants,
    ) -> f64 {
        let g = metric.matrix();
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let lhs = metric.lower(self.get(i, j)) * 2.0;
                for k in 0..d {
                    let rhs = structure.p_bracket(k, i).dot(&g.column(j))
                        + g.row(i).transpose().dot(structure.p_bracket(k, j));
                    worst = worst.max((lhs[k] - rhs).abs());
                }
            }
        }
        worst
    }
}

/// Solves the defining identity for `U` with the metric Gram matrix.
pub fn u_tensor_solve(metric: &MetricTensor, structure: &StructureConstants) -> Result<UTensor> {
    let params = *metric.params();
    let d = params.dim();
    if structure.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: structure.dim(),
        });
    }
    let g = metric.matrix();
    let chol = g.clone().cholesky().ok_or(Error::SingularMetric)?;
    let mut table = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let rhs = DVector::from_fn(d, |k, _| {
                0.5 * (structure.p_bracket(k, i).dot(&g.column(j))
                    + g.row(i).transpose().dot(structure.p_bracket(k, j)))
            });
            table.push(chol.solve(&rhs));
        }
    }
    Ok(UTensor { params, table })
}

/// The sparse table for `U`: with `Y₂ᵥ₋₁ ↦ Y₂ᵥ`, `Y₂ᵥ ↦ −Y₂ᵥ₋₁` rotations in
/// each factor,
///
/// ```text
/// U(X¹, Y¹) = (2−c)/(2c) · rot Y¹      U(X¹, Y²) = −(a/c) · rot Y²
/// U(X², Y¹) = −(a/c) · rot Y¹          U(X², Y²) = ((a²+c²)/c − ½) · rot Y²
/// ```
///
/// and zero on every other pair of frame vectors.
pub fn u_tensor_closed_form(params: &StructureParams) -> UTensor {
    let l = params.layout();
    let d = l.dim();
    let (a, c) = (params.a(), params.c());
    let mut table = vec![DVector::zeros(d); d * d];
    let mut rotate = |x: usize, odd: usize, even: usize, coeff: f64| {
        table[x * d + odd][even] = coeff;
        table[odd * d + x][even] = coeff;
        table[x * d + even][odd] = -coeff;
        table[even * d + x][odd] = -coeff;
    };
    for v in 1..=l.n {
        let (odd, even) = (l.y1(2 * v - 1), l.y1(2 * v));
        rotate(l.x1(), odd, even, (2.0 - c) / (2.0 * c));
        rotate(l.x2(), odd, even, -a / c);
    }
    for v in 1..=l.p {
        let (odd, even) = (l.y2(2 * v - 1), l.y2(2 * v));
        rotate(l.x1(), odd, even, -a / c);
        rotate(l.x2(), odd, even, params.q() / c - 0.5);
    }
    UTensor {
        params: *params,
        table,
    }
}

/// Nomizu operators `Λ(e_i) : Y ↦ D_{e_i} Y` on `p`.
#[derive(Debug, Clone)]
pub struct Connection {
    nomizu: Vec<DMatrix<f64>>,
}

impl Connection {
    pub fn new(structure: &StructureConstants, u: &UTensor) -> Self {
        let d = structure.dim();
        let nomizu = (0..d)
            .map(|i| {
                let cols: Vec<_> = (0..d)
                    .map(|j| structure.p_bracket(i, j) * 0.5 + u.get(i, j))
                    .collect();
                DMatrix::from_columns(&cols)
            })
            .collect();
        Self { nomizu }
    }

    pub fn dim(&self) -> usize {
        self.nomizu.len()
    }

    /// Matrix of `Y ↦ D_X Y`.
    pub fn nomizu(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let d = self.dim();
        self.nomizu
            .iter()
            .zip(x.iter())
            .fold(DMatrix::zeros(d, d), |acc, (m, &xi)| acc + m * xi)
    }

    pub fn nomizu_basis(&self, i: usize) -> &DMatrix<f64> {
        &self.nomizu[i]
    }

    /// `D_X Y = ½[X, Y]_p + U(X, Y)`.
    pub fn covariant_derivative(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        self.nomizu(x) * y
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::HermitianSpace;

    fn space(n: usize, p: usize, a: f64, c: f64) -> HermitianSpace {
        HermitianSpace::new(StructureParams::new(n, p, a, c).unwrap()).unwrap()
    }

    fn e(d: usize, i: usize) -> DVector<f64> {
        let mut v = DVector::zeros(d);
        v[i] = 1.0;
        v
    }

    #[test]
    fn horizontal_pair_has_no_u() {
        let s = space(2, 1, 0.7, 1.9);
        let l = s.params().layout();
        assert!(s.u().get(l.y1(1), l.y1(2)).amax() < 1e-14);
    }

    #[test]
    fn x1_on_first_factor() {
        let (a, c) = (0.4, 0.8);
        let s = space(2, 1, a, c);
        let l = s.params().layout();
        for v in 1..=2 {
            let u = s.u().get(l.x1(), l.y1(2 * v - 1));
            let mut expected = DVector::zeros(l.dim());
            expected[l.y1(2 * v)] = (2.0 - c) / (2.0 * c);
            assert!((u - expected).amax() < 1e-12);
        }
    }

    #[test]
    fn round_product_second_factor() {
        let s = space(1, 2, 0.0, 1.0);
        let l = s.params().layout();
        let u = s.u().get(l.x2(), l.y2(3));
        assert!((u[l.y2(4)] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn closed_form_entries() {
        let (a, c) = (1.5, 0.6);
        let pr = StructureParams::new(1, 1, a, c).unwrap();
        let l = pr.layout();
        let u = u_tensor_closed_form(&pr);
        assert_eq!(u.get(l.x1(), l.y2(1))[l.y2(2)], -a / c);
        assert_eq!(u.get(l.x2(), l.y1(2))[l.y1(1)], a / c);
        assert_eq!(u.get(l.x1(), l.x2()).amax(), 0.0);
        assert_eq!(u.symmetry_defect(), 0.0);
    }

    #[test]
    fn solve_matches_closed_form() {
        for (a, c) in [(0.0, 1.0), (2.0, 0.3), (-1.1, 3.7)] {
            let s = space(2, 2, a, c);
            let closed = u_tensor_closed_form(s.params());
            assert!(s.u().max_discrepancy(&closed) <= 1e-10, "a = {a}, c = {c}");
        }
    }

    #[test]
    fn round_product_degeneracy_at_c_two() {
        let s = space(2, 1, 0.0, 2.0);
        let l = s.params().layout();
        for k in l.first_factor() {
            assert!(s.u().get(l.x1(), k).amax() < 1e-14);
        }
    }

    #[test]
    fn x1_is_parallel_along_itself() {
        let s = space(1, 1, 0.9, 0.4);
        let x1 = e(6, 0);
        assert!(s.connection().covariant_derivative(&x1, &x1).amax() < 1e-14);
    }

    #[test]
    fn horizontal_derivative_is_half_bracket() {
        let s = space(1, 1, 0.9, 0.4);
        let l = s.params().layout();
        let (y1, y2) = (e(6, l.y1(1)), e(6, l.y1(2)));
        let lhs = s.connection().covariant_derivative(&y1, &y2);
        let rhs = s.structure().bracket_p(&y1, &y2) * 0.5;
        assert!((lhs - rhs).amax() < 1e-14);
    }
}
