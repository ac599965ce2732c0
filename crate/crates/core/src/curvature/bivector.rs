//! Bivectors over the orthonormal frame `Z`.
//!
//! Coordinates `b_{νμ}`, `ν < μ`, are linearized row-major over ordered
//! pairs: `(0,1), (0,2), …, (0,D−1), (1,2), …, (D−2,D−1)`. Every matrix
//! and output indexed by bivectors uses this order.

use nalgebra::{DMatrix, DVector};

use crate::tolerances::PLUCKER_TOL;
use crate::{Error, Result};

/// `D (D − 1) / 2`.
pub fn bivector_dim(dim: usize) -> usize {
    dim * (dim.saturating_sub(1)) / 2
}

/// Linear index of the pair `(i, j)`, `i < j`.
pub fn pair_index(dim: usize, i: usize, j: usize) -> usize {
    assert!(
        i < j && j < dim,
        "pair ({i}, {j}) invalid for dimension {dim}"
    );
    i * dim - i * (i + 1) / 2 + (j - i - 1)
}

/// All ordered pairs `(i, j)`, `i < j`, in linear-index order.
pub fn pairs(dim: usize) -> Vec<(usize, usize)> {
    (0..dim)
        .flat_map(|i| (i + 1..dim).map(move |j| (i, j)))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bivector {
    dim: usize,
    coeffs: DVector<f64>,
}

impl Bivector {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            coeffs: DVector::zeros(bivector_dim(dim)),
        }
    }

    pub fn from_coeffs(dim: usize, coeffs: DVector<f64>) -> Result<Self> {
        let expected = bivector_dim(dim);
        if coeffs.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: coeffs.len(),
            });
        }
        Ok(Self { dim, coeffs })
    }

    /// `Z_i ∧ Z_j`; the sign flips when `i > j`.
    pub fn basis(dim: usize, i: usize, j: usize) -> Self {
        let mut b = Self::zeros(dim);
        b.set(i, j, 1.0);
        b
    }

    /// `x ∧ y` for vectors in Z-coordinates.
    pub fn wedge(x: &DVector<f64>, y: &DVector<f64>) -> Self {
        assert_eq!(x.len(), y.len(), "wedge of vectors of different length");
        let dim = x.len();
        let coeffs = DVector::from_iterator(
            bivector_dim(dim),
            pairs(dim)
                .into_iter()
                .map(|(i, j)| x[i] * y[j] - x[j] * y[i]),
        );
        Self { dim, coeffs }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeffs(&self) -> &DVector<f64> {
        &self.coeffs
    }

    /// `b_{ij}` with `b_{ji} = −b_{ij}`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.coeffs[pair_index(self.dim, i, j)],
            std::cmp::Ordering::Greater => -self.coeffs[pair_index(self.dim, j, i)],
            std::cmp::Ordering::Equal => 0.0,
        }
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.coeffs[pair_index(self.dim, i, j)] = value,
            std::cmp::Ordering::Greater => self.coeffs[pair_index(self.dim, j, i)] = -value,
            std::cmp::Ordering::Equal => panic!("diagonal bivector coordinate ({i}, {i})"),
        }
    }

    /// Euclidean norm of the coordinates, which is the induced norm because
    /// `Z` is orthonormal.
    pub fn norm(&self) -> f64 {
        self.coeffs.norm()
    }

    pub fn normalized(&self) -> Self {
        Self {
            dim: self.dim,
            coeffs: self.coeffs.normalize(),
        }
    }

    /// Antisymmetric `D × D` matrix with entries `b_{ij}`.
    pub fn to_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim, self.dim, |i, j| self.get(i, j))
    }

    /// Largest `|b_ij b_kl − b_ik b_jl + b_il b_jk|` over `i < j < k < l`,
    /// i.e. the size of `B ∧ B`.
    pub fn plucker_residual(&self) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in i + 1..d {
                for k in j + 1..d {
                    for l in k + 1..d {
                        let r = self.get(i, j) * self.get(k, l) - self.get(i, k) * self.get(j, l)
                            + self.get(i, l) * self.get(j, k);
                        worst = worst.max(r.abs());
                    }
                }
            }
        }
        worst
    }

    pub fn is_decomposable(&self) -> bool {
        self.plucker_residual() <= PLUCKER_TOL
    }
}
