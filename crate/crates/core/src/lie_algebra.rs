//! Matrix realization of `u(n+1) ⊕ u(p+1)` and its reductive splitting
//! `g = h ⊕ p`, with `h = u(n) ⊕ u(p)` the stabilizer of the first basis
//! vector in each factor.
//!
//! The tangent frame of `p` is, per factor,
//!
//! ```text
//! X    = ½ i T₀₀           = i E₀₀
//! Y₂ᵥ₋₁ = Z_{ν0}           = E_{ν0} − E_{0ν}
//! Y₂ᵥ   = i T_{ν0}         = i (E_{ν0} + E_{0ν})      1 ≤ ν ≤ n
//! ```
//!
//! and `h` is spanned by `Z_{νμ}`, `i T_{νμ}` (1 ≤ μ < ν) and `i E_{νν}`
//! living in the lower-right block.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Complex, DMatrix, DVector};

use crate::tolerances::{SKEW_HERMITIAN_TOL, SPAN_RESIDUAL_TOL};
use crate::{Error, Result};

pub type C64 = Complex<f64>;

/// Index bookkeeping for the ordered frame `X¹, Y¹₁..Y¹₂ₙ, X², Y²₁..Y²₂ₚ`.
///
/// Positions are 0-based; the `y1`/`y2` accessors take the 1-based
/// subscript used for the `Y` vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisLayout {
    pub n: usize,
    pub p: usize,
}

impl BasisLayout {
    pub fn new(n: usize, p: usize) -> Result<Self> {
        if n == 0 || p == 0 {
            return Err(Error::InvalidParams(format!(
                "n and p must be at least 1 (got n = {n}, p = {p})"
            )));
        }
        Ok(Self { n, p })
    }

    /// Dimension `D = 2n + 2p + 2` of `p`.
    pub fn dim(&self) -> usize {
        2 * self.n + 2 * self.p + 2
    }

    pub fn h_dim(&self) -> usize {
        self.n * self.n + self.p * self.p
    }

    pub fn g_dim(&self) -> usize {
        (self.n + 1) * (self.n + 1) + (self.p + 1) * (self.p + 1)
    }

    pub fn x1(&self) -> usize {
        0
    }

    /// Position of `Y¹_k`, `1 ≤ k ≤ 2n`.
    pub fn y1(&self, k: usize) -> usize {
        assert!(
            (1..=2 * self.n).contains(&k),
            "Y¹ subscript {k} out of range"
        );
        k
    }

    pub fn x2(&self) -> usize {
        2 * self.n + 1
    }

    /// Position of `Y²_k`, `1 ≤ k ≤ 2p`.
    pub fn y2(&self, k: usize) -> usize {
        assert!(
            (1..=2 * self.p).contains(&k),
            "Y² subscript {k} out of range"
        );
        2 * self.n + 1 + k
    }

    /// Positions of the horizontal vectors of the first factor.
    pub fn first_factor(&self) -> std::ops::Range<usize> {
        1..2 * self.n + 1
    }

    /// Positions of the horizontal vectors of the second factor.
    pub fn second_factor(&self) -> std::ops::Range<usize> {
        2 * self.n + 2..self.dim()
    }

    pub fn label(&self, i: usize) -> String {
        let x2 = self.x2();
        match i {
            0 => "X1".to_string(),
            i if i < x2 => format!("Y1_{i}"),
            i if i == x2 => "X2".to_string(),
            i if i < self.dim() => format!("Y2_{}", i - x2),
            _ => panic!("basis position {i} out of range"),
        }
    }
}

/// One element of `u(n+1) ⊕ u(p+1)`: a pair of skew-Hermitian matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    pub block1: DMatrix<C64>,
    pub block2: DMatrix<C64>,
}

fn skew_defect(m: &DMatrix<C64>) -> f64 {
    (m + m.adjoint())
        .iter()
        .fold(0.0, |acc, z| acc.max(z.norm()))
}

fn commutator(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    a * b - b * a
}

impl AlgebraElement {
    /// Builds an element, rejecting blocks that are not square or not
    /// skew-Hermitian.
    pub fn new(block1: DMatrix<C64>, block2: DMatrix<C64>) -> Result<Self> {
        if !block1.is_square() || !block2.is_square() {
            return Err(Error::SizeMismatch {
                left1: block1.nrows(),
                left2: block2.nrows(),
                right1: block1.ncols(),
                right2: block2.ncols(),
            });
        }
        let el = Self { block1, block2 };
        let defect = el.skew_hermitian_defect();
        if defect > SKEW_HERMITIAN_TOL {
            return Err(Error::NotSkewHermitian(defect));
        }
        Ok(el)
    }

    pub fn zero(n: usize, p: usize) -> Self {
        Self {
            block1: DMatrix::zeros(n + 1, n + 1),
            block2: DMatrix::zeros(p + 1, p + 1),
        }
    }

    /// Matrix sizes `(n + 1, p + 1)` of the two blocks.
    pub fn sizes(&self) -> (usize, usize) {
        (self.block1.nrows(), self.block2.nrows())
    }

    pub fn skew_hermitian_defect(&self) -> f64 {
        skew_defect(&self.block1).max(skew_defect(&self.block2))
    }

    pub fn max_abs(&self) -> f64 {
        self.block1
            .iter()
            .chain(self.block2.iter())
            .fold(0.0, |acc, z| acc.max(z.norm()))
    }

    /// Componentwise commutator `([A₁, B₁], [A₂, B₂])`.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.check_sizes(other)?;
        Ok(Self {
            block1: commutator(&self.block1, &other.block1),
            block2: commutator(&self.block2, &other.block2),
        })
    }

    fn check_sizes(&self, other: &Self) -> Result<()> {
        let (l1, l2) = self.sizes();
        let (r1, r2) = other.sizes();
        if l1 != r1 || l2 != r2 {
            return Err(Error::SizeMismatch {
                left1: l1,
                left2: l2,
                right1: r1,
                right2: r2,
            });
        }
        Ok(())
    }

    /// Real coordinates identifying a skew-Hermitian pair with `R^{dim g}`:
    /// per block `Im A_kk`, then `Re A_kl, Im A_kl` for `k > l`.
    fn real_coords(&self) -> DVector<f64> {
        let mut out = Vec::with_capacity(self.block1.len() + self.block2.len());
        for m in [&self.block1, &self.block2] {
            let size = m.nrows();
            out.extend((0..size).map(|k| m[(k, k)].im));
            for k in 0..size {
                for l in 0..k {
                    out.push(m[(k, l)].re);
                    out.push(m[(k, l)].im);
                }
            }
        }
        DVector::from_vec(out)
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;

    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            block1: &self.block1 + &rhs.block1,
            block2: &self.block2 + &rhs.block2,
        }
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;

    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            block1: &self.block1 - &rhs.block1,
            block2: &self.block2 - &rhs.block2,
        }
    }
}

impl Mul<f64> for &AlgebraElement {
    type Output = AlgebraElement;

    fn mul(self, rhs: f64) -> AlgebraElement {
        let s = C64::new(rhs, 0.0);
        AlgebraElement {
            block1: &self.block1 * s,
            block2: &self.block2 * s,
        }
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;

    fn neg(self) -> AlgebraElement {
        AlgebraElement {
            block1: -&self.block1,
            block2: -&self.block2,
        }
    }
}

/// Ordered bases of `p` and `h` together with a cached factorization of the
/// change of basis from `p ∪ h` to real matrix coordinates.
#[derive(Clone)]
pub struct ReductiveFrame {
    layout: BasisLayout,
    p_basis: Vec<AlgebraElement>,
    h_basis: Vec<AlgebraElement>,
    combined: DMatrix<f64>,
    lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
}

impl fmt::Debug for ReductiveFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ReductiveFrame")
            .field("n", &self.layout.n)
            .field("p", &self.layout.p)
            .field("p_dim", &self.p_basis.len())
            .field("h_dim", &self.h_basis.len())
            .finish()
    }
}

fn unit(size: usize, row: usize, col: usize) -> DMatrix<C64> {
    let mut m = DMatrix::zeros(size, size);
    m[(row, col)] = C64::new(1.0, 0.0);
    m
}

/// `(p, h)` bases of one factor `u(N) = u(N−1) ⊕ p_N`, `N = m + 1`.
fn factor_bases(m: usize) -> (Vec<DMatrix<C64>>, Vec<DMatrix<C64>>) {
    let size = m + 1;
    let i = C64::new(0.0, 1.0);
    let e = |r, c| unit(size, r, c);
    // Z_{νμ} = E_{νμ} − E_{μν},  T_{νμ} = E_{νμ} + E_{μν}
    let z = |nu, mu| e(nu, mu) - e(mu, nu);
    let t = |nu, mu| e(nu, mu) + e(mu, nu);

    let mut p = vec![t(0, 0) * (i * 0.5)];
    for nu in 1..=m {
        p.push(z(nu, 0));
        p.push(t(nu, 0) * i);
    }

    let mut h = Vec::with_capacity(m * m);
    for nu in 1..=m {
        for mu in 1..nu {
            h.push(z(nu, mu));
            h.push(t(nu, mu) * i);
        }
        h.push(e(nu, nu) * i);
    }
    (p, h)
}

/// Builds the frame `X¹, Y¹₁..Y¹₂ₙ, X², Y²₁..Y²₂ₚ` of `p` and a basis of
/// `h = u(n) ⊕ u(p)`.
pub fn build_frame(n: usize, p: usize) -> Result<ReductiveFrame> {
    let layout = BasisLayout::new(n, p)?;
    let (p1, h1) = factor_bases(n);
    let (p2, h2) = factor_bases(p);
    let zero1 = || DMatrix::<C64>::zeros(n + 1, n + 1);
    let zero2 = || DMatrix::<C64>::zeros(p + 1, p + 1);
    let first = |m: DMatrix<C64>| AlgebraElement {
        block1: m,
        block2: zero2(),
    };
    let second = |m: DMatrix<C64>| AlgebraElement {
        block1: zero1(),
        block2: m,
    };

    let p_basis: Vec<_> = p1
        .into_iter()
        .map(first)
        .chain(p2.into_iter().map(second))
        .collect();
    let h_basis: Vec<_> = h1
        .into_iter()
        .map(first)
        .chain(h2.into_iter().map(second))
        .collect();
    debug_assert_eq!(p_basis.len(), layout.dim());
    debug_assert_eq!(h_basis.len(), layout.h_dim());

    let columns: Vec<DVector<f64>> = p_basis
        .iter()
        .chain(h_basis.iter())
        .map(AlgebraElement::real_coords)
        .collect();
    let combined = DMatrix::from_columns(&columns);
    let lu = combined.clone().lu();

    Ok(ReductiveFrame {
        layout,
        p_basis,
        h_basis,
        combined,
        lu,
    })
}

impl ReductiveFrame {
    pub fn layout(&self) -> BasisLayout {
        self.layout
    }

    pub fn p_basis(&self) -> &[AlgebraElement] {
        &self.p_basis
    }

    pub fn h_basis(&self) -> &[AlgebraElement] {
        &self.h_basis
    }

    pub fn x1(&self) -> &AlgebraElement {
        &self.p_basis[self.layout.x1()]
    }

    pub fn y1(&self, k: usize) -> &AlgebraElement {
        &self.p_basis[self.layout.y1(k)]
    }

    pub fn x2(&self) -> &AlgebraElement {
        &self.p_basis[self.layout.x2()]
    }

    pub fn y2(&self, k: usize) -> &AlgebraElement {
        &self.p_basis[self.layout.y2(k)]
    }

    /// Change-of-basis matrix from `p ∪ h` coefficients to real matrix
    /// coordinates; square of size `dim g`.
    pub fn change_of_basis(&self) -> &DMatrix<f64> {
        &self.combined
    }

    /// Coefficients of `a` over `p_basis` followed by `h_basis`.
    pub fn decompose(&self, a: &AlgebraElement) -> Result<(DVector<f64>, DVector<f64>)> {
        let (s1, s2) = a.sizes();
        if s1 != self.layout.n + 1 || s2 != self.layout.p + 1 {
            return Err(Error::SizeMismatch {
                left1: s1,
                left2: s2,
                right1: self.layout.n + 1,
                right2: self.layout.p + 1,
            });
        }
        let scale = a.max_abs().max(1.0);
        let defect = a.skew_hermitian_defect();
        if defect > SPAN_RESIDUAL_TOL * scale {
            return Err(Error::OutsideSpan(defect));
        }
        let coeffs = self
            .lu
            .solve(&a.real_coords())
            .ok_or(Error::OutsideSpan(f64::INFINITY))?;
        let d = self.layout.dim();
        let p_part = coeffs.rows(0, d).into_owned();
        let h_part = coeffs.rows(d, self.layout.h_dim()).into_owned();
        Ok((p_part, h_part))
    }

    pub fn project_p(&self, a: &AlgebraElement) -> Result<DVector<f64>> {
        self.decompose(a).map(|(p, _)| p)
    }

    pub fn project_h(&self, a: &AlgebraElement) -> Result<DVector<f64>> {
        self.decompose(a).map(|(_, h)| h)
    }

    /// `Σ coeffs_i · p_basis_i`.
    pub fn p_element(&self, coeffs: &DVector<f64>) -> AlgebraElement {
        combine(&self.p_basis, coeffs, self.layout)
    }

    /// `Σ coeffs_k · h_basis_k`.
    pub fn h_element(&self, coeffs: &DVector<f64>) -> AlgebraElement {
        combine(&self.h_basis, coeffs, self.layout)
    }

    /// Structure constants of the bracket restricted to `p × p` and `h × p`.
    pub fn structure_constants(&self) -> Result<StructureConstants> {
        let d = self.layout.dim();
        let hd = self.layout.h_dim();
        let mut p_bracket = Vec::with_capacity(d * d);
        let mut h_bracket = Vec::with_capacity(d * d);
        for ei in &self.p_basis {
            for ej in &self.p_basis {
                let (pp, hh) = self.decompose(&ei.bracket(ej)?)?;
                p_bracket.push(pp);
                h_bracket.push(hh);
            }
        }
        let mut h_action = Vec::with_capacity(hd);
        let mut reductivity_defect: f64 = 0.0;
        for w in &self.h_basis {
            let mut m = DMatrix::zeros(d, d);
            for (j, v) in self.p_basis.iter().enumerate() {
                let (pp, hh) = self.decompose(&w.bracket(v)?)?;
                reductivity_defect = reductivity_defect.max(hh.amax());
                m.set_column(j, &pp);
            }
            h_action.push(m);
        }
        Ok(StructureConstants {
            layout: self.layout,
            p_bracket,
            h_bracket,
            h_action,
            reductivity_defect,
        })
    }
}

fn combine(basis: &[AlgebraElement], coeffs: &DVector<f64>, layout: BasisLayout) -> AlgebraElement {
    assert_eq!(basis.len(), coeffs.len(), "coefficient vector length");
    basis
        .iter()
        .zip(coeffs.iter())
        .fold(AlgebraElement::zero(layout.n, layout.p), |acc, (b, &x)| {
            &acc + &(b * x)
        })
}

/// Bracket data in frame coordinates.
///
/// `[e_i, e_j] = Σ_k P^k_{ij} e_k + Σ_l Q^l_{ij} w_l` for `e` in `p` and `w`
/// in `h`; `h_action[l]` is the matrix of `[w_l, ·]` acting on `p`.
#[derive(Debug, Clone)]
pub struct StructureConstants {
    layout: BasisLayout,
    p_bracket: Vec<DVector<f64>>,
    h_bracket: Vec<DVector<f64>>,
    h_action: Vec<DMatrix<f64>>,
    reductivity_defect: f64,
}

impl StructureConstants {
    pub fn layout(&self) -> BasisLayout {
        self.layout
    }

    pub fn dim(&self) -> usize {
        self.layout.dim()
    }

    /// `[e_i, e_j]_p` over `p_basis`.
    pub fn p_bracket(&self, i: usize, j: usize) -> &DVector<f64> {
        &self.p_bracket[i * self.dim() + j]
    }

    /// `[e_i, e_j]_h` over `h_basis`.
    pub fn h_bracket(&self, i: usize, j: usize) -> &DVector<f64> {
        &self.h_bracket[i * self.dim() + j]
    }

    /// Matrix of `[w_l, ·]` on `p`.
    pub fn h_action(&self, l: usize) -> &DMatrix<f64> {
        &self.h_action[l]
    }

    /// Largest `h`-component of any `[w, e]`; zero for a reductive split.
    pub fn reductivity_defect(&self) -> f64 {
        self.reductivity_defect
    }

    /// `[x, y]_p` for coefficient vectors over `p_basis`.
    pub fn bracket_p(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        self.bilinear(x, y, &self.p_bracket, self.dim())
    }

    /// `[x, y]_h` for coefficient vectors over `p_basis`.
    pub fn bracket_h(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        self.bilinear(x, y, &self.h_bracket, self.layout.h_dim())
    }

    /// Matrix of `[w, ·]` on `p` for `w` given over `h_basis`.
    pub fn ad_h(&self, w: &DVector<f64>) -> DMatrix<f64> {
        let d = self.dim();
        self.h_action
            .iter()
            .zip(w.iter())
            .fold(DMatrix::zeros(d, d), |acc, (m, &wl)| acc + m * wl)
    }

    fn bilinear(
        &self,
        x: &DVector<f64>,
        y: &DVector<f64>,
        table: &[DVector<f64>],
        out_dim: usize,
    ) -> DVector<f64> {
        let d = self.dim();
        let mut out = DVector::zeros(out_dim);
        for i in 0..d {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..d {
                if y[j] == 0.0 {
                    continue;
                }
                out.axpy(x[i] * y[j], &table[i * d + j], 1.0);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn dimensions() {
        let f = build_frame(1, 1).unwrap();
        assert_eq!(f.p_basis().len(), 6);
        assert_eq!(f.h_basis().len(), 2);

        let f = build_frame(2, 3).unwrap();
        let l = f.layout();
        assert_eq!(l.dim(), 12);
        assert_eq!(l.g_dim(), 25);
        assert_eq!(l.h_dim(), 13);
        assert_eq!(f.change_of_basis().nrows(), 25);
        assert_eq!(f.change_of_basis().rank(1e-10), 25);
    }

    #[test]
    fn rejects_degenerate_factors() {
        assert!(matches!(build_frame(0, 1), Err(Error::InvalidParams(_))));
        assert!(matches!(build_frame(2, 0), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn x1_is_i_e00() {
        let f = build_frame(1, 1).unwrap();
        let mut expected = DMatrix::zeros(2, 2);
        expected[(0, 0)] = c(0.0, 1.0);
        assert_eq!(f.x1().block1, expected);
        assert_eq!(f.x1().block2, DMatrix::zeros(2, 2));
    }

    #[test]
    fn x1_y1_bracket_is_minus_y2() {
        for n in 1..=3 {
            let f = build_frame(n, 1).unwrap();
            let b = f.x1().bracket(f.y1(1)).unwrap();
            let diff = &b + f.y1(2);
            assert!(diff.max_abs() < 1e-15, "n = {n}");
        }
    }

    #[test]
    fn factors_commute() {
        let f = build_frame(2, 2).unwrap();
        let b = f.x1().bracket(f.x2()).unwrap();
        assert_eq!(b.max_abs(), 0.0);
        let b = f.y1(3).bracket(f.y2(2)).unwrap();
        assert_eq!(b.max_abs(), 0.0);
    }

    #[test]
    fn bracket_with_itself_vanishes() {
        let f = build_frame(2, 1).unwrap();
        let a = &(f.y1(1) * 0.3) + &(f.h_basis()[2].clone());
        assert_eq!(a.bracket(&a).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn bracket_size_mismatch() {
        let a = AlgebraElement::zero(1, 1);
        let b = AlgebraElement::zero(2, 1);
        assert!(matches!(a.bracket(&b), Err(Error::SizeMismatch { .. })));
    }

    #[test]
    fn new_rejects_non_skew() {
        let mut m = DMatrix::zeros(2, 2);
        m[(0, 1)] = c(1.0, 0.0);
        let err = AlgebraElement::new(m, DMatrix::zeros(2, 2)).unwrap_err();
        assert!(matches!(err, Error::NotSkewHermitian(_)));
    }

    #[test]
    fn basis_projects_to_unit_vector() {
        let f = build_frame(2, 2).unwrap();
        let (pp, hh) = f.decompose(f.y1(3)).unwrap();
        let mut expected = DVector::zeros(10);
        expected[3] = 1.0;
        assert!((pp - expected).amax() < 1e-14);
        assert!(hh.amax() < 1e-14);
    }

    #[test]
    fn horizontal_bracket_has_h_component() {
        let f = build_frame(1, 1).unwrap();
        let b = f.y1(1).bracket(f.y1(2)).unwrap();
        let (pp, hh) = f.decompose(&b).unwrap();
        // [Y₁, Y₂] = −2 i E₀₀ + 2 i E₁₁ = −2 X¹ + 2 (iE₁₁)
        assert!((pp[0] + 2.0).abs() < 1e-14);
        assert!((hh[0] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn projection_rejects_hermitian_input() {
        let f = build_frame(1, 1).unwrap();
        let mut m = DMatrix::zeros(2, 2);
        m[(0, 0)] = c(1.0, 0.0);
        let bad = AlgebraElement {
            block1: m,
            block2: DMatrix::zeros(2, 2),
        };
        assert!(matches!(f.project_p(&bad), Err(Error::OutsideSpan(_))));
    }

    #[test]
    fn reductivity() {
        for (n, p) in [(1, 1), (2, 1), (2, 3)] {
            let f = build_frame(n, p).unwrap();
            let sc = f.structure_constants().unwrap();
            assert!(sc.reductivity_defect() <= 1e-12, "({n}, {p})");
        }
    }

    #[test]
    fn labels() {
        let l = BasisLayout::new(2, 1).unwrap();
        let labels: Vec<_> = (0..l.dim()).map(|i| l.label(i)).collect();
        assert_eq!(
            labels,
            ["X1", "Y1_1", "Y1_2", "Y1_3", "Y1_4", "X2", "Y2_1", "Y2_2"]
        );
        assert_eq!(l.y2(2), 7);
        assert_eq!(l.second_factor(), 6..8);
    }
}
