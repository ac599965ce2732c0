//! Multi-start local search for the extremes of `K(X ∧ Y)` over orthonormal
//! pairs in a coordinate subspace of the Z-frame.
//!
//! A pair `(X, Y)` always stays orthonormal. Each iteration tries a step
//! along the projected gradient (a rotation of the plane towards the
//! gradient directions, followed by Gram–Schmidt), then a rotation by the
//! same angle in a random coordinate 2-subspace. If neither improves the
//! objective the angle decays by `STEP_DECAY`; the restart has converged
//! once the angle falls below `tol`.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::curvature::{pair_index, CurvatureOperator};
use crate::{Error, Result};

const INITIAL_STEP: f64 = 0.25;
const MAX_STEP: f64 = 1.0;
const STEP_DECAY: f64 = 0.7;
const STEP_GROWTH: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    /// Random starting planes, in addition to every coordinate plane.
    pub restarts: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            restarts: 64,
            max_iters: 2000,
            tol: 1e-9,
            seed: 0,
        }
    }
}

impl SearchOptions {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::InvalidOptions("restarts must be at least 1".into()));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidOptions("max_iters must be at least 1".into()));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::InvalidOptions(format!(
                "tol must be finite and positive (got {})",
                self.tol
            )));
        }
        Ok(())
    }
}

/// An orthonormal pair spanning a plane, in Z-coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanePair {
    pub x: DVector<f64>,
    pub y: DVector<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Minimize,
    Maximize,
}

impl Direction {
    fn sign(self) -> f64 {
        match self {
            Direction::Minimize => -1.0,
            Direction::Maximize => 1.0,
        }
    }
}

/// Result of a single start.
#[derive(Debug, Clone, PartialEq)]
pub struct RestartOutcome {
    pub value: f64,
    pub plane: PlanePair,
    pub iterations: usize,
    pub converged: bool,
}

/// Best value over all starts for one direction.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub value: f64,
    pub plane: PlanePair,
    /// Whether the winning start converged.
    pub converged: bool,
    /// Starts that hit `max_iters`.
    pub unconverged_starts: usize,
    pub starts: usize,
}

/// Sparse evaluation of `K` and its gradient.
struct Objective<'a> {
    op: &'a CurvatureOperator,
    dim: usize,
}

impl Objective<'_> {
    fn bivector(&self, x: &DVector<f64>, y: &DVector<f64>) -> Vec<f64> {
        let d = self.dim;
        let mut b = Vec::with_capacity(d * (d - 1) / 2);
        for i in 0..d {
            for j in i + 1..d {
                b.push(x[i] * y[j] - x[j] * y[i]);
            }
        }
        b
    }

    fn apply(&self, b: &[f64]) -> Vec<f64> {
        let mut r = vec![0.0; b.len()];
        for &(row, col, v) in self.op.sparse_entries() {
            r[row] += v * b[col];
        }
        r
    }

    fn value(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        let b = self.bivector(x, y);
        let r = self.apply(&b);
        b.iter().zip(&r).map(|(u, v)| u * v).sum()
    }

    /// `(K, ∂K/∂x, ∂K/∂y)`: with `C` the antisymmetric matrix of `R b`,
    /// `∂K/∂x = 2 C y` and `∂K/∂y = −2 C x`.
    fn value_and_gradient(
        &self,
        x: &DVector<f64>,
        y: &DVector<f64>,
    ) -> (f64, DVector<f64>, DVector<f64>) {
        let d = self.dim;
        let b = self.bivector(x, y);
        let r = self.apply(&b);
        let value = b.iter().zip(&r).map(|(u, v)| u * v).sum();
        let mut gx = DVector::zeros(d);
        let mut gy = DVector::zeros(d);
        for i in 0..d {
            for j in i + 1..d {
                let cij = r[pair_index(d, i, j)];
                if cij == 0.0 {
                    continue;
                }
                // C_ij = cij, C_ji = −cij
                gx[i] += 2.0 * cij * y[j];
                gx[j] -= 2.0 * cij * y[i];
                gy[i] -= 2.0 * cij * x[j];
                gy[j] += 2.0 * cij * x[i];
            }
        }
        (value, gx, gy)
    }
}

/// Gram–Schmidt; `None` if the pair has collapsed.
fn orthonormalize(x: &DVector<f64>, y: &DVector<f64>) -> Option<(DVector<f64>, DVector<f64>)> {
    let xn = x.norm();
    if xn < 1e-12 {
        return None;
    }
    let x = x / xn;
    let y = y - &x * x.dot(y);
    let yn = y.norm();
    if yn < 1e-12 {
        return None;
    }
    Some((x, y / yn))
}

fn project_out(v: &mut DVector<f64>, x: &DVector<f64>, y: &DVector<f64>, support: &[usize]) {
    let px = v.dot(x);
    let py = v.dot(y);
    v.axpy(-px, x, 1.0);
    v.axpy(-py, y, 1.0);
    // Directions outside the support are frozen.
    let mut masked = DVector::zeros(v.len());
    for &k in support {
        masked[k] = v[k];
    }
    *v = masked;
}

fn rotate(v: &DVector<f64>, i: usize, j: usize, angle: f64) -> DVector<f64> {
    let (s, c) = angle.sin_cos();
    let mut out = v.clone();
    out[i] = c * v[i] - s * v[j];
    out[j] = s * v[i] + c * v[j];
    out
}

fn local_search(
    obj: &Objective<'_>,
    support: &[usize],
    start: PlanePair,
    direction: Direction,
    opts: &SearchOptions,
    rng: &mut ChaCha8Rng,
) -> RestartOutcome {
    let sign = direction.sign();
    let PlanePair { mut x, mut y } = start;
    let mut f = sign * obj.value(&x, &y);
    let mut step = INITIAL_STEP;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < opts.max_iters {
        iterations += 1;
        let (_, mut gx, mut gy) = obj.value_and_gradient(&x, &y);
        gx *= sign;
        gy *= sign;
        project_out(&mut gx, &x, &y, support);
        project_out(&mut gy, &x, &y, support);
        let gnorm = (gx.norm_squared() + gy.norm_squared()).sqrt();

        let mut improved = false;
        if gnorm > 0.0 {
            let scale = step / gnorm;
            if let Some((nx, ny)) = orthonormalize(&(&x + &gx * scale), &(&y + &gy * scale)) {
                let nf = sign * obj.value(&nx, &ny);
                if nf > f {
                    x = nx;
                    y = ny;
                    f = nf;
                    improved = true;
                    step = (step * STEP_GROWTH).min(MAX_STEP);
                }
            }
        }
        if !improved && support.len() > 2 {
            let a = support[rng.random_range(0..support.len())];
            let mut b = support[rng.random_range(0..support.len() - 1)];
            if b == a {
                b = support[support.len() - 1];
            }
            let angle = if rng.random::<bool>() { step } else { -step };
            let nx = rotate(&x, a, b, angle);
            let ny = rotate(&y, a, b, angle);
            let nf = sign * obj.value(&nx, &ny);
            if nf > f {
                x = nx;
                y = ny;
                f = nf;
                improved = true;
            }
        }
        if !improved {
            step *= STEP_DECAY;
            if step < opts.tol {
                converged = true;
                break;
            }
        }
    }

    RestartOutcome {
        value: sign * f,
        plane: PlanePair { x, y },
        iterations,
        converged,
    }
}

fn unit(dim: usize, i: usize) -> DVector<f64> {
    let mut v = DVector::zeros(dim);
    v[i] = 1.0;
    v
}

/// Starting planes: every coordinate plane inside `support`, then
/// `opts.restarts` random planes drawn from a generator seeded with
/// `opts.seed`.
fn starting_planes(dim: usize, support: &[usize], opts: &SearchOptions) -> Vec<PlanePair> {
    let mut starts = Vec::new();
    for (k, &i) in support.iter().enumerate() {
        for &j in &support[k + 1..] {
            starts.push(PlanePair {
                x: unit(dim, i),
                y: unit(dim, j),
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    while starts.len() < opts.restarts + support.len() * (support.len() - 1) / 2 {
        let mut draw = || {
            let mut v = DVector::zeros(dim);
            for &k in support {
                v[k] = rng.random_range(-1.0..1.0);
            }
            v
        };
        let (x, y) = (draw(), draw());
        if let Some((x, y)) = orthonormalize(&x, &y) {
            starts.push(PlanePair { x, y });
        }
    }
    starts
}

/// Searches planes spanned by the Z-vectors listed in `support` for the
/// extreme of `K` in `direction`.
///
/// Starts run in parallel; each has its own generator stream, and the
/// reduction walks outcomes in start order, so the result does not depend on
/// scheduling.
pub fn search(
    op: &CurvatureOperator,
    support: &[usize],
    direction: Direction,
    opts: &SearchOptions,
) -> Result<SearchResult> {
    opts.validate()?;
    let dim = op.dim();
    if support.len() < 2 || support.iter().any(|&k| k >= dim) {
        return Err(Error::InvalidOptions(format!(
            "support must list at least two frame indices below {dim}"
        )));
    }
    let obj = Objective { op, dim };
    let starts = starting_planes(dim, support, opts);
    let stream_base = match direction {
        Direction::Minimize => 0,
        Direction::Maximize => 1,
    };
    let outcomes: Vec<RestartOutcome> = starts
        .into_par_iter()
        .enumerate()
        .map(|(k, start)| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(2 * k as u64 + stream_base);
            local_search(&obj, support, start, direction, opts, &mut rng)
        })
        .collect();

    let sign = direction.sign();
    let unconverged_starts = outcomes.iter().filter(|o| !o.converged).count();
    let n_starts = outcomes.len();
    let best = outcomes
        .into_iter()
        .reduce(|best, o| {
            if sign * o.value > sign * best.value {
                o
            } else {
                best
            }
        })
        .expect("at least one start");
    // Report the dense value for the winning plane.
    let value = op.sectional_of_pair(&best.plane.x, &best.plane.y);
    Ok(SearchResult {
        value,
        plane: best.plane,
        converged: best.converged,
        unconverged_starts,
        starts: n_starts,
    })
}
