//! Closed-form bounds for sectional curvature over the `(a, c)` half-plane
//! and numerical estimates of the true extremes.
//!
//! The half-plane `c > 0` splits into three regions:
//!
//! * `DISK`: `a² + (c − ½)² ≤ ¼`,
//! * `MID`: the rest of `c < 1`,
//! * `HIGH`: `c ≥ 1`.
//!
//! Each region has its own formulas for `K_min` and `K_max`. The point
//! `(0, 1)` lies on both the disk and the line `c = 1`; it is classified
//! `HIGH`, and both branches give the same values there.

mod search;

pub use search::{search, Direction, PlanePair, RestartOutcome, SearchOptions, SearchResult};

use std::fmt;

use crate::curvature::CurvatureOperator;
use crate::hermitian::StructureParams;
use crate::tolerances::BRANCH_CONTINUITY_TOL;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegionLabel {
    Disk,
    Mid,
    High,
}

impl RegionLabel {
    pub const ALL: [RegionLabel; 3] = [RegionLabel::Disk, RegionLabel::Mid, RegionLabel::High];

    pub fn as_str(self) -> &'static str {
        match self {
            RegionLabel::Disk => "DISK",
            RegionLabel::Mid => "MID",
            RegionLabel::High => "HIGH",
        }
    }
}

impl fmt::Display for RegionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Region of `(a, c)`. Ties on `c = 1` go to `HIGH`; the disk boundary
/// belongs to `DISK`.
pub fn classify_region(a: f64, c: f64) -> RegionLabel {
    if c >= 1.0 {
        RegionLabel::High
    } else if a * a + (c - 0.5).powi(2) <= 0.25 {
        RegionLabel::Disk
    } else {
        RegionLabel::Mid
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoremBounds {
    pub k_min: f64,
    pub k_max: f64,
    pub region: RegionLabel,
}

/// Evaluates the formulas of `region` at `(a, c)` whether or not the point
/// belongs to it. Used for boundary comparisons.
pub fn theorem_bounds_branch(a: f64, c: f64, region: RegionLabel) -> (f64, f64) {
    let q = a * a + c * c;
    let aa = (a / c).abs();
    match region {
        RegionLabel::Disk => {
            let lo =
                (5.0 * c - 3.0 - (16.0 * a * a - 18.0 * c + 9.0 * c * c + 9.0).sqrt()) / (2.0 * c);
            let hi = (5.0 * c - 3.0 * q
                + (16.0 * a * a + 9.0 * c * c - 18.0 * c * q + 9.0 * q * q).sqrt())
                / (2.0 * c);
            ((-aa).min(lo), (1.0 / c).max(hi))
        }
        RegionLabel::Mid => {
            let lo = (8.0 * c - 3.0 * (1.0 + q) - (9.0 * (q - 1.0).powi(2) + 16.0 * a * a).sqrt())
                / (2.0 * c);
            ((-aa).min(lo), (q / c).max(1.0 + 2.0 * aa).max(1.0 / c))
        }
        RegionLabel::High => {
            let lo = (5.0 * c
                - 3.0 * q
                - (16.0 * a * a + 9.0 * c * c - 18.0 * c * q + 9.0 * q * q).sqrt())
                / (2.0 * c);
            let hi =
                (5.0 * c - 3.0 + (16.0 * a * a - 18.0 * c + 9.0 * c * c + 9.0).sqrt()) / (2.0 * c);
            ((-aa).min(lo), (q / c).max(hi))
        }
    }
}

pub fn theorem_bounds(params: &StructureParams) -> TheoremBounds {
    let (a, c) = (params.a(), params.c());
    let region = classify_region(a, c);
    let (k_min, k_max) = theorem_bounds_branch(a, c, region);
    TheoremBounds {
        k_min,
        k_max,
        region,
    }
}

/// Two adjacent branches disagreeing at a boundary point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchMismatch {
    pub a: f64,
    pub c: f64,
    pub regions: (RegionLabel, RegionLabel),
    pub k_min: (f64, f64),
    pub k_max: (f64, f64),
}

/// Compares adjacent branches at `samples` points on each region boundary:
/// the disk circle below `c = 1` (DISK against MID) and the line `c = 1`
/// for `|a| ≤ a_max` (MID against HIGH, and all three at the tangency point).
pub fn branch_mismatches(samples: usize, a_max: f64) -> Vec<BranchMismatch> {
    let mut points = Vec::new();
    for k in 0..samples {
        // θ ∈ (0, π]: the whole circle minus the tangency point, left half
        // mirrored by symmetry in a.
        let theta = std::f64::consts::PI * (k + 1) as f64 / samples as f64;
        let (a, c) = (0.5 * theta.sin(), 0.5 + 0.5 * theta.cos());
        if c > 0.0 {
            points.push((a, c, RegionLabel::Disk, RegionLabel::Mid));
            points.push((-a, c, RegionLabel::Disk, RegionLabel::Mid));
        }
    }
    for k in 0..samples {
        let a = if samples > 1 {
            -a_max + 2.0 * a_max * k as f64 / (samples - 1) as f64
        } else {
            0.0
        };
        points.push((a, 1.0, RegionLabel::Mid, RegionLabel::High));
    }
    points.push((0.0, 1.0, RegionLabel::Disk, RegionLabel::High));
    points.push((0.0, 1.0, RegionLabel::Disk, RegionLabel::Mid));

    points
        .into_iter()
        .filter_map(|(a, c, r1, r2)| {
            let b1 = theorem_bounds_branch(a, c, r1);
            let b2 = theorem_bounds_branch(a, c, r2);
            let off = (b1.0 - b2.0).abs().max((b1.1 - b2.1).abs());
            (off > BRANCH_CONTINUITY_TOL).then_some(BranchMismatch {
                a,
                c,
                regions: (r1, r2),
                k_min: (b1.0, b2.0),
                k_max: (b1.1, b2.1),
            })
        })
        .collect()
}

/// Numerical minimum and maximum of `K` over all planes.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericExtremes {
    pub min: SearchResult,
    pub max: SearchResult,
}

impl NumericExtremes {
    pub fn k_lo(&self) -> f64 {
        self.min.value
    }

    pub fn k_hi(&self) -> f64 {
        self.max.value
    }

    pub fn converged(&self) -> bool {
        self.min.converged && self.max.converged
    }

    pub fn unconverged_starts(&self) -> usize {
        self.min.unconverged_starts + self.max.unconverged_starts
    }
}

/// Extremes over planes inside the span of the Z-vectors in `support`.
pub fn numeric_extremes_on(
    op: &CurvatureOperator,
    support: &[usize],
    opts: &SearchOptions,
) -> Result<NumericExtremes> {
    Ok(NumericExtremes {
        min: search(op, support, Direction::Minimize, opts)?,
        max: search(op, support, Direction::Maximize, opts)?,
    })
}

pub fn numeric_extremes(op: &CurvatureOperator, opts: &SearchOptions) -> Result<NumericExtremes> {
    let all: Vec<usize> = (0..op.dim()).collect();
    numeric_extremes_on(op, &all, opts)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtremesReport {
    pub params: StructureParams,
    pub region: RegionLabel,
    pub k_min_closed: f64,
    pub k_max_closed: f64,
    pub k_lo_numeric: f64,
    pub k_hi_numeric: f64,
    pub argmin_plane: PlanePair,
    pub argmax_plane: PlanePair,
    /// `k_lo_numeric − k_min_closed`.
    pub gap_low: f64,
    /// `k_max_closed − k_hi_numeric`.
    pub gap_high: f64,
    pub converged: bool,
    pub unconverged_starts: usize,
}

impl ExtremesReport {
    pub fn contained(&self, tol: f64) -> bool {
        self.gap_low >= -tol && self.gap_high >= -tol
    }
}

pub fn extremes_report(op: &CurvatureOperator, opts: &SearchOptions) -> Result<ExtremesReport> {
    let bounds = theorem_bounds(op.params());
    let num = numeric_extremes(op, opts)?;
    Ok(ExtremesReport {
        params: *op.params(),
        region: bounds.region,
        k_min_closed: bounds.k_min,
        k_max_closed: bounds.k_max,
        k_lo_numeric: num.k_lo(),
        k_hi_numeric: num.k_hi(),
        gap_low: num.k_lo() - bounds.k_min,
        gap_high: bounds.k_max - num.k_hi(),
        converged: num.converged(),
        unconverged_starts: num.unconverged_starts(),
        argmin_plane: num.min.plane,
        argmax_plane: num.max.plane,
    })
}

/// Restricted extremes of one factor against an interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorCheck {
    pub k_lo: f64,
    pub k_hi: f64,
    pub bound_lo: f64,
    pub bound_hi: f64,
}

impl FactorCheck {
    pub fn holds(&self, tol: f64) -> bool {
        self.k_lo >= self.bound_lo - tol && self.k_hi <= self.bound_hi + tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SecondFactorReading {
    /// Upper bound `max(4 − 3(a² + c²)/c, 1)`.
    SumOfSquares,
    /// Upper bound `max(4 − 3/c, 1)`, as printed.
    Printed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockBoundsReport {
    pub first: FactorCheck,
    /// Second factor against `[min(4 − 3q/c, 1), max(4 − 3q/c, 1)]`,
    /// `q = a² + c²`.
    pub second: FactorCheck,
    /// Second factor against `[min(4 − 3q/c, 1), max(4 − 3/c, 1)]`.
    pub second_printed: FactorCheck,
}

impl BlockBoundsReport {
    /// First factor and the `(a² + c²)` reading of the second factor.
    pub fn holds(&self, tol: f64) -> bool {
        self.first.holds(tol) && self.second.holds(tol)
    }

    /// Readings of the second-factor bound that the numerics satisfy.
    pub fn satisfied_readings(&self, tol: f64) -> Vec<SecondFactorReading> {
        let mut out = Vec::new();
        if self.second.holds(tol) {
            out.push(SecondFactorReading::SumOfSquares);
        }
        if self.second_printed.holds(tol) {
            out.push(SecondFactorReading::Printed);
        }
        out
    }
}

fn interval(t: f64) -> (f64, f64) {
    (t.min(1.0), t.max(1.0))
}

/// Extremes of `K` restricted to planes in one horizontal factor, compared
/// with the bounds inherited from complex projective space.
pub fn block_bounds_check(
    op: &CurvatureOperator,
    opts: &SearchOptions,
) -> Result<BlockBoundsReport> {
    let params = op.params();
    let l = params.layout();
    let c = params.c();
    let q = params.q();
    let first: Vec<usize> = l.first_factor().collect();
    let second: Vec<usize> = l.second_factor().collect();
    let e1 = numeric_extremes_on(op, &first, opts)?;
    let e2 = numeric_extremes_on(op, &second, opts)?;

    let (lo1, hi1) = interval(4.0 - 3.0 / c);
    let (lo2, hi2) = interval(4.0 - 3.0 * q / c);
    let (_, hi_printed) = interval(4.0 - 3.0 / c);
    let f2 = |bound_hi| FactorCheck {
        k_lo: e2.k_lo(),
        k_hi: e2.k_hi(),
        bound_lo: lo2,
        bound_hi,
    };
    Ok(BlockBoundsReport {
        first: FactorCheck {
            k_lo: e1.k_lo(),
            k_hi: e1.k_hi(),
            bound_lo: lo1,
            bound_hi: hi1,
        },
        second: f2(hi2),
        second_printed: f2(hi_printed),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::{curvature_operator, Bivector};
    use crate::HermitianSpace;

    fn op(n: usize, p: usize, a: f64, c: f64) -> CurvatureOperator {
        let s = HermitianSpace::new(StructureParams::new(n, p, a, c).unwrap()).unwrap();
        curvature_operator(&s)
    }

    fn quick() -> SearchOptions {
        SearchOptions {
            restarts: 16,
            ..SearchOptions::default()
        }
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify_region(0.0, 0.5), RegionLabel::Disk);
        assert_eq!(classify_region(0.6, 0.5), RegionLabel::Mid);
        assert_eq!(classify_region(5.0, 1.0), RegionLabel::High);
        assert_eq!(classify_region(0.0, 1.0), RegionLabel::High);
        assert_eq!(classify_region(0.5, 0.5), RegionLabel::Disk);
        assert_eq!(RegionLabel::Mid.to_string(), "MID");
    }

    #[test]
    fn round_product_bounds() {
        let b = theorem_bounds(&StructureParams::new(1, 1, 0.0, 1.0).unwrap());
        assert_eq!(b.region, RegionLabel::High);
        assert_eq!(b.k_min, 0.0);
        assert_eq!(b.k_max, 1.0);
        let disk = theorem_bounds_branch(0.0, 1.0, RegionLabel::Disk);
        assert_eq!(disk, (0.0, 1.0));
    }

    #[test]
    fn mid_upper_candidate() {
        let b = theorem_bounds(&StructureParams::new(1, 1, 2.0, 0.5).unwrap());
        assert_eq!(b.region, RegionLabel::Mid);
        assert_eq!(b.k_max, 9.0);
    }

    #[test]
    fn bounds_are_even_in_a() {
        for &(a, c) in &[(0.3, 0.4), (1.7, 0.2), (2.5, 3.0), (0.1, 0.95)] {
            let p = theorem_bounds(&StructureParams::new(1, 1, a, c).unwrap());
            let m = theorem_bounds(&StructureParams::new(1, 1, -a, c).unwrap());
            assert_eq!(p, m);
        }
    }

    #[test]
    fn branches_agree_on_boundaries() {
        let found = branch_mismatches(200, 3.0);
        assert!(found.is_empty(), "{found:?}");
    }

    #[test]
    fn round_product_numeric() {
        let r = extremes_report(&op(1, 1, 0.0, 1.0), &quick()).unwrap();
        assert!(r.k_lo_numeric.abs() < 1e-6);
        assert!((r.k_hi_numeric - 1.0).abs() < 1e-6);
        assert!(r.contained(1e-6));
    }

    #[test]
    fn extremes_bracket_first_coordinate_plane() {
        let o = op(1, 1, 0.9, 0.35);
        let k01 = o.sectional(&Bivector::basis(6, 0, 1)).unwrap();
        let r = extremes_report(&o, &quick()).unwrap();
        assert!(r.k_lo_numeric <= k01 + 1e-12 && k01 <= r.k_hi_numeric + 1e-12);
        assert!(r.contained(1e-6), "{r:?}");
    }

    #[test]
    fn containment_at_c_two() {
        let r = extremes_report(&op(1, 1, 0.0, 2.0), &quick()).unwrap();
        assert!(r.contained(1e-6), "{r:?}");
    }

    #[test]
    fn first_factor_is_round_at_c_one() {
        let r = block_bounds_check(&op(2, 1, 0.4, 1.0), &quick()).unwrap();
        assert_eq!((r.first.bound_lo, r.first.bound_hi), (1.0, 1.0));
        assert!((r.first.k_lo - 1.0).abs() < 1e-9);
        assert!((r.first.k_hi - 1.0).abs() < 1e-9);
    }

    #[test]
    fn block_bound_examples() {
        let r = block_bounds_check(&op(2, 2, 0.0, 0.75), &quick()).unwrap();
        assert_eq!((r.first.bound_lo, r.first.bound_hi), (0.0, 1.0));
        let r = block_bounds_check(&op(2, 2, 0.0, 2.0), &quick()).unwrap();
        assert_eq!(r.second.bound_lo, -2.0);
        assert!(r.holds(1e-6), "{r:?}");
    }

    #[test]
    fn printed_reading_fails_at_half() {
        let r = block_bounds_check(&op(1, 2, 0.0, 0.5), &quick()).unwrap();
        assert!(r.second.holds(1e-6));
        assert!(!r.second_printed.holds(1e-6));
        assert_eq!(
            r.satisfied_readings(1e-6),
            vec![SecondFactorReading::SumOfSquares]
        );
    }
}
