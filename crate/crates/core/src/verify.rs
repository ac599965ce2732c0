//! The full invariant suite at one parameter point. Each check reports the
//! worst observed error against its tolerance.

use nalgebra::DMatrix;

use crate::connection::u_tensor_closed_form;
use crate::curvature::{
    curvature_operator, printed_nonzero_entries, printed_zero_entries, ricci_closed_form,
    ricci_contraction_invariant, ricci_eigenvalues, ricci_eigenvalues_closed_form,
    ricci_via_brackets, ricci_via_contraction, scalar_closed_form, scalar_via_trace,
    symmetry_defects, CurvatureOperator,
};
use crate::extremes::{
    block_bounds_check, extremes_report, BlockBoundsReport, ExtremesReport, FactorCheck,
    SearchOptions,
};
use crate::hermitian::{check_positive_associated, fundamental_form, metric_block_form};
use crate::tolerances::*;
use crate::{HermitianSpace, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub pass: bool,
    pub worst_error: f64,
    pub tol: f64,
}

impl CheckOutcome {
    fn within(name: &'static str, worst_error: f64, tol: f64) -> Self {
        Self {
            name,
            pass: worst_error <= tol,
            worst_error,
            tol,
        }
    }
}

fn max_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).amax()
}

fn max_diff_slices(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Jacobi identity on all triples of `p`-basis elements, computed in `g`.
pub fn jacobi_defect(space: &HermitianSpace) -> Result<f64> {
    let basis = space.frame().p_basis();
    let mut worst: f64 = 0.0;
    for x in basis {
        for y in basis {
            let xy = x.bracket(y)?;
            for z in basis {
                let t1 = x.bracket(&y.bracket(z)?)?;
                let t2 = y.bracket(&z.bracket(x)?)?;
                let t3 = z.bracket(&xy)?;
                worst = worst.max((&(&t1 + &t2) + &t3).max_abs());
            }
        }
    }
    Ok(worst)
}

/// `max |[ad_h, J]|` over the `h` basis.
pub fn ad_invariance_defect(space: &HermitianSpace) -> f64 {
    let j = space.complex_structure();
    let sc = space.structure();
    (0..space.params().layout().h_dim())
        .map(|l| {
            let a = sc.h_action(l);
            (a * j - j * a).amax()
        })
        .fold(0.0, f64::max)
}

/// `max |Λ(e_i) e_j − Λ(e_j) e_i − [e_i, e_j]_p|`.
pub fn torsion_defect(space: &HermitianSpace) -> f64 {
    let conn = space.connection();
    let sc = space.structure();
    let d = space.dim();
    let mut worst: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let t = conn.nomizu_basis(i).column(j)
                - conn.nomizu_basis(j).column(i)
                - sc.p_bracket(i, j);
            worst = worst.max(t.amax());
        }
    }
    worst
}

/// `max |G Λ(e_i) + Λ(e_i)ᵀ G|`.
pub fn metric_compatibility_defect(space: &HermitianSpace) -> f64 {
    let g = space.metric().matrix();
    (0..space.dim())
        .map(|i| {
            let l = space.connection().nomizu_basis(i);
            (g * l + l.transpose() * g).amax()
        })
        .fold(0.0, f64::max)
}

/// Worst deviation of the assembled operator from the closed-form nonzero
/// entries and from the closed-form zero pattern.
pub fn printed_entry_errors(op: &CurvatureOperator) -> (f64, f64) {
    let nonzero = printed_nonzero_entries(op.params())
        .iter()
        .map(|e| (op.entry(e.first.0, e.first.1, e.second.0, e.second.1) - e.value).abs())
        .fold(0.0, f64::max);
    let zero = printed_zero_entries(op.params().layout())
        .iter()
        .map(|&(f, s)| op.entry(f.0, f.1, s.0, s.1).abs())
        .fold(0.0, f64::max);
    (nonzero, zero)
}

/// Largest pairwise entry difference among the three Ricci routes over the
/// orthonormal frame.
pub fn ricci_route_discrepancy(space: &HermitianSpace) -> f64 {
    let closed = space
        .orthonormal()
        .pull_back_form(&ricci_closed_form(space.params()));
    let brackets = ricci_via_brackets(space);
    let contr = ricci_via_contraction(space);
    max_diff(&closed, &brackets)
        .max(max_diff(&closed, &contr))
        .max(max_diff(&brackets, &contr))
}

/// Checks that need no optimization.
pub fn algebraic_checks(space: &HermitianSpace) -> Result<Vec<CheckOutcome>> {
    let params = space.params();
    let layout = params.layout();
    let d = space.dim();
    let id = DMatrix::<f64>::identity(d, d);
    let j = space.complex_structure();
    let mut out = vec![
        CheckOutcome::within("jacobi", jacobi_defect(space)?, JACOBI_TOL),
        CheckOutcome::within(
            "reductivity",
            space.structure().reductivity_defect(),
            REDUCTIVITY_TOL,
        ),
        CheckOutcome::within("j_squared", (j * j + &id).amax(), STRUCTURE_TOL),
        CheckOutcome::within(
            "ad_h_invariance",
            ad_invariance_defect(space),
            AD_INVARIANCE_TOL,
        ),
    ];

    let pos = check_positive_associated(j, &fundamental_form(layout));
    out.push(CheckOutcome {
        name: "positive_associated",
        pass: pos.holds(),
        worst_error: pos.compatibility_defect,
        tol: STRUCTURE_TOL,
    });
    let min_ev = space.metric().min_eigenvalue();
    out.push(CheckOutcome {
        name: "metric_positive_definite",
        pass: min_ev > 0.0,
        worst_error: (-min_ev).max(0.0),
        tol: 0.0,
    });
    out.push(CheckOutcome::within(
        "metric_block_form",
        max_diff(space.metric().matrix(), &metric_block_form(params)),
        METRIC_BLOCK_TOL,
    ));
    let z = space.orthonormal().matrix();
    out.push(CheckOutcome::within(
        "orthonormal_frame",
        max_diff(&(z.transpose() * space.metric().matrix() * z), &id),
        STRUCTURE_TOL,
    ));

    out.push(CheckOutcome::within(
        "u_closed_form",
        space.u().max_discrepancy(&u_tensor_closed_form(params)),
        CONNECTION_TOL,
    ));
    out.push(CheckOutcome::within(
        "u_defining_identity",
        space
            .u()
            .defining_identity_defect(space.metric(), space.structure()),
        CONNECTION_TOL,
    ));
    out.push(CheckOutcome::within(
        "u_symmetry",
        space.u().symmetry_defect(),
        U_SYMMETRY_TOL,
    ));
    out.push(CheckOutcome::within(
        "torsion_free",
        torsion_defect(space),
        CONNECTION_TOL,
    ));
    out.push(CheckOutcome::within(
        "metric_compatible",
        metric_compatibility_defect(space),
        CONNECTION_TOL,
    ));

    let sym = symmetry_defects(space);
    out.push(CheckOutcome::within(
        "curvature_symmetries",
        sym.antisymmetry.max(sym.skew).max(sym.pair_symmetry),
        CURVATURE_TOL,
    ));
    out.push(CheckOutcome::within("bianchi", sym.bianchi, CURVATURE_TOL));

    let op = curvature_operator(space);
    out.push(CheckOutcome::within(
        "operator_symmetric",
        op.symmetry_defect(),
        CURVATURE_TOL,
    ));
    let (nonzero, zero) = printed_entry_errors(&op);
    out.push(CheckOutcome::within(
        "printed_entries",
        nonzero,
        CURVATURE_TOL,
    ));
    out.push(CheckOutcome::within("printed_zeros", zero, CURVATURE_TOL));

    out.push(CheckOutcome::within(
        "ricci_routes",
        ricci_route_discrepancy(space),
        RICCI_TOL,
    ));
    let closed_ev = ricci_eigenvalues_closed_form(params);
    let ev_err = max_diff_slices(&ricci_eigenvalues(&ricci_closed_form(params)), &closed_ev).max(
        max_diff_slices(
            &ricci_eigenvalues(&ricci_contraction_invariant(space)),
            &closed_ev,
        ),
    );
    out.push(CheckOutcome::within("ricci_eigenvalues", ev_err, RICCI_TOL));
    out.push(CheckOutcome::within(
        "scalar",
        (scalar_via_trace(space)? - scalar_closed_form(params)).abs(),
        RICCI_TOL,
    ));
    Ok(out)
}

/// `k_lo ≥ K_min − tol` and `k_hi ≤ K_max + tol`.
pub fn containment_outcome(r: &ExtremesReport) -> CheckOutcome {
    CheckOutcome::within(
        "containment",
        (-r.gap_low).max(-r.gap_high).max(0.0),
        CONTAINMENT_TOL,
    )
}

fn factor_violation(f: &FactorCheck) -> f64 {
    (f.bound_lo - f.k_lo).max(f.k_hi - f.bound_hi).max(0.0)
}

/// Factor-restricted extremes against their intervals, using the
/// `(a² + c²)` reading for the second factor.
pub fn block_outcomes(b: &BlockBoundsReport) -> [CheckOutcome; 2] {
    [
        CheckOutcome::within(
            "block_bounds_first",
            factor_violation(&b.first),
            CONTAINMENT_TOL,
        ),
        CheckOutcome::within(
            "block_bounds_second",
            factor_violation(&b.second),
            CONTAINMENT_TOL,
        ),
    ]
}

/// Containment of the numeric extremes in the closed-form bounds and the
/// factor block bounds.
pub fn extremes_checks(op: &CurvatureOperator, opts: &SearchOptions) -> Result<Vec<CheckOutcome>> {
    let mut out = vec![containment_outcome(&extremes_report(op, opts)?)];
    out.extend(block_outcomes(&block_bounds_check(op, opts)?));
    Ok(out)
}

pub fn run_all(space: &HermitianSpace, opts: &SearchOptions) -> Result<Vec<CheckOutcome>> {
    let mut out = algebraic_checks(space)?;
    out.extend(extremes_checks(&curvature_operator(space), opts)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::StructureParams;

    #[test]
    fn all_checks_pass_at_sample_points() {
        let opts = SearchOptions {
            restarts: 8,
            ..SearchOptions::default()
        };
        for &(n, p, a, c) in &[(1, 1, 0.0, 1.0), (2, 1, 1.3, 0.4), (1, 2, -0.7, 2.5)] {
            let s = HermitianSpace::new(StructureParams::new(n, p, a, c).unwrap()).unwrap();
            for check in run_all(&s, &opts).unwrap() {
                assert!(check.pass, "({n},{p},{a},{c}) {check:?}");
            }
        }
    }

    #[test]
    fn jacobi_is_tiny() {
        let s = HermitianSpace::new(StructureParams::new(1, 1, 0.5, 0.5).unwrap()).unwrap();
        assert!(jacobi_defect(&s).unwrap() < 1e-13);
    }
}
