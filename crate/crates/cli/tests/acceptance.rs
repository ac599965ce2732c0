//! Acceptance suite. Runs every criterion at its stated tolerance, prints
//! one PASS/FAIL line per criterion and exits non-zero if any fails.
//!
//! Grids:
//! * fine: 20 × 20 over `a ∈ [−3, 3]`, `c ∈ [0.1, 4]`, `(n, p) ∈ {(1,1), (2,1), (1,2)}`
//! * coarse: 15 × 15 over the same rectangle, which meets all three regions

use std::collections::BTreeMap;
use std::process::Command;
use std::time::Instant;

use hopf_curvature::curvature::{
    curvature_operator, printed_nonzero_entries, printed_zero_entries, ricci_closed_form,
    ricci_contraction_invariant, ricci_eigenvalues, ricci_eigenvalues_closed_form,
    scalar_closed_form, scalar_via_trace,
};
use hopf_curvature::extremes::{
    block_bounds_check, branch_mismatches, extremes_report, RegionLabel, SearchOptions,
};
use hopf_curvature::tolerances::*;
use hopf_curvature::verify::{algebraic_checks, CheckOutcome};
use hopf_curvature::{HermitianSpace, StructureParams};
use nalgebra::{Matrix2, SymmetricEigen};

const CONFIGS: [(usize, usize); 3] = [(1, 1), (2, 1), (1, 2)];

fn grid(steps: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(steps * steps);
    for i in 0..steps {
        let a = -3.0 + 6.0 * i as f64 / (steps - 1) as f64;
        for k in 0..steps {
            let c = 0.1 + 3.9 * k as f64 / (steps - 1) as f64;
            out.push((a, c));
        }
    }
    out
}

fn space(n: usize, p: usize, a: f64, c: f64) -> HermitianSpace {
    HermitianSpace::new(StructureParams::new(n, p, a, c).expect("grid parameters are valid"))
        .expect("space builds on the grid")
}

struct Outcome {
    id: u8,
    title: &'static str,
    pass: bool,
    detail: String,
}

/// Worst error per check name, with the point where it occurred.
#[derive(Default)]
struct Worst(BTreeMap<&'static str, (f64, f64, bool, String)>);

impl Worst {
    fn record(&mut self, check: &CheckOutcome, at: &str) {
        let e = self
            .0
            .entry(check.name)
            .or_insert((0.0, check.tol, true, String::new()));
        e.2 &= check.pass;
        if check.worst_error > e.0 || e.3.is_empty() {
            e.0 = check.worst_error;
            e.3 = at.to_string();
        }
    }

    fn summary(&self, names: &[&str]) -> (bool, String) {
        let mut pass = true;
        let mut parts = Vec::new();
        for name in names {
            let (err, tol, ok, at) = self.0.get(name).expect("check was recorded");
            pass &= *ok;
            let status = if *ok {
                String::new()
            } else {
                format!(" FAIL at {at}")
            };
            parts.push(format!("{name} {err:.1e}/{tol:.0e}{status}"));
        }
        (pass, parts.join(", "))
    }
}

/// Criteria 1, 2, 3, 4 and 7 share the fine grid.
fn fine_grid_criteria() -> Vec<Outcome> {
    let mut worst = Worst::default();
    let mut points = 0;
    let mut nonzero_checked = 0usize;
    let mut zero_checked = 0usize;
    let mut eig_err: f64 = 0.0;
    let mut block_eig_err: f64 = 0.0;
    let mut multiplicity_ok = true;
    let mut multiplicity_at = String::new();

    for (n, p) in CONFIGS {
        let layout_params = StructureParams::new(n, p, 0.0, 1.0).unwrap();
        let zeros_per_point = printed_zero_entries(layout_params.layout()).len();
        for (a, c) in grid(20) {
            let s = space(n, p, a, c);
            let at = format!("(n={n}, p={p}, a={a:.4}, c={c:.4})");
            for check in algebraic_checks(&s).expect("checks run") {
                worst.record(&check, &at);
            }
            points += 1;
            nonzero_checked += printed_nonzero_entries(s.params()).len();
            zero_checked += zeros_per_point;

            // Eigenvalues of the closed-form block against a direct 2×2
            // eigen-decomposition and the full contraction-route matrix.
            let params = s.params();
            let closed = ricci_eigenvalues_closed_form(params);
            let r = ricci_closed_form(params);
            let l = params.layout();
            let block = Matrix2::new(
                r[(l.x1(), l.x1())],
                r[(l.x1(), l.x2())],
                r[(l.x2(), l.x1())],
                r[(l.x2(), l.x2())],
            );
            let mut fibre: Vec<f64> = SymmetricEigen::new(block)
                .eigenvalues
                .iter()
                .copied()
                .collect();
            fibre.sort_by(f64::total_cmp);
            let h1 = 2.0 * (1.0 + n as f64 - 1.0 / c);
            let h2 = 2.0 * (1.0 + p as f64 - (a * a + c * c) / c);
            let mut expected = fibre.clone();
            expected.extend(std::iter::repeat_n(h1, 2 * n));
            expected.extend(std::iter::repeat_n(h2, 2 * p));
            expected.sort_by(f64::total_cmp);
            block_eig_err = block_eig_err.max(
                expected
                    .iter()
                    .zip(&closed)
                    .map(|(x, y)| (x - y).abs())
                    .fold(0.0, f64::max),
            );
            let numeric = ricci_eigenvalues(&ricci_contraction_invariant(&s));
            eig_err = eig_err.max(
                numeric
                    .iter()
                    .zip(&closed)
                    .map(|(x, y)| (x - y).abs())
                    .fold(0.0, f64::max),
            );
            for (value, mult) in [(fibre[0], 1), (fibre[1], 1), (h1, 2 * n), (h2, 2 * p)] {
                let found = numeric
                    .iter()
                    .filter(|v| (*v - value).abs() <= RICCI_TOL)
                    .count();
                if found < mult {
                    multiplicity_ok = false;
                    multiplicity_at = at.clone();
                }
            }
        }
    }

    let mut out = Vec::new();
    let (pass, detail) = worst.summary(&["u_closed_form", "u_defining_identity", "u_symmetry"]);
    out.push(Outcome {
        id: 1,
        title: "connection agreement",
        pass,
        detail: format!("{points} points; {detail}"),
    });

    let (pass, detail) = worst.summary(&["printed_entries", "printed_zeros"]);
    out.push(Outcome {
        id: 2,
        title: "curvature-entry reproduction",
        pass: pass && zero_checked >= 500,
        detail: format!("{nonzero_checked} nonzero and {zero_checked} zero entries; {detail}"),
    });

    let (routes_pass, detail) = worst.summary(&["ricci_routes"]);
    let eig_pass = eig_err <= RICCI_TOL && block_eig_err <= RICCI_TOL && multiplicity_ok;
    out.push(Outcome {
        id: 3,
        title: "Ricci triple agreement",
        pass: routes_pass && eig_pass,
        detail: format!(
            "{detail}; eigenvalues {eig_err:.1e}, 2x2 block {block_eig_err:.1e}, multiplicities {}",
            if multiplicity_ok {
                "ok".to_string()
            } else {
                format!("FAIL at {multiplicity_at}")
            }
        ),
    });

    let (grid_pass, detail) = worst.summary(&["scalar"]);
    let s12 = scalar_closed_form(&StructureParams::new(1, 1, 0.0, 1.0).unwrap());
    let s25 = scalar_closed_form(&StructureParams::new(2, 1, 1.0, 2.0).unwrap());
    let t12 = scalar_via_trace(&space(1, 1, 0.0, 1.0)).unwrap();
    let t25 = scalar_via_trace(&space(2, 1, 1.0, 2.0)).unwrap();
    let spots = (s12 - 12.0).abs() <= RICCI_TOL
        && (t12 - 12.0).abs() <= RICCI_TOL
        && (s25 - 25.0).abs() <= RICCI_TOL
        && (t25 - 25.0).abs() <= RICCI_TOL;
    out.push(Outcome {
        id: 4,
        title: "scalar curvature",
        pass: grid_pass && spots,
        detail: format!("{detail}; spot values {s12}/{t12:.12} and {s25}/{t25:.12}"),
    });

    let (pass, detail) = worst.summary(&[
        "j_squared",
        "ad_h_invariance",
        "positive_associated",
        "metric_positive_definite",
        "metric_block_form",
        "orthonormal_frame",
        "torsion_free",
        "metric_compatible",
        "curvature_symmetries",
        "bianchi",
        "jacobi",
        "reductivity",
    ]);
    out.push(Outcome {
        id: 7,
        title: "structure suite",
        pass,
        detail,
    });
    out
}

fn containment() -> Outcome {
    let opts = SearchOptions::default();
    let mut pass = true;
    let mut worst: f64 = f64::NEG_INFINITY;
    let mut worst_at = String::new();
    let mut unconverged = 0;
    let mut winners_unconverged = 0;
    // region → (points, smallest gap_low, smallest gap_high, largest gap_low, largest gap_high)
    let mut per_region: BTreeMap<&str, (usize, f64, f64, f64, f64)> = BTreeMap::new();
    for (n, p) in [(1, 1), (2, 1)] {
        for (a, c) in grid(15) {
            let op = curvature_operator(&space(n, p, a, c));
            let r = extremes_report(&op, &opts).expect("search runs");
            let violation = (-r.gap_low).max(-r.gap_high);
            if violation > worst {
                worst = violation;
                worst_at = format!("(n={n}, p={p}, a={a:.4}, c={c:.4})");
            }
            pass &= r.contained(CONTAINMENT_TOL);
            unconverged += r.unconverged_starts;
            winners_unconverged += usize::from(!r.converged);
            let e = per_region.entry(r.region.as_str()).or_insert((
                0,
                f64::INFINITY,
                f64::INFINITY,
                f64::NEG_INFINITY,
                f64::NEG_INFINITY,
            ));
            e.0 += 1;
            e.1 = e.1.min(r.gap_low);
            e.2 = e.2.min(r.gap_high);
            e.3 = e.3.max(r.gap_low);
            e.4 = e.4.max(r.gap_high);
        }
    }
    let all_regions = RegionLabel::ALL
        .iter()
        .all(|r| per_region.contains_key(r.as_str()));

    let round = extremes_report(&curvature_operator(&space(1, 1, 0.0, 1.0)), &opts).unwrap();
    let round_ok = round.k_lo_numeric.abs() <= CONTAINMENT_TOL
        && (round.k_hi_numeric - 1.0).abs() <= CONTAINMENT_TOL;

    let mismatches = branch_mismatches(200, 3.0);
    let regions: Vec<String> = per_region
        .iter()
        .map(|(k, v)| {
            format!(
                "{k} {} pts gap_low [{:.2e}, {:.2e}] gap_high [{:.2e}, {:.2e}]",
                v.0, v.1, v.3, v.2, v.4
            )
        })
        .collect();
    Outcome {
        id: 5,
        title: "sectional-curvature containment",
        pass: pass && all_regions && round_ok,
        detail: format!(
            "worst violation {worst:.1e} at {worst_at} (tol {CONTAINMENT_TOL:.0e}); round product [{:.3e}, {:.12}]; \
             {unconverged} unconverged starts ({winners_unconverged} points with an unconverged winner); boundary branch mismatches {}; {}",
            round.k_lo_numeric,
            round.k_hi_numeric,
            mismatches.len(),
            regions.join("; ")
        ),
    }
}

fn block_bounds() -> Outcome {
    let opts = SearchOptions::default();
    let mut pass = true;
    let mut points = 0;
    let mut printed_fail = 0;
    let mut printed_example = String::new();
    let mut worst: f64 = 0.0;
    for (n, p) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
        for (a, c) in grid(15) {
            let b = block_bounds_check(&curvature_operator(&space(n, p, a, c)), &opts)
                .expect("search runs");
            points += 1;
            pass &= b.holds(CONTAINMENT_TOL);
            for f in [b.first, b.second] {
                worst = worst.max(f.bound_lo - f.k_lo).max(f.k_hi - f.bound_hi);
            }
            if !b.second_printed.holds(CONTAINMENT_TOL) {
                printed_fail += 1;
                if printed_example.is_empty() {
                    printed_example = format!(
                        " (e.g. n={n}, p={p}, a={a:.3}, c={c:.3}: max K = {:.4} > {:.4})",
                        b.second.k_hi, b.second_printed.bound_hi
                    );
                }
            }
        }
    }
    let reading = if printed_fail == 0 {
        "both readings satisfied".to_string()
    } else {
        format!("satisfied reading: (a^2+c^2); printed reading violated at {printed_fail}/{points} points{printed_example}")
    };
    Outcome {
        id: 6,
        title: "factor block bounds",
        pass,
        detail: format!(
            "{points} points, worst excess {worst:.1e} (tol {CONTAINMENT_TOL:.0e}); {reading}"
        ),
    }
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().expect("temporary directory");
    let run = |name: &str, threads: &str, format: &str| -> Vec<u8> {
        let path = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_hopfcurv"))
            .args([
                "scan",
                "--n",
                "2",
                "--p",
                "1",
                "--a-min",
                "-2",
                "--a-max",
                "2",
                "--c-min",
                "0.2",
                "--c-max",
                "3",
                "--steps-a",
                "4",
                "--steps-c",
                "4",
                "--restarts",
                "16",
                "--seed",
                "11",
                "--check",
                "--format",
                format,
                "--output",
            ])
            .arg(&path)
            .env("RAYON_NUM_THREADS", threads)
            .status()
            .expect("binary runs");
        assert!(
            status.code() == Some(0) || status.code() == Some(1),
            "scan exited with {status}"
        );
        std::fs::read(&path).expect("scan output written")
    };
    let a = run("a.csv", "1", "csv");
    let b = run("b.csv", "1", "csv");
    let c = run("c.csv", "4", "csv");
    let ja = run("a.jsonl", "1", "jsonl");
    let jb = run("b.jsonl", "3", "jsonl");
    let rows = a.iter().filter(|&&b| b == b'\n').count().saturating_sub(1);
    Outcome {
        id: 8,
        title: "deterministic scans",
        pass: !a.is_empty() && a == b && a == c && !ja.is_empty() && ja == jb && rows == 16,
        detail: format!(
            "{rows} CSV rows, {} bytes; identical across repeat runs and thread counts: csv {}, jsonl {}",
            a.len(),
            a == b && a == c,
            ja == jb
        ),
    }
}

fn main() {
    let started = Instant::now();
    let mut outcomes = fine_grid_criteria();
    outcomes.push(containment());
    outcomes.push(block_bounds());
    outcomes.push(determinism());
    outcomes.sort_by_key(|o| o.id);

    println!();
    for o in &outcomes {
        println!(
            "[{}] criterion {}: {}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.id,
            o.title,
            o.detail
        );
    }
    let failed = outcomes.iter().filter(|o| !o.pass).count();
    println!(
        "acceptance: {} passed, {} failed in {:.1}s",
        outcomes.len() - failed,
        failed,
        started.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
