//! Report assembly, parameter scans and serialization for the `hopfcurv`
//! binary.
//!
//! CSV columns, in order:
//!
//! ```text
//! n, p, a, c, region, scalar_closed, scalar_trace, ricci_eigs_closed,
//! ricci_max_route_discrepancy, k_min_closed, k_max_closed, k_lo_numeric,
//! k_hi_numeric, gap_low, gap_high, converged, unconverged_starts
//! ```
//!
//! followed, when checks were run, by `checks_pass, checks_failed,
//! failed_checks`. `ricci_eigs_closed` and `failed_checks` are
//! `;`-separated lists. Reals carry 12 significant digits.

use std::io::Write;

use hopf_curvature::curvature::{
    curvature_operator, ricci_eigenvalues_closed_form, scalar_closed_form, scalar_via_trace,
};
use hopf_curvature::extremes::{block_bounds_check, extremes_report, SearchOptions};
use hopf_curvature::verify::{
    algebraic_checks, block_outcomes, containment_outcome, ricci_route_discrepancy,
};
use hopf_curvature::{HermitianSpace, StructureParams};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug)]
pub enum CliError {
    /// Bad parameters, ranges or options.
    Invalid(String),
    Io(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Invalid(msg) => write!(f, "invalid input: {msg}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<hopf_curvature::Error> for CliError {
    fn from(e: hopf_curvature::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.into())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub pass: bool,
    pub worst_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureReport {
    pub n: usize,
    pub p: usize,
    pub a: f64,
    pub c: f64,
    pub region: String,
    pub scalar_closed: f64,
    pub scalar_trace: f64,
    pub ricci_eigs_closed: Vec<f64>,
    pub ricci_max_route_discrepancy: f64,
    pub k_min_closed: f64,
    pub k_max_closed: f64,
    pub k_lo_numeric: f64,
    pub k_hi_numeric: f64,
    pub gap_low: f64,
    pub gap_high: f64,
    pub converged: bool,
    pub unconverged_starts: usize,
    pub checks: Vec<CheckRecord>,
}

impl CurvatureReport {
    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failed_checks(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name.as_str())
            .collect()
    }
}

/// Builds the report for one parameter point. With `with_checks` the full
/// invariant suite is run as well.
pub fn build_report(
    params: StructureParams,
    opts: &SearchOptions,
    with_checks: bool,
) -> CliResult<CurvatureReport> {
    opts.validate()?;
    let space = HermitianSpace::new(params)?;
    let op = curvature_operator(&space);
    let ext = extremes_report(&op, opts)?;

    let checks = if with_checks {
        let mut out = algebraic_checks(&space)?;
        out.push(containment_outcome(&ext));
        out.extend(block_outcomes(&block_bounds_check(&op, opts)?));
        out.into_iter()
            .map(|o| CheckRecord {
                name: o.name.to_string(),
                pass: o.pass,
                worst_error: o.worst_error,
            })
            .collect()
    } else {
        Vec::new()
    };

    Ok(CurvatureReport {
        n: params.n(),
        p: params.p(),
        a: params.a(),
        c: params.c(),
        region: ext.region.to_string(),
        scalar_closed: scalar_closed_form(&params),
        scalar_trace: scalar_via_trace(&space)?,
        ricci_eigs_closed: ricci_eigenvalues_closed_form(&params),
        ricci_max_route_discrepancy: ricci_route_discrepancy(&space),
        k_min_closed: ext.k_min_closed,
        k_max_closed: ext.k_max_closed,
        k_lo_numeric: ext.k_lo_numeric,
        k_hi_numeric: ext.k_hi_numeric,
        gap_low: ext.gap_low,
        gap_high: ext.gap_high,
        converged: ext.converged,
        unconverged_starts: ext.unconverged_starts,
        checks,
    })
}

/// An inclusive, evenly spaced axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.max
                } else {
                    self.min + (self.max - self.min) * i as f64 / last
                }
            })
            .collect()
    }

    fn validate(&self, name: &str) -> CliResult<()> {
        if !(self.min.is_finite() && self.max.is_finite()) {
            return Err(CliError::Invalid(format!("{name} range must be finite")));
        }
        if self.min > self.max {
            return Err(CliError::Invalid(format!(
                "{name} range is empty ({} > {})",
                self.min, self.max
            )));
        }
        if self.steps < 2 {
            return Err(CliError::Invalid(format!("{name} needs at least 2 steps")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanSpec {
    pub n: usize,
    pub p: usize,
    pub a: Axis,
    pub c: Axis,
}

impl ScanSpec {
    pub fn validate(&self) -> CliResult<()> {
        self.a.validate("a")?;
        self.c.validate("c")?;
        if self.c.min <= 0.0 {
            return Err(CliError::Invalid(format!(
                "c range must be strictly positive (got minimum {})",
                self.c.min
            )));
        }
        // Rejects n = 0 or p = 0 before any work is scheduled.
        StructureParams::new(self.n, self.p, self.a.min, self.c.min)?;
        Ok(())
    }

    /// Grid points ordered by `a`, then `c`.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let cs = self.c.values();
        self.a
            .values()
            .into_iter()
            .flat_map(|a| cs.iter().map(move |&c| (a, c)))
            .collect()
    }
}

/// One report per grid point, in grid order whatever the scheduling.
pub fn scan(
    spec: &ScanSpec,
    opts: &SearchOptions,
    with_checks: bool,
) -> CliResult<Vec<CurvatureReport>> {
    spec.validate()?;
    opts.validate()?;
    spec.points()
        .into_par_iter()
        .map(|(a, c)| {
            build_report(
                StructureParams::new(spec.n, spec.p, a, c)?,
                opts,
                with_checks,
            )
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Jsonl,
}

/// `x` with 12 significant digits: positional when the decimal exponent is
/// in `[-5, 12)`, scientific otherwise, trailing zeros removed.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim(&format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim(mantissa))
    }
}

const BASE_COLUMNS: [&str; 17] = [
    "n",
    "p",
    "a",
    "c",
    "region",
    "scalar_closed",
    "scalar_trace",
    "ricci_eigs_closed",
    "ricci_max_route_discrepancy",
    "k_min_closed",
    "k_max_closed",
    "k_lo_numeric",
    "k_hi_numeric",
    "gap_low",
    "gap_high",
    "converged",
    "unconverged_starts",
];

const CHECK_COLUMNS: [&str; 3] = ["checks_pass", "checks_failed", "failed_checks"];

fn csv_record(r: &CurvatureReport, with_checks: bool) -> Vec<String> {
    let eigs: Vec<String> = r.ricci_eigs_closed.iter().map(|&v| format_sig(v)).collect();
    let mut row = vec![
        r.n.to_string(),
        r.p.to_string(),
        format_sig(r.a),
        format_sig(r.c),
        r.region.clone(),
        format_sig(r.scalar_closed),
        format_sig(r.scalar_trace),
        eigs.join(";"),
        format_sig(r.ricci_max_route_discrepancy),
        format_sig(r.k_min_closed),
        format_sig(r.k_max_closed),
        format_sig(r.k_lo_numeric),
        format_sig(r.k_hi_numeric),
        format_sig(r.gap_low),
        format_sig(r.gap_high),
        r.converged.to_string(),
        r.unconverged_starts.to_string(),
    ];
    if with_checks {
        let failed = r.failed_checks();
        row.push(r.all_checks_pass().to_string());
        row.push(failed.len().to_string());
        row.push(failed.join(";"));
    }
    row
}

/// Writes reports as CSV (with header) or JSON Lines.
pub fn write_reports<W: Write>(
    out: W,
    reports: &[CurvatureReport],
    format: Format,
    with_checks: bool,
) -> CliResult<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            let mut header: Vec<&str> = BASE_COLUMNS.to_vec();
            if with_checks {
                header.extend(CHECK_COLUMNS);
            }
            w.write_record(&header)?;
            for r in reports {
                w.write_record(csv_record(r, with_checks))?;
            }
            w.flush()?;
        }
        Format::Jsonl => {
            let mut out = std::io::BufWriter::new(out);
            for r in reports {
                serde_json::to_writer(&mut out, r)?;
                out.write_all(b"\n")?;
            }
            out.flush()?;
        }
    }
    Ok(())
}

/// Per-check aggregate over a set of reports.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckSummary {
    pub name: String,
    pub points: usize,
    pub failures: usize,
    pub worst_error: f64,
}

pub fn summarize_checks(reports: &[CurvatureReport]) -> Vec<CheckSummary> {
    let mut out: Vec<CheckSummary> = Vec::new();
    for r in reports {
        for c in &r.checks {
            let entry = match out.iter().position(|s| s.name == c.name) {
                Some(i) => &mut out[i],
                None => {
                    out.push(CheckSummary {
                        name: c.name.clone(),
                        points: 0,
                        failures: 0,
                        worst_error: 0.0,
                    });
                    out.last_mut().expect("just pushed")
                }
            };
            entry.points += 1;
            entry.failures += usize::from(!c.pass);
            entry.worst_error = entry.worst_error.max(c.worst_error);
        }
    }
    out
}

/// Fixed-width table with one line per check.
pub fn write_check_table<W: Write>(mut out: W, summary: &[CheckSummary]) -> CliResult<()> {
    writeln!(
        out,
        "{:<26} {:>6} {:>8} {:>12}  status",
        "check", "points", "failures", "worst_error"
    )?;
    for s in summary {
        writeln!(
            out,
            "{:<26} {:>6} {:>8} {:>12.3e}  {}",
            s.name,
            s.points,
            s.failures,
            s.worst_error,
            if s.failures == 0 { "PASS" } else { "FAIL" }
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_sig(12.0), "12");
        assert_eq!(format_sig(-0.5), "-0.5");
        assert_eq!(format_sig(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_sig(2.0 / 3.0 * 1000.0), "666.666666667");
        assert_eq!(format_sig(1.5e-9), "1.5e-9");
        assert_eq!(format_sig(-2.25e14), "-2.25e14");
        assert_eq!(format_sig(0.0), "0");
    }

    #[test]
    fn axis_includes_endpoints() {
        let ax = Axis {
            min: 0.1,
            max: 4.0,
            steps: 4,
        };
        let v = ax.values();
        assert_eq!(v.len(), 4);
        assert_eq!(v[0], 0.1);
        assert_eq!(v[3], 4.0);
    }

    #[test]
    fn scan_rejects_bad_ranges() {
        let ax = Axis {
            min: 0.0,
            max: 1.0,
            steps: 2,
        };
        let spec = ScanSpec {
            n: 1,
            p: 1,
            a: ax,
            c: ax,
        };
        assert!(matches!(spec.validate(), Err(CliError::Invalid(_))));
        let spec = ScanSpec {
            c: Axis { min: 0.5, ..ax },
            a: Axis { steps: 1, ..ax },
            ..spec
        };
        assert!(matches!(spec.validate(), Err(CliError::Invalid(_))));
    }

    #[test]
    fn round_product_report() {
        let opts = SearchOptions {
            restarts: 8,
            ..SearchOptions::default()
        };
        let r = build_report(StructureParams::new(1, 1, 0.0, 1.0).unwrap(), &opts, true).unwrap();
        assert_eq!(r.scalar_closed, 12.0);
        assert_eq!(r.k_min_closed, 0.0);
        assert_eq!(r.k_max_closed, 1.0);
        assert_eq!(r.region, "HIGH");
        assert!(!r.checks.is_empty());
        assert!(r.all_checks_pass(), "{:?}", r.failed_checks());
    }

    #[test]
    fn csv_has_fixed_columns() {
        let opts = SearchOptions {
            restarts: 4,
            ..SearchOptions::default()
        };
        let r = build_report(StructureParams::new(1, 1, 0.5, 0.8).unwrap(), &opts, false).unwrap();
        let mut buf = Vec::new();
        write_reports(&mut buf, &[r], Format::Csv, false).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), BASE_COLUMNS.join(","));
        assert_eq!(lines.next().unwrap().split(',').count(), BASE_COLUMNS.len());
    }
}
