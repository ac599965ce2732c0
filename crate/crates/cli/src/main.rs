use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hopf_curvature::extremes::SearchOptions;
use hopf_curvature::StructureParams;
use hopf_curvature_cli::{
    build_report, scan, summarize_checks, write_check_table, write_reports, Axis, CliError,
    CliResult, CurvatureReport, Format, ScanSpec,
};

/// Curvature of invariant Hermitian metrics on S^{2n+1} x S^{2p+1}.
#[derive(Parser, Debug)]
#[command(name = "hopfcurv", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Report for a single parameter point.
    #[command(allow_negative_numbers = true)]
    Report {
        #[command(flatten)]
        dims: Dims,
        #[arg(long)]
        a: f64,
        #[arg(long)]
        c: f64,
        /// Also run the invariant suite.
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Reports over an (a, c) grid, ordered by a then c.
    #[command(allow_negative_numbers = true)]
    Scan {
        #[command(flatten)]
        dims: Dims,
        #[command(flatten)]
        grid: GridArgs,
        /// Append check summary columns.
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the invariant suite at a point (--a, --c) or over a grid
    /// (--a-min .. --steps-c) and print a per-check table.
    #[command(allow_negative_numbers = true)]
    Check {
        #[command(flatten)]
        dims: Dims,
        #[arg(long, conflicts_with_all = ["a_min", "a_max", "c_min", "c_max"])]
        a: Option<f64>,
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        a_min: Option<f64>,
        #[arg(long)]
        a_max: Option<f64>,
        #[arg(long)]
        c_min: Option<f64>,
        #[arg(long)]
        c_max: Option<f64>,
        #[arg(long, default_value_t = 5)]
        steps_a: usize,
        #[arg(long, default_value_t = 5)]
        steps_c: usize,
        #[command(flatten)]
        search: SearchArgs,
        /// Also write the per-point reports.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
    },
}

#[derive(Args, Debug)]
struct Dims {
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    p: usize,
}

#[derive(Args, Debug)]
struct GridArgs {
    #[arg(long)]
    a_min: f64,
    #[arg(long)]
    a_max: f64,
    #[arg(long)]
    c_min: f64,
    #[arg(long)]
    c_max: f64,
    #[arg(long)]
    steps_a: usize,
    #[arg(long)]
    steps_c: usize,
}

#[derive(Args, Debug)]
struct SearchArgs {
    /// Random starting planes per extremum, on top of the coordinate planes.
    #[arg(long, default_value_t = 64)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Step size at which a local search stops.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 2000)]
    max_iters: usize,
}

impl SearchArgs {
    fn options(&self) -> SearchOptions {
        SearchOptions {
            restarts: self.restarts,
            max_iters: self.max_iters,
            tol: self.tol,
            seed: self.seed,
        }
    }
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Write to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FormatArg {
    Csv,
    Jsonl,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Jsonl => Format::Jsonl,
        }
    }
}

/// Renders to memory first so that a failed run leaves no partial file.
fn emit(
    reports: &[CurvatureReport],
    format: FormatArg,
    path: Option<&PathBuf>,
    with_checks: bool,
) -> CliResult<()> {
    let mut buf = Vec::new();
    write_reports(&mut buf, reports, format.into(), with_checks)?;
    match path {
        Some(p) => File::create(p)?.write_all(&buf)?,
        None => io::stdout().lock().write_all(&buf)?,
    }
    Ok(())
}

fn params(dims: &Dims, a: f64, c: f64) -> CliResult<StructureParams> {
    Ok(StructureParams::new(dims.n, dims.p, a, c)?)
}

/// `Ok(true)` when every check passed.
fn run(cli: Cli) -> CliResult<bool> {
    match cli.command {
        Command::Report {
            dims,
            a,
            c,
            check,
            search,
            output,
        } => {
            let report = build_report(params(&dims, a, c)?, &search.options(), check)?;
            emit(
                std::slice::from_ref(&report),
                output.format,
                output.output.as_ref(),
                check,
            )?;
            Ok(report.all_checks_pass())
        }
        Command::Scan {
            dims,
            grid,
            check,
            search,
            output,
        } => {
            let spec = ScanSpec {
                n: dims.n,
                p: dims.p,
                a: Axis {
                    min: grid.a_min,
                    max: grid.a_max,
                    steps: grid.steps_a,
                },
                c: Axis {
                    min: grid.c_min,
                    max: grid.c_max,
                    steps: grid.steps_c,
                },
            };
            let reports = scan(&spec, &search.options(), check)?;
            emit(&reports, output.format, output.output.as_ref(), check)?;
            Ok(reports.iter().all(CurvatureReport::all_checks_pass))
        }
        Command::Check {
            dims,
            a,
            c,
            a_min,
            a_max,
            c_min,
            c_max,
            steps_a,
            steps_c,
            search,
            output,
            format,
        } => {
            let opts = search.options();
            let reports = match (a_min, a_max, c_min, c_max) {
                (None, None, None, None) => {
                    let p = params(&dims, a.unwrap_or(0.0), c.unwrap_or(1.0))?;
                    vec![build_report(p, &opts, true)?]
                }
                (Some(a_min), Some(a_max), Some(c_min), Some(c_max)) => {
                    let spec = ScanSpec {
                        n: dims.n,
                        p: dims.p,
                        a: Axis {
                            min: a_min,
                            max: a_max,
                            steps: steps_a,
                        },
                        c: Axis {
                            min: c_min,
                            max: c_max,
                            steps: steps_c,
                        },
                    };
                    scan(&spec, &opts, true)?
                }
                _ => {
                    return Err(CliError::Invalid(
                        "a grid needs all of --a-min, --a-max, --c-min and --c-max".into(),
                    ))
                }
            };
            if let Some(path) = output.as_ref() {
                emit(&reports, format, Some(path), true)?;
            }
            let summary = summarize_checks(&reports);
            write_check_table(io::stdout().lock(), &summary)?;
            Ok(summary.iter().all(|s| s.failures == 0))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("hopfcurv: {e}");
            ExitCode::from(2)
        }
    }
}
