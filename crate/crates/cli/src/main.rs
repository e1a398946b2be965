//! `pointprob`: point probabilities of integer sums from JSON model files.
//!
//! Exit codes: 0 ok, 1 internal failure, 2 parse or usage error, 3 validation
//! error, 4 domain error, 5 monotonicity check failed, 6 resource limit.

mod input;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use pointprob_core::calibrate::{calibrate_model, max_ratio, CalibrationRow};
use pointprob_core::monotone::{check_monotone, check_strong_monotone, DEFAULT_GRID, DEFAULT_TOLERANCE, MIN_GRID};
use pointprob_core::oracle::{default_quad_points, exact_pmf, inversion_prob, mc_estimate};
use pointprob_core::tilting::{
    boundary_point_prob, essential_bounds, tail_point_estimate, Side,
};
use pointprob_core::{gaussian_point_estimate, Error};
use rayon::prelude::*;
use serde_json::Value;

use input::{load_model, load_sweep, InputError};

/// Environment variable overriding the worker thread count.
const THREADS_ENV: &str = "POINTPROB_THREADS";

#[derive(Parser)]
#[command(name = "pointprob", version, about = "Point probabilities for sums of independent integer random variables")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mean, variance, third-moment sum, tau, essential bounds and MGF domain.
    Summarize { model: PathBuf },
    /// Estimate Pr[X = n].
    Estimate {
        model: PathBuf,
        #[arg(allow_hyphen_values = true)]
        n: i64,
        #[arg(long, value_enum, default_value_t = EstimateMethod::Gaussian)]
        method: EstimateMethod,
        /// Truncation budget for `exact`.
        #[arg(long, default_value_t = 1e-15)]
        eps: f64,
        /// Quadrature points for `invert`; picked from the support width if omitted.
        #[arg(long)]
        quad_points: Option<usize>,
        /// Sample count for `mc`.
        #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Grid check that |f_X| is non-increasing on [0, pi].
    Monotone {
        model: PathBuf,
        #[arg(long, default_value_t = DEFAULT_GRID, value_parser = grid_size)]
        grid: usize,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
        /// Also check tilts of every component over a window of theta.
        #[arg(long)]
        strong: bool,
        #[arg(long, default_value_t = 9, requires = "strong")]
        theta_samples: usize,
    },
    /// Sweep models and points; print a TSV of observed error ratios.
    Calibrate { config: PathBuf },
    /// Exact Pr[X = A] or Pr[X = B] at a finite essential bound.
    Boundary {
        model: PathBuf,
        #[arg(long, value_enum, default_value_t = BoundSide::Lower)]
        side: BoundSide,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum EstimateMethod {
    Gaussian,
    Tilted,
    Exact,
    Invert,
    Mc,
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundSide {
    Lower,
    Upper,
}

fn grid_size(s: &str) -> Result<usize, String> {
    let g: usize = s.parse().map_err(|e| format!("{e}"))?;
    if g < MIN_GRID {
        return Err(format!("grid size must be at least {MIN_GRID}"));
    }
    Ok(g)
}

struct Failure {
    code: u8,
    message: String,
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        let code = match e {
            InputError::Parse(_) => 2,
            InputError::Invalid(_) => 3,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidDistribution(_) | Error::InvalidModel(_) | Error::InvalidArgument(_) => 3,
            Error::Domain { .. } | Error::DegenerateModel | Error::OutOfRange { .. } | Error::UnboundedSide(_) => 4,
            Error::ResourceLimit { .. } => 6,
            Error::SolverFailed(_) | Error::Numerical(_) => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

/// What a command produced: text for stdout and the exit code to finish with.
struct Output {
    text: String,
    code: u8,
}

fn json_out(v: Value) -> Output {
    Output {
        text: serde_json::to_string_pretty(&v).expect("values are always serializable") + "\n",
        code: 0,
    }
}

fn run(cli: Cli) -> Result<Output, Failure> {
    match cli.command {
        Command::Summarize { model } => {
            let file = load_model(&model)?;
            let m = &file.model;
            Ok(json_out(report::summary(
                file.label.as_deref(),
                &m.summarize(),
                &essential_bounds(m),
                &m.mgf_domain(),
            )))
        }
        Command::Estimate {
            model,
            n,
            method,
            eps,
            quad_points,
            samples,
            seed,
        } => {
            let m = load_model(&model)?.model;
            let v = match method {
                EstimateMethod::Gaussian => report::gaussian(n, &gaussian_point_estimate(&m, n)?),
                EstimateMethod::Tilted => {
                    let bounds = essential_bounds(&m);
                    if !bounds.contains_interior(n as f64) {
                        let on_bound = bounds.lower == Some(n) || bounds.upper == Some(n);
                        return Err(Failure {
                            code: 4,
                            message: if on_bound {
                                format!(
                                    "n = {n} sits on an essential bound {bounds}; the tilted estimate needs A < n < B. Use `pointprob boundary` for the exact atom."
                                )
                            } else {
                                format!(
                                    "n = {n} lies outside the essential range {bounds}, so Pr[X = n] = 0. The tilted estimate needs A < n < B; see also `pointprob boundary`."
                                )
                            },
                        });
                    }
                    let tail = tail_point_estimate(&m, n)?;
                    // the error term assumes the tilted sum is monotone; checked at the solved θ only
                    let check = check_monotone(&tail.solution.tilted, DEFAULT_GRID, DEFAULT_TOLERANCE)?;
                    let s = m.summarize();
                    report::tilted(n, &tail, (n as f64 - s.mu) / s.sigma(), &check)
                }
                EstimateMethod::Exact => report::exact(n, &exact_pmf(&m, eps)?, eps),
                EstimateMethod::Invert => {
                    let q = quad_points.unwrap_or_else(|| default_quad_points(&m));
                    report::inversion(n, &inversion_prob(&m, n, q)?)
                }
                EstimateMethod::Mc => report::monte_carlo(n, &mc_estimate(&m, n, samples, seed)?, seed),
            };
            Ok(json_out(v))
        }
        Command::Monotone {
            model,
            grid,
            tol,
            strong,
            theta_samples,
        } => {
            let m = load_model(&model)?.model;
            let base = check_monotone(&m, grid, tol)?;
            let mut v = report::monotone(&base);
            let mut pass = base.is_monotone;
            if strong {
                let per_component = m
                    .components()
                    .par_iter()
                    .map(|c| check_strong_monotone(&c.dist, theta_samples, grid, tol))
                    .collect::<Result<Vec<_>, Error>>()?;
                pass &= per_component.iter().all(|r| r.all_monotone);
                v["strong"] = Value::Array(
                    per_component
                        .iter()
                        .zip(m.components())
                        .enumerate()
                        .map(|(i, (r, c))| report::strong_monotone(i, &c.dist.to_string(), r))
                        .collect(),
                );
            }
            let mut out = json_out(v);
            out.code = if pass { 0 } else { 5 };
            Ok(out)
        }
        Command::Calibrate { config } => {
            let sweep = load_sweep(&config)?;
            let jobs: Vec<_> = sweep
                .generators
                .iter()
                .flat_map(|g| sweep.sizes.iter().map(move |&s| (g, s)))
                .collect();
            let tables = jobs
                .par_iter()
                .map(|&(g, size)| {
                    let model = g.build(size)?;
                    calibrate_model(&g.label(size), &model, sweep.method, sweep.t_min, sweep.t_max, sweep.eps)
                })
                .collect::<Result<Vec<Vec<CalibrationRow>>, Error>>()?;
            let rows: Vec<CalibrationRow> = tables.into_iter().flatten().collect();
            let mut text = report::calibration_header(sweep.method) + "\n";
            for r in &rows {
                text += &report::calibration_row(r);
                text.push('\n');
            }
            text += &report::calibration_footer(max_ratio(&rows));
            text.push('\n');
            Ok(Output { text, code: 0 })
        }
        Command::Boundary { model, side } => {
            let m = load_model(&model)?.model;
            let side = match side {
                BoundSide::Lower => Side::Lower,
                BoundSide::Upper => Side::Upper,
            };
            let bounds = essential_bounds(&m);
            let value = match side {
                Side::Lower => bounds.lower,
                Side::Upper => bounds.upper,
            };
            Ok(json_out(report::boundary(side, value, boundary_point_prob(&m, side)?)))
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().map_err(|_| Failure {
        code: 3,
        message: format!("{THREADS_ENV} = {raw:?} is not a thread count"),
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure {
            code: 1,
            message: format!("cannot set up {threads} threads: {e}"),
        })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_threads().and_then(|()| run(cli)) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.text.as_bytes()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("pointprob: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
