//! Empirical calibration of the error constants.
//!
//! Neither estimate comes with a numeric constant in front of its error
//! functional. The harness sweeps models and points, compares each
//! estimate to the exact convolution, and records
//! `ratio = |exact - estimate| / error functional`. The maximum ratio over a
//! sweep is the measured envelope.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::estimator::gaussian_point_estimate;
use crate::model::{DistributionSpec, SumModel};
use crate::oracle::exact_pmf;
use crate::tilting::{essential_bounds, tail_point_estimate};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Gaussian,
    Tilted,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Gaussian => "gaussian",
            Method::Tilted => "tilted",
        }
    }

    /// Column header of the error functional.
    pub fn error_column(self) -> &'static str {
        match self {
            Method::Gaussian => "tau_sq",
            Method::Tilted => "tau_y_sq",
        }
    }
}

/// Families of models swept by size.
#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    /// `size` copies of Bernoulli(p).
    Binomial { p: f64 },
    /// `size` copies of Geometric(p).
    GeometricSum { p: f64 },
    /// `size` copies of Poisson(rate).
    PoissonSum { rate: f64 },
    /// Random Bernoulli/Poisson/geometric mixture with `size` summands.
    Mixed { seed: u64 },
}

impl Generator {
    pub fn build(&self, size: u64) -> Result<SumModel> {
        match *self {
            Generator::Binomial { p } => SumModel::iid(DistributionSpec::bernoulli(p)?, size),
            Generator::GeometricSum { p } => SumModel::iid(DistributionSpec::geometric(p)?, size),
            Generator::PoissonSum { rate } => SumModel::iid(DistributionSpec::poisson(rate)?, size),
            Generator::Mixed { seed } => random_mixed_model(size, seed),
        }
    }

    pub fn label(&self, size: u64) -> String {
        match *self {
            Generator::Binomial { p } => format!("binomial(n={size},p={p})"),
            Generator::GeometricSum { p } => format!("geometric_sum(k={size},p={p})"),
            Generator::PoissonSum { rate } => format!("poisson_sum(k={size},rate={rate})"),
            Generator::Mixed { seed } => format!("mixed(k={size},seed={seed})"),
        }
    }
}

/// A random mixture of Bernoulli, Poisson and geometric components with
/// `summands` summands in total, grouped into 3 to 12 distinct components.
///
/// Parameters are drawn from Bernoulli `p ∈ [0.05, 0.95]`, Poisson
/// `rate ∈ [0.1, 5]` and geometric `p ∈ [0.05, 0.7]`.
pub fn random_mixed_model(summands: u64, seed: u64) -> Result<SumModel> {
    if summands == 0 {
        return Err(Error::InvalidModel("model has no components".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let distinct = rng.random_range(3..=12u64).min(summands);
    // every component gets one summand, the rest are spread at random
    let mut counts = vec![1u64; distinct as usize];
    for _ in distinct..summands {
        counts[rng.random_range(0..distinct as usize)] += 1;
    }
    let components = counts
        .into_iter()
        .enumerate()
        .map(|(i, count)| {
            let dist = match i % 3 {
                0 => DistributionSpec::bernoulli(rng.random_range(0.05..=0.95))?,
                1 => DistributionSpec::poisson(rng.random_range(0.1..=5.0))?,
                _ => DistributionSpec::geometric(rng.random_range(0.05..=0.7))?,
            };
            Ok((dist, count))
        })
        .collect::<Result<Vec<_>>>()?;
    SumModel::new(components)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationRow {
    pub model: String,
    pub n: i64,
    /// Standardized distance `(n - μ) / σ` of the point from the mean of `X`.
    pub t: f64,
    pub exact: f64,
    pub estimate: f64,
    pub abs_error: f64,
    /// `τ²` for the Gaussian estimate, `τ_Y²` for the tilted one.
    pub error_term: f64,
    /// `abs_error / τ²`, or `abs_error · e^{g(n)} / τ_Y²` when tilted.
    pub ratio: f64,
    pub rel_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub generators: Vec<Generator>,
    pub sizes: Vec<u64>,
    /// Standardized range of points around the mean, inclusive.
    pub t_min: f64,
    pub t_max: f64,
    pub method: Method,
    pub eps: f64,
}

/// Rows for every integer point `n` with `(n - μ)/σ ∈ [t_min, t_max]`.
/// The tilted method skips points on or outside the essential bounds.
pub fn calibrate_model(
    label: &str,
    model: &SumModel,
    method: Method,
    t_min: f64,
    t_max: f64,
    eps: f64,
) -> Result<Vec<CalibrationRow>> {
    let summary = model.summarize();
    if summary.tau.is_none() {
        return Err(Error::DegenerateModel);
    }
    let sigma = summary.sigma();
    let pmf = exact_pmf(model, eps)?;
    let bounds = essential_bounds(model);
    let first = (summary.mu + t_min * sigma).ceil() as i64;
    let last = (summary.mu + t_max * sigma).floor() as i64;
    let mut rows = Vec::new();
    for n in first..=last {
        let exact = pmf.get(n);
        let (estimate, error_term, ratio_scale) = match method {
            Method::Gaussian => {
                let r = gaussian_point_estimate(model, n)?;
                (r.estimate, r.error_term, r.error_term)
            }
            Method::Tilted => {
                if !bounds.contains_interior(n as f64) {
                    continue;
                }
                let tail = tail_point_estimate(model, n)?;
                let tau_y = tail.estimate.tau;
                (
                    tail.estimate.estimate,
                    tau_y * tau_y,
                    tail.estimate.error_term,
                )
            }
        };
        let abs_error = (exact - estimate).abs();
        rows.push(CalibrationRow {
            model: label.to_string(),
            n,
            t: (n as f64 - summary.mu) / sigma,
            exact,
            estimate,
            abs_error,
            error_term,
            ratio: abs_error / ratio_scale,
            rel_error: if exact > 0.0 { abs_error / exact } else { f64::INFINITY },
        });
    }
    Ok(rows)
}

/// Runs every generator at every size. Rows are ordered by generator, then size.
pub fn run_sweep(sweep: &Sweep) -> Result<Vec<CalibrationRow>> {
    if sweep.generators.is_empty() || sweep.sizes.is_empty() {
        return Err(Error::InvalidArgument("calibration sweep is empty".into()));
    }
    if !(sweep.t_min <= sweep.t_max) {
        return Err(Error::InvalidArgument(format!(
            "t_min = {} exceeds t_max = {}",
            sweep.t_min, sweep.t_max
        )));
    }
    let mut rows = Vec::new();
    for g in &sweep.generators {
        for &size in &sweep.sizes {
            let model = g.build(size)?;
            rows.extend(calibrate_model(
                &g.label(size),
                &model,
                sweep.method,
                sweep.t_min,
                sweep.t_max,
                sweep.eps,
            )?);
        }
    }
    Ok(rows)
}

/// Largest finite ratio, or `None` for an empty table.
pub fn max_ratio(rows: &[CalibrationRow]) -> Option<f64> {
    rows.iter().map(|r| r.ratio).fold(None, |acc, r| match acc {
        None => Some(r),
        Some(a) => Some(a.max(r)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_models_are_reproducible() {
        let a = random_mixed_model(100, 3).unwrap();
        let b = random_mixed_model(100, 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.expanded_len(), 100);
        assert_ne!(a, random_mixed_model(100, 4).unwrap());
    }

    #[test]
    fn binomial_rows_cover_three_sigma() {
        let m = Generator::Binomial { p: 0.5 }.build(64).unwrap();
        let rows = calibrate_model("b64", &m, Method::Gaussian, -3.0, 3.0, 1e-15).unwrap();
        // μ = 32, σ = 4 → n ∈ [20, 44]
        assert_eq!(rows.len(), 25);
        assert_eq!(rows[0].n, 20);
        assert!(rows.iter().all(|r| r.ratio.is_finite()));
        assert!(max_ratio(&rows).unwrap() > 0.0);
    }

    #[test]
    fn tilted_rows_skip_boundary() {
        let m = Generator::Binomial { p: 0.5 }.build(16).unwrap();
        let rows = calibrate_model("b16", &m, Method::Tilted, -5.0, 5.0, 1e-15).unwrap();
        assert!(rows.iter().all(|r| r.n > 0 && r.n < 16));
        assert_eq!(rows.len(), 15);
    }

    #[test]
    fn empty_sweep_is_rejected() {
        let sweep = Sweep {
            generators: vec![],
            sizes: vec![64],
            t_min: -3.0,
            t_max: 3.0,
            method: Method::Gaussian,
            eps: 1e-15,
        };
        assert!(matches!(run_sweep(&sweep), Err(Error::InvalidArgument(_))));
    }
}
