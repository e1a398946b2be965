//! Gaussian local-limit estimate of `Pr[X = n]` near the mean.
//!
//! For a sum of independent integer components with mean `μ` and variance
//! `σ²`, the point probability at `n = μ + tσ` is estimated by the normal
//! density `e^{-t²/2} / (√(2π) σ)`. The absolute error is bounded by a
//! universal constant times `τ²`, where `τ = Σ E|X_j - μ_j|³ / σ³`. The
//! constant is not known, so [`EstimateResult::error_term`] carries `τ²`
//! alone; the calibration harness measures the observed ratio.

use crate::error::{Error, Result};
use crate::model::{MomentSummary, SumModel};
use crate::numeric::LN_SQRT_2PI;

/// Working thresholds for the advisory flags on an estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateOptions {
    /// Variance above which the estimate is considered in its working regime.
    pub min_sigma_sq: f64,
    /// Largest `τ` considered small.
    pub max_tau: f64,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        Self {
            min_sigma_sq: 100.0,
            max_tau: 0.1,
        }
    }
}

/// Whether the regime assumptions behind the error term hold. Advisory only.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EstimateFlags {
    pub sigma_large_enough: bool,
    pub tau_small_enough: bool,
    pub epsilon_le_pi: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateResult {
    pub estimate: f64,
    /// `ln(estimate)`, finite even where `estimate` underflows.
    pub log_estimate: f64,
    /// Error functional without the universal constant.
    pub error_term: f64,
    /// Standardized coordinate `(n - μ) / σ`.
    pub t: f64,
    pub sigma: f64,
    pub tau: f64,
    /// `√(8 ln(1/τ)) / σ`, defined for `τ ∈ (0, 1)`.
    pub epsilon: Option<f64>,
    pub flags: EstimateFlags,
}

/// Estimate `Pr[X = n]` by the normal density at `n`.
pub fn gaussian_point_estimate(model: &SumModel, n: i64) -> Result<EstimateResult> {
    gaussian_point_estimate_with(model, n, &EstimateOptions::default())
}

pub fn gaussian_point_estimate_with(
    model: &SumModel,
    n: i64,
    options: &EstimateOptions,
) -> Result<EstimateResult> {
    estimate_from_summary(&model.summarize(), n, options)
}

pub(crate) fn estimate_from_summary(
    summary: &MomentSummary,
    n: i64,
    options: &EstimateOptions,
) -> Result<EstimateResult> {
    let tau = summary.tau.ok_or(Error::DegenerateModel)?;
    let sigma = summary.sigma();
    let t = (n as f64 - summary.mu) / sigma;
    let log_estimate = -0.5 * t * t - (LN_SQRT_2PI + sigma.ln());
    let epsilon = (tau > 0.0 && tau < 1.0).then(|| (8.0 * (1.0 / tau).ln()).sqrt() / sigma);
    Ok(EstimateResult {
        estimate: log_estimate.exp(),
        log_estimate,
        error_term: tau * tau,
        t,
        sigma,
        tau,
        epsilon,
        flags: EstimateFlags {
            sigma_large_enough: summary.sigma_sq > options.min_sigma_sq,
            tau_small_enough: tau <= options.max_tau,
            epsilon_le_pi: epsilon.is_some_and(|e| e <= std::f64::consts::PI),
        },
    })
}
