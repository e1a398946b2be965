//! Grid certification that `|f_X|` is non-increasing on `[0, π]`.
//!
//! A pass is evidence, not a proof: only the grid points are compared.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::{DistributionSpec, SumModel};

pub const DEFAULT_GRID: usize = 4096;
pub const DEFAULT_TOLERANCE: f64 = 1e-12;
pub const MIN_GRID: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonotoneReport {
    pub is_monotone: bool,
    /// Largest rise of `|F|` between neighbouring grid points (0 if none).
    pub worst_increase: f64,
    /// Grid point at the top of that rise.
    pub worst_location: f64,
    pub grid_size: usize,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrongMonotoneReport {
    pub all_monotone: bool,
    pub per_theta: Vec<(f64, MonotoneReport)>,
}

fn check_grid(grid_size: usize) -> Result<()> {
    if grid_size < MIN_GRID {
        return Err(Error::InvalidArgument(format!(
            "grid size {grid_size} is below the minimum of {MIN_GRID}"
        )));
    }
    Ok(())
}

fn grid_point(i: usize, grid_size: usize) -> f64 {
    PI * (i as f64 / (grid_size - 1) as f64)
}

/// `(λ, |F(λ)|)` on a uniform grid over `[0, π]`, accumulated in log space.
pub fn modulus_profile(model: &SumModel, grid_size: usize) -> Result<Vec<(f64, f64)>> {
    check_grid(grid_size)?;
    Ok((0..grid_size)
        .map(|i| {
            let lam = grid_point(i, grid_size);
            let log_mod: f64 = model
                .components()
                .iter()
                .map(|c| c.count as f64 * c.dist.ln_char_fn_modulus(lam))
                .sum();
            (lam, log_mod.exp())
        })
        .collect())
}

/// Scans the modulus profile for rises above `tol`.
pub fn check_monotone(model: &SumModel, grid_size: usize, tol: f64) -> Result<MonotoneReport> {
    if tol.is_nan() || tol < 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance {tol} is negative")));
    }
    let profile = modulus_profile(model, grid_size)?;
    let (worst_increase, worst_location) = profile
        .windows(2)
        .map(|w| (w[1].1 - w[0].1, w[1].0))
        .fold((0.0, 0.0), |best, step| if step.0 > best.0 { step } else { best });
    Ok(MonotoneReport {
        is_monotone: worst_increase <= tol,
        worst_increase,
        worst_location,
        grid_size,
        tolerance: tol,
    })
}

/// Default `θ` window: `[-3, min(3, hi - 10^{-3})]` inside the MGF domain.
pub fn default_theta_window(d: &DistributionSpec) -> (f64, f64) {
    let domain = d.mgf_domain();
    let lo = (-3.0f64).max(domain.lo + 1e-3);
    let hi = 3.0f64.min(domain.hi - 1e-3);
    (lo, hi)
}

/// Checks monotonicity of `theta_samples` evenly spaced tilts of `d`.
pub fn check_strong_monotone(
    d: &DistributionSpec,
    theta_samples: usize,
    grid_size: usize,
    tol: f64,
) -> Result<StrongMonotoneReport> {
    if theta_samples < 3 {
        return Err(Error::InvalidArgument(format!(
            "need at least 3 theta samples, got {theta_samples}"
        )));
    }
    let (lo, hi) = default_theta_window(d);
    let per_theta = (0..theta_samples)
        .map(|i| {
            let theta = lo + (hi - lo) * i as f64 / (theta_samples - 1) as f64;
            let tilted = SumModel::single(d.tilt(theta)?)?;
            Ok((theta, check_monotone(&tilted, grid_size, tol)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StrongMonotoneReport {
        all_monotone: per_theta.iter().all(|(_, r)| r.is_monotone),
        per_theta,
    })
}
