//! Exponential tilting for point probabilities in the tails.
//!
//! For `A < t < B` there is a unique `θ` in the interior of the MGF domain
//! with `ψ'(θ) = t`. Tilting every component by `θ` gives a sum `Y` with
//! `E[Y] = t`, and the exact identity
//!
//! ```text
//! Pr[X = t] = e^{ψ(θ) - θt} · Pr[Y = t]
//! ```
//!
//! turns the central estimate for `Y` into a tail estimate for `X`.

use std::fmt;

use crate::error::{Error, Result};
use crate::estimator::{estimate_from_summary, EstimateOptions, EstimateResult};
use crate::model::{summarize, MgfInterval, MomentSummary, SumModel};

/// Target residual of the tilt solver, relative to `max(1, |t|)`.
pub const SOLVER_TOLERANCE: f64 = 1e-10;

const MAX_BRACKET_STEPS: i32 = 2100;
const MAX_NEWTON_STEPS: usize = 400;

/// Which end of the essential range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Lower,
    Upper,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Lower => "lower",
            Side::Upper => "upper",
        }
    }
}

/// `A = ess inf X` and `B = ess sup X`; `None` stands for an infinite bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EssentialBounds {
    pub lower: Option<i64>,
    pub upper: Option<i64>,
}

impl EssentialBounds {
    /// Strictly between the bounds.
    pub fn contains_interior(&self, t: f64) -> bool {
        self.lower.is_none_or(|a| (a as f64) < t) && self.upper.is_none_or(|b| t < b as f64)
    }

    fn describe(bound: Option<i64>, neg: bool) -> String {
        match (bound, neg) {
            (Some(v), _) => v.to_string(),
            (None, true) => "-inf".into(),
            (None, false) => "+inf".into(),
        }
    }
}

impl fmt::Display for EssentialBounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            Self::describe(self.lower, true),
            Self::describe(self.upper, false)
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TiltSolution {
    pub target: f64,
    pub theta: f64,
    pub psi_at_theta: f64,
    pub tilted: SumModel,
    pub tilted_moments: MomentSummary,
    /// `|ψ'(θ) - t|`.
    pub residual: f64,
    pub iterations: usize,
}

/// The tilted estimate together with the solve that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct TailEstimate {
    /// Estimate of `Pr[X = t]`. Its `t`, `sigma` and `tau` describe the
    /// tilted sum `Y`; `error_term` is `e^{-g(t)} τ_Y²`.
    pub estimate: EstimateResult,
    pub solution: TiltSolution,
    /// Rate function `g(t) = θt - ψ(θ)`.
    pub rate: f64,
}

/// Result of routing a point through the tilted estimate.
#[derive(Debug, Clone, PartialEq)]
pub enum TiltedPoint {
    Interior(Box<TailEstimate>),
    /// `t` sits on a finite essential bound; the probability is exact.
    Boundary { side: Side, probability: f64 },
    /// `t` lies outside `[A, B]`, so the probability is zero.
    Outside,
}

pub fn mgf_domain_intersection(model: &SumModel) -> MgfInterval {
    model.mgf_domain()
}

pub fn essential_bounds(model: &SumModel) -> EssentialBounds {
    let (lower, upper) = model
        .checked_bounds()
        .expect("bounds are checked when the model is built");
    EssentialBounds {
        lower: Some(lower),
        upper,
    }
}

/// Solves `ψ'(θ) = t` for integer `t` strictly inside `(A, B)`.
pub fn solve_tilt(model: &SumModel, t: i64) -> Result<TiltSolution> {
    solve_tilt_real(model, t as f64)
}

/// Real-valued variant of [`solve_tilt`], for diagnostics.
pub fn solve_tilt_real(model: &SumModel, t: f64) -> Result<TiltSolution> {
    let bounds = essential_bounds(model);
    if model.is_degenerate() || bounds.lower == bounds.upper {
        return Err(Error::DegenerateModel);
    }
    if !bounds.contains_interior(t) {
        return Err(out_of_range(t, &bounds));
    }
    let domain = model.mgf_domain();
    let tol = SOLVER_TOLERANCE * t.abs().max(1.0);
    let f = |theta: f64| -> Result<(f64, f64)> {
        let c = model.cumulants(theta)?;
        Ok((c.psi_prime - t, c.psi_double_prime))
    };

    let (f0, _) = f(0.0)?;
    let (theta, iterations) = if f0 == 0.0 {
        (0.0, 0)
    } else {
        let (lo, hi, f_lo, f_hi) = bracket(&f, &domain, f0)?;
        if f_lo == 0.0 {
            (lo, 0)
        } else if f_hi == 0.0 {
            (hi, 0)
        } else {
            let x0 = if f0 < 0.0 { lo } else { hi };
            let (fx0, dfx0) = f(x0)?;
            newton_bisect(&f, lo, hi, (x0, fx0, dfx0), tol)?
        }
    };

    let c = model.cumulants(theta)?;
    let residual = (c.psi_prime - t).abs();
    if residual > tol {
        return Err(Error::SolverFailed(format!(
            "residual {residual:e} above tolerance {tol:e} at theta = {theta}"
        )));
    }
    let tilted = model.tilt(theta)?;
    let tilted_moments = summarize(&tilted);
    Ok(TiltSolution {
        target: t,
        theta,
        psi_at_theta: c.psi,
        tilted,
        tilted_moments,
        residual,
        iterations,
    })
}

fn out_of_range(t: f64, bounds: &EssentialBounds) -> Error {
    Error::OutOfRange {
        t,
        lower: EssentialBounds::describe(bounds.lower, true),
        upper: EssentialBounds::describe(bounds.upper, false),
    }
}

/// Finds `lo < hi` inside the domain with `f(lo) ≤ 0 ≤ f(hi)`, starting from
/// `θ = 0` and growing geometrically toward the side where the root lies.
/// A finite domain end is approached as `end ∓ 2^{-k}` scaled to the gap.
fn bracket<F>(f: &F, domain: &MgfInterval, f0: f64) -> Result<(f64, f64, f64, f64)>
where
    F: Fn(f64) -> Result<(f64, f64)>,
{
    let upward = f0 < 0.0;
    let end = if upward { domain.hi } else { -domain.lo };
    let mut inner = 0.0;
    let mut f_inner = f0;
    for k in 0..MAX_BRACKET_STEPS {
        let grow = 2f64.powi(k);
        let cand = if end.is_finite() {
            grow.min(end - 0.5 * end.min(1.0) * 2f64.powi(-k))
        } else {
            grow
        };
        if !(cand > inner && cand < end) {
            break;
        }
        let theta = if upward { cand } else { -cand };
        let (fv, _) = f(theta)?;
        if (upward && fv >= 0.0) || (!upward && fv <= 0.0) {
            return Ok(if upward {
                (inner, theta, f_inner, fv)
            } else {
                (theta, -inner, fv, f_inner)
            });
        }
        inner = cand;
        f_inner = fv;
    }
    Err(Error::SolverFailed(
        "could not bracket the root inside the MGF domain".into(),
    ))
}

/// Newton's method on the increasing function `f`, falling back to
/// bisection whenever a step leaves the bracket or fails to halve `|f|`.
fn newton_bisect<F>(
    f: &F,
    mut lo: f64,
    mut hi: f64,
    start: (f64, f64, f64),
    tol: f64,
) -> Result<(f64, usize)>
where
    F: Fn(f64) -> Result<(f64, f64)>,
{
    let (mut x, mut fx, mut dfx) = start;
    let mut best = (x, fx.abs());
    let mut prev_abs = f64::INFINITY;
    for iter in 1..=MAX_NEWTON_STEPS {
        let newton = x - fx / dfx;
        let next = if dfx > 0.0 && newton > lo && newton < hi && fx.abs() <= 0.5 * prev_abs {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if next <= lo || next >= hi {
            // bracket has collapsed to adjacent floats
            return Ok((best.0, iter));
        }
        prev_abs = fx.abs();
        (fx, dfx) = f(next)?;
        x = next;
        if fx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        if fx.abs() < best.1 {
            best = (x, fx.abs());
        }
        if fx.abs() <= tol {
            // one polishing step; kept only if it improves the residual
            let polish = x - fx / dfx;
            if fx != 0.0 && dfx > 0.0 && polish > lo && polish < hi {
                let (fp, _) = f(polish)?;
                if fp.abs() < best.1 {
                    best = (polish, fp.abs());
                }
            }
            return Ok((best.0, iter));
        }
    }
    Ok((best.0, MAX_NEWTON_STEPS))
}

/// `g(t) = sup_θ (θt - ψ(θ))`, attained at the tilt solution.
pub fn rate_function(model: &SumModel, t: i64) -> Result<f64> {
    rate_function_real(model, t as f64)
}

pub fn rate_function_real(model: &SumModel, t: f64) -> Result<f64> {
    let sol = solve_tilt_real(model, t)?;
    Ok(rate_from(&sol))
}

fn rate_from(sol: &TiltSolution) -> f64 {
    if sol.theta == 0.0 {
        0.0
    } else {
        sol.theta * sol.target - sol.psi_at_theta
    }
}

/// Tilted estimate `Pr[X = t] ≈ e^{-g(t)} / (√(2π) σ_Y)`.
pub fn tail_point_estimate(model: &SumModel, t: i64) -> Result<TailEstimate> {
    tail_point_estimate_with(model, t, &EstimateOptions::default())
}

pub fn tail_point_estimate_with(
    model: &SumModel,
    t: i64,
    options: &EstimateOptions,
) -> Result<TailEstimate> {
    let solution = solve_tilt(model, t)?;
    let rate = rate_from(&solution);
    let mut estimate = estimate_from_summary(&solution.tilted_moments, t, options)?;
    estimate.log_estimate -= rate;
    estimate.estimate = estimate.log_estimate.exp();
    estimate.error_term *= (-rate).exp();
    Ok(TailEstimate {
        estimate,
        solution,
        rate,
    })
}

/// Routes `t` to the tilted estimate, the exact boundary atom, or zero.
pub fn tilted_point_probability(model: &SumModel, t: i64) -> Result<TiltedPoint> {
    let bounds = essential_bounds(model);
    for (side, bound) in [(Side::Lower, bounds.lower), (Side::Upper, bounds.upper)] {
        if bound == Some(t) {
            return Ok(TiltedPoint::Boundary {
                side,
                probability: boundary_point_prob(model, side)?,
            });
        }
    }
    if !bounds.contains_interior(t as f64) {
        return Ok(TiltedPoint::Outside);
    }
    Ok(TiltedPoint::Interior(Box::new(tail_point_estimate(model, t)?)))
}

/// `Pr[X = A]` or `Pr[X = B]` as the product of the component atoms.
pub fn boundary_point_prob(model: &SumModel, side: Side) -> Result<f64> {
    let bounds = essential_bounds(model);
    if side == Side::Upper && bounds.upper.is_none() {
        return Err(Error::UnboundedSide(side.name()));
    }
    // every factor is at most 1, so the running product only underflows
    // when the result itself does
    let mut prob = 1.0;
    for c in model.components() {
        let at = match side {
            Side::Lower => c.dist.ess_inf(),
            Side::Upper => c.dist.ess_sup().ok_or(Error::UnboundedSide(side.name()))?,
        };
        prob *= c.dist.pmf(at).powf(c.count as f64);
    }
    Ok(prob)
}
