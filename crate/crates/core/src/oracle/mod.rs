//! Ground truth for point probabilities.
//!
//! Three independent routes: direct convolution of truncated component
//! PMFs, trapezoidal inversion of the characteristic function, and Monte
//! Carlo sampling.

mod inversion;
mod sampling;

pub use inversion::{default_quad_points, inversion_prob, Inversion, InversionGrid};
pub use sampling::{mc_estimate, McEstimate};

use crate::error::{Error, Result};
use crate::model::{DistributionSpec, SumModel};
use crate::numeric::pairwise_sum;

/// Largest dense support window `exact_pmf` will allocate by default.
pub const DEFAULT_SUPPORT_CAP: u64 = 10_000_000;

/// A dense PMF on `offset, offset + 1, ...`, plus the mass cut away by truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    pub offset: i64,
    pub masses: Vec<f64>,
    /// Upper bound on the probability mass outside the window.
    pub tail_defect: f64,
}

impl Pmf {
    pub fn point(value: i64) -> Self {
        Self {
            offset: value,
            masses: vec![1.0],
            tail_defect: 0.0,
        }
    }

    /// `Pr[X = n]` within the window, zero outside it.
    pub fn get(&self, n: i64) -> f64 {
        n.checked_sub(self.offset)
            .and_then(|i| usize::try_from(i).ok())
            .and_then(|i| self.masses.get(i).copied())
            .unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    /// Last value covered by the window.
    pub fn end(&self) -> i64 {
        self.offset + self.masses.len() as i64 - 1
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.masses
            .iter()
            .enumerate()
            .map(move |(i, &m)| (self.offset + i as i64, m))
    }

    pub fn total_mass(&self) -> f64 {
        pairwise_sum(&self.masses)
    }

    /// Schoolbook convolution; the PMF of the sum of two independent variables.
    pub fn convolve(&self, other: &Pmf) -> Pmf {
        let mut out = vec![0.0; self.len() + other.len() - 1];
        for (i, &a) in self.masses.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (o, &b) in out[i..].iter_mut().zip(&other.masses) {
                *o += a * b;
            }
        }
        Pmf {
            offset: self.offset + other.offset,
            masses: out,
            tail_defect: self.tail_defect + other.tail_defect,
        }
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps <= 1e-6 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("eps = {eps} is outside (0, 1e-6]")))
    }
}

/// Inclusive value window holding all but at most `eps` of the mass, and the
/// certified bound on what is left out.
pub(crate) fn truncation_window(d: &DistributionSpec, eps: f64) -> (i64, i64, f64) {
    match *d {
        DistributionSpec::Bernoulli { .. } => (0, 1, 0.0),
        DistributionSpec::Finite(ref s) => (s.min_value(), s.max_value(), 0.0),
        DistributionSpec::Geometric { p } => {
            if p == 0.0 {
                return (0, 0, 0.0);
            }
            // Pr[Z > K] = p^{K+1}
            let k = (eps.ln() / p.ln()).ceil().max(0.0) as i64;
            (0, k, p.powf((k + 1) as f64))
        }
        DistributionSpec::Poisson { rate } => {
            // Chernoff: Pr[W ≥ j] ≤ e^{-λ}(eλ/j)^j for j > λ, and
            // Pr[W ≤ j] ≤ the same expression for j < λ.
            let log_bound = |j: i64| -> f64 {
                if j == 0 {
                    -rate
                } else {
                    let j = j as f64;
                    -rate + j * (1.0 + rate.ln() - j.ln())
                }
            };
            let target = (0.5 * eps).ln();
            let mut hi = rate.floor() as i64;
            while log_bound(hi + 1) > target {
                hi += 1;
            }
            let mut lo_excluded = rate.ceil() as i64 - 1;
            while lo_excluded >= 0 && log_bound(lo_excluded) > target {
                lo_excluded -= 1;
            }
            let mut defect = log_bound(hi + 1).exp();
            if lo_excluded >= 0 {
                defect += log_bound(lo_excluded).exp();
            }
            (lo_excluded + 1, hi, defect)
        }
    }
}

/// Finite window of one component's PMF with at most `eps` mass left out.
pub fn truncate(d: &DistributionSpec, eps: f64) -> Result<Pmf> {
    check_eps(eps)?;
    Ok(truncate_unchecked(d, eps))
}

fn truncate_unchecked(d: &DistributionSpec, eps: f64) -> Pmf {
    let (lo, hi, tail_defect) = truncation_window(d, eps);
    let masses = match *d {
        DistributionSpec::Geometric { p } => {
            let q = 1.0 - p;
            (lo..=hi).map(|k| q * p.powi(k as i32)).collect()
        }
        _ => (lo..=hi).map(|k| d.pmf(k)).collect(),
    };
    Pmf {
        offset: lo,
        masses,
        tail_defect,
    }
}

/// PMF of the whole sum by direct convolution.
pub fn exact_pmf(model: &SumModel, eps: f64) -> Result<Pmf> {
    exact_pmf_with_cap(model, eps, DEFAULT_SUPPORT_CAP)
}

/// As [`exact_pmf`] with an explicit cap on the dense window size.
///
/// The truncation budget is split evenly over the expanded summands, so the
/// total defect stays below `eps`. Components are combined pairwise in a
/// fixed binary tree over the expanded list.
pub fn exact_pmf_with_cap(model: &SumModel, eps: f64, cap: u64) -> Result<Pmf> {
    check_eps(eps)?;
    let per_summand = eps / model.expanded_len() as f64;
    let pieces: Vec<(Pmf, u64)> = model
        .components()
        .iter()
        .map(|c| (truncate_unchecked(&c.dist, per_summand), c.count))
        .collect();
    let width: u64 = 1 + pieces
        .iter()
        .map(|(p, count)| (p.len() as u64 - 1).saturating_mul(*count))
        .fold(0u64, u64::saturating_add);
    if width > cap {
        return Err(Error::ResourceLimit {
            requested: width,
            cap,
        });
    }
    let mut level: Vec<Pmf> = pieces
        .into_iter()
        .flat_map(|(p, count)| std::iter::repeat_n(p, count as usize))
        .collect();
    while level.len() > 1 {
        level = level
            .chunks(2)
            .map(|pair| match pair {
                [a, b] => a.convolve(b),
                [a] => a.clone(),
                _ => unreachable!(),
            })
            .collect();
    }
    Ok(level.pop().expect("model has at least one summand"))
}
