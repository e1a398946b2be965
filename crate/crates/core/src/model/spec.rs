use std::fmt;

use num_complex::Complex64;

use super::series;
use super::MgfInterval;
use crate::error::{Error, Result};
use crate::numeric::{ln_poisson_pmf, log_sum_exp, pairwise_sum};

/// Tolerance on the raw weight total of a finite support before it is rejected.
pub const FINITE_WEIGHT_TOLERANCE: f64 = 1e-9;

/// One integer-valued component distribution.
///
/// Geometric uses the failures-before-success convention
/// `Pr[Z = k] = p^k (1 - p)` on `k = 0, 1, 2, ...`.
#[derive(Debug, Clone, PartialEq)]
pub enum DistributionSpec {
    Bernoulli { p: f64 },
    Geometric { p: f64 },
    Poisson { rate: f64 },
    Finite(FiniteSupport),
}

/// An explicit finite support, sorted by value, with weights normalized to one.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSupport {
    values: Vec<i64>,
    weights: Vec<f64>,
}

impl FiniteSupport {
    /// Builds a support from `(value, weight)` pairs.
    ///
    /// Weights must be positive and sum to one within [`FINITE_WEIGHT_TOLERANCE`];
    /// they are renormalized afterwards. Values must be distinct.
    pub fn new(pairs: impl IntoIterator<Item = (i64, f64)>) -> Result<Self> {
        let mut pairs: Vec<(i64, f64)> = pairs.into_iter().collect();
        if pairs.is_empty() {
            return Err(Error::InvalidDistribution(
                "finite support needs at least one value".into(),
            ));
        }
        if let Some(&(v, w)) = pairs.iter().find(|(_, w)| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::InvalidDistribution(format!(
                "weight {w} at value {v} is not a positive finite number"
            )));
        }
        pairs.sort_by_key(|&(v, _)| v);
        if let Some(w) = pairs.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidDistribution(format!(
                "value {} appears more than once",
                w[0].0
            )));
        }
        let raw: Vec<f64> = pairs.iter().map(|&(_, w)| w).collect();
        let total = pairwise_sum(&raw);
        if (total - 1.0).abs() > FINITE_WEIGHT_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "weights sum to {total}, expected 1"
            )));
        }
        Ok(Self::normalized(pairs))
    }

    /// Normalizes arbitrary nonnegative weights, dropping zero entries.
    /// Used for tilts, where the input total is not one.
    fn normalized(pairs: Vec<(i64, f64)>) -> Self {
        let pairs: Vec<(i64, f64)> = pairs.into_iter().filter(|&(_, w)| w > 0.0).collect();
        let raw: Vec<f64> = pairs.iter().map(|&(_, w)| w).collect();
        let total = pairwise_sum(&raw);
        Self {
            values: pairs.iter().map(|&(v, _)| v).collect(),
            weights: raw.iter().map(|w| w / total).collect(),
        }
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.values.iter().copied().zip(self.weights.iter().copied())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min_value(&self) -> i64 {
        self.values[0]
    }

    pub fn max_value(&self) -> i64 {
        self.values[self.values.len() - 1]
    }

    fn weighted_sum(&self, f: impl Fn(i64) -> f64) -> f64 {
        let terms: Vec<f64> = self.iter().map(|(v, w)| w * f(v)).collect();
        pairwise_sum(&terms)
    }
}

/// `ψ(θ)` and its first two derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cumulants {
    pub psi: f64,
    pub psi_prime: f64,
    pub psi_double_prime: f64,
}

impl DistributionSpec {
    pub fn bernoulli(p: f64) -> Result<Self> {
        let d = Self::Bernoulli { p };
        d.validate()?;
        Ok(d)
    }

    pub fn geometric(p: f64) -> Result<Self> {
        let d = Self::Geometric { p };
        d.validate()?;
        Ok(d)
    }

    pub fn poisson(rate: f64) -> Result<Self> {
        let d = Self::Poisson { rate };
        d.validate()?;
        Ok(d)
    }

    pub fn finite(pairs: impl IntoIterator<Item = (i64, f64)>) -> Result<Self> {
        Ok(Self::Finite(FiniteSupport::new(pairs)?))
    }

    /// A point mass at `value`.
    pub fn constant(value: i64) -> Self {
        Self::Finite(FiniteSupport {
            values: vec![value],
            weights: vec![1.0],
        })
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            Self::Bernoulli { .. } => "bernoulli",
            Self::Geometric { .. } => "geometric",
            Self::Poisson { .. } => "poisson",
            Self::Finite(_) => "finite",
        }
    }

    /// Checks the parameter invariants of the family.
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Bernoulli { p } => {
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::InvalidDistribution(format!(
                        "bernoulli p = {p} is outside [0, 1]"
                    )));
                }
            }
            Self::Geometric { p } => {
                if !(0.0..1.0).contains(&p) {
                    return Err(Error::InvalidDistribution(format!(
                        "geometric p = {p} is outside [0, 1)"
                    )));
                }
            }
            Self::Poisson { rate } => {
                if !(rate.is_finite() && rate > 0.0) {
                    return Err(Error::InvalidDistribution(format!(
                        "poisson rate = {rate} is not a positive finite number"
                    )));
                }
            }
            Self::Finite(ref s) => {
                if s.is_empty() {
                    return Err(Error::InvalidDistribution("empty finite support".into()));
                }
            }
        }
        Ok(())
    }

    /// The value of an almost surely constant distribution, if it is one.
    pub fn constant_value(&self) -> Option<i64> {
        match *self {
            Self::Bernoulli { p } if p == 0.0 => Some(0),
            Self::Bernoulli { p } if p == 1.0 => Some(1),
            Self::Geometric { p } if p == 0.0 => Some(0),
            Self::Finite(ref s) if s.len() == 1 => Some(s.values[0]),
            _ => None,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.constant_value().is_some()
    }

    pub fn mean(&self) -> f64 {
        match *self {
            Self::Bernoulli { p } => p,
            Self::Geometric { p } => p / (1.0 - p),
            Self::Poisson { rate } => rate,
            Self::Finite(ref s) => s.weighted_sum(|v| v as f64),
        }
    }

    pub fn variance(&self) -> f64 {
        match *self {
            Self::Bernoulli { p } => p * (1.0 - p),
            Self::Geometric { p } => p / ((1.0 - p) * (1.0 - p)),
            Self::Poisson { rate } => rate,
            Self::Finite(ref s) => {
                let mu = self.mean();
                s.weighted_sum(|v| (v as f64 - mu).powi(2))
            }
        }
    }

    /// `E|X - E X|^3`.
    ///
    /// Closed form for Bernoulli, exact weighted sum for finite supports and
    /// a certified truncated series for geometric and Poisson.
    pub fn abs_third_central_moment(&self) -> f64 {
        match *self {
            Self::Bernoulli { p } => {
                let q = 1.0 - p;
                p * q * (p * p + q * q)
            }
            Self::Finite(ref s) => {
                let mu = self.mean();
                s.weighted_sum(|v| (v as f64 - mu).abs().powi(3))
            }
            Self::Geometric { .. } | Self::Poisson { .. } => {
                if self.is_degenerate() {
                    0.0
                } else {
                    series::abs_central_moment(self, 3).value
                }
            }
        }
    }

    /// Characteristic function `E[e^{i·arg·X}]`.
    pub fn char_fn(&self, arg: f64) -> Complex64 {
        if arg == 0.0 {
            return Complex64::new(1.0, 0.0);
        }
        match *self {
            Self::Bernoulli { p } => Complex64::new(1.0 - p, 0.0) + p * Complex64::cis(arg),
            Self::Geometric { p } => {
                Complex64::new(1.0 - p, 0.0) / (Complex64::new(1.0, 0.0) - p * Complex64::cis(arg))
            }
            Self::Poisson { rate } => {
                let half = (0.5 * arg).sin();
                Complex64::from_polar((-2.0 * rate * half * half).exp(), rate * arg.sin())
            }
            Self::Finite(ref s) => {
                let re: Vec<f64> = s.iter().map(|(v, w)| w * (arg * v as f64).cos()).collect();
                let im: Vec<f64> = s.iter().map(|(v, w)| w * (arg * v as f64).sin()).collect();
                Complex64::new(pairwise_sum(&re), pairwise_sum(&im))
            }
        }
    }

    /// `|E[e^{i·arg·X}]|^2` from the family's closed form.
    pub fn char_fn_modulus_sq(&self, arg: f64) -> f64 {
        if arg == 0.0 || self.is_degenerate() {
            return 1.0;
        }
        // cos(arg) - 1 = -2 sin^2(arg/2), kept in the sine form for accuracy near 0
        let half_sq = (0.5 * arg).sin().powi(2);
        match *self {
            Self::Bernoulli { p } => 1.0 - 4.0 * p * (1.0 - p) * half_sq,
            Self::Geometric { p } => (1.0 - p).powi(2) / ((1.0 - p).powi(2) + 4.0 * p * half_sq),
            Self::Poisson { rate } => (-4.0 * rate * half_sq).exp(),
            Self::Finite(_) => self.char_fn(arg).norm_sqr(),
        }
    }

    /// `ln |E[e^{i·arg·X}]|`, finite wherever the modulus is positive.
    pub fn ln_char_fn_modulus(&self, arg: f64) -> f64 {
        if arg == 0.0 || self.is_degenerate() {
            return 0.0;
        }
        let half_sq = (0.5 * arg).sin().powi(2);
        match *self {
            Self::Bernoulli { p } => 0.5 * (-4.0 * p * (1.0 - p) * half_sq).ln_1p(),
            Self::Geometric { p } => {
                (-p).ln_1p() - 0.5 * ((1.0 - p).powi(2) + 4.0 * p * half_sq).ln()
            }
            Self::Poisson { rate } => -2.0 * rate * half_sq,
            Self::Finite(_) => 0.5 * self.char_fn_modulus_sq(arg).ln(),
        }
    }

    /// The set of `θ` with finite moment generating function.
    pub fn mgf_domain(&self) -> MgfInterval {
        match *self {
            Self::Geometric { p } if p > 0.0 => MgfInterval::new(f64::NEG_INFINITY, -p.ln(), true, true),
            _ => MgfInterval::real_line(),
        }
    }

    fn check_interior(&self, theta: f64) -> Result<()> {
        let domain = self.mgf_domain();
        if domain.contains_interior(theta) {
            Ok(())
        } else {
            Err(Error::Domain {
                theta,
                domain: domain.to_string(),
            })
        }
    }

    /// Cumulant generating function `ψ(θ) = ln E[e^{θX}]` with `ψ'` and `ψ''`.
    pub fn cumulants(&self, theta: f64) -> Result<Cumulants> {
        self.check_interior(theta)?;
        if theta == 0.0 {
            return Ok(Cumulants {
                psi: 0.0,
                psi_prime: self.mean(),
                psi_double_prime: self.variance(),
            });
        }
        if let Some(c) = self.constant_value() {
            return Ok(Cumulants {
                psi: c as f64 * theta,
                psi_prime: c as f64,
                psi_double_prime: 0.0,
            });
        }
        Ok(match *self {
            Self::Bernoulli { p } => {
                let psi = if theta <= 0.0 {
                    (p * theta.exp_m1()).ln_1p()
                } else {
                    theta + ((1.0 - p) * (-theta).exp_m1()).ln_1p()
                };
                let q = bernoulli_tilt(p, theta);
                Cumulants {
                    psi,
                    psi_prime: q,
                    psi_double_prime: q * (1.0 - q),
                }
            }
            Self::Geometric { p } => {
                let s = theta + p.ln();
                let q = s.exp();
                let one_minus_q = -s.exp_m1();
                Cumulants {
                    psi: (-p).ln_1p() - one_minus_q.ln(),
                    psi_prime: q / one_minus_q,
                    psi_double_prime: q / (one_minus_q * one_minus_q),
                }
            }
            Self::Poisson { rate } => {
                let tilted = rate * theta.exp();
                Cumulants {
                    psi: rate * theta.exp_m1(),
                    psi_prime: tilted,
                    psi_double_prime: tilted,
                }
            }
            Self::Finite(ref s) => {
                let logs: Vec<f64> = s.iter().map(|(v, w)| w.ln() + theta * v as f64).collect();
                let psi = log_sum_exp(&logs);
                let probs: Vec<f64> = logs.iter().map(|l| (l - psi).exp()).collect();
                let mean_terms: Vec<f64> = s.values.iter().zip(&probs).map(|(&v, q)| q * v as f64).collect();
                let mean = pairwise_sum(&mean_terms);
                let var_terms: Vec<f64> = s
                    .values
                    .iter()
                    .zip(&probs)
                    .map(|(&v, q)| q * (v as f64 - mean).powi(2))
                    .collect();
                Cumulants {
                    psi,
                    psi_prime: mean,
                    psi_double_prime: pairwise_sum(&var_terms),
                }
            }
        })
    }

    pub fn psi(&self, theta: f64) -> Result<f64> {
        Ok(self.cumulants(theta)?.psi)
    }

    pub fn psi_prime(&self, theta: f64) -> Result<f64> {
        Ok(self.cumulants(theta)?.psi_prime)
    }

    pub fn psi_double_prime(&self, theta: f64) -> Result<f64> {
        Ok(self.cumulants(theta)?.psi_double_prime)
    }

    /// Exponential tilt `Pr[X_θ = k] ∝ Pr[X = k] e^{θk}`; stays in the same family.
    pub fn tilt(&self, theta: f64) -> Result<Self> {
        self.check_interior(theta)?;
        if theta == 0.0 || self.is_degenerate() {
            return Ok(self.clone());
        }
        Ok(match *self {
            Self::Bernoulli { p } => Self::Bernoulli {
                p: bernoulli_tilt(p, theta),
            },
            Self::Geometric { p } => Self::Geometric {
                p: (theta + p.ln()).exp(),
            },
            Self::Poisson { rate } => Self::Poisson {
                rate: rate * theta.exp(),
            },
            Self::Finite(ref s) => {
                let logs: Vec<f64> = s.iter().map(|(v, w)| w.ln() + theta * v as f64).collect();
                let shift = log_sum_exp(&logs);
                Self::Finite(FiniteSupport::normalized(
                    s.values.iter().zip(&logs).map(|(&v, l)| (v, (l - shift).exp())).collect(),
                ))
            }
        })
    }

    /// Essential infimum; always finite for the supported families.
    pub fn ess_inf(&self) -> i64 {
        match *self {
            Self::Bernoulli { p } if p == 1.0 => 1,
            Self::Finite(ref s) => s.min_value(),
            _ => 0,
        }
    }

    /// Essential supremum, `None` when unbounded.
    pub fn ess_sup(&self) -> Option<i64> {
        match *self {
            Self::Bernoulli { p } => Some(if p > 0.0 { 1 } else { 0 }),
            Self::Geometric { p } if p == 0.0 => Some(0),
            Self::Geometric { .. } | Self::Poisson { .. } => None,
            Self::Finite(ref s) => Some(s.max_value()),
        }
    }

    /// `ln Pr[X = k]`, `-inf` off the support.
    pub fn ln_pmf(&self, k: i64) -> f64 {
        match *self {
            Self::Bernoulli { p } => match k {
                0 => (-p).ln_1p(),
                1 => p.ln(),
                _ => f64::NEG_INFINITY,
            },
            Self::Geometric { p } => {
                if k < 0 {
                    f64::NEG_INFINITY
                } else if k == 0 {
                    (-p).ln_1p()
                } else {
                    k as f64 * p.ln() + (-p).ln_1p()
                }
            }
            Self::Poisson { rate } => {
                if k < 0 {
                    f64::NEG_INFINITY
                } else {
                    ln_poisson_pmf(k as u64, rate)
                }
            }
            Self::Finite(ref s) => match s.values.binary_search(&k) {
                Ok(i) => s.weights[i].ln(),
                Err(_) => f64::NEG_INFINITY,
            },
        }
    }

    pub fn pmf(&self, k: i64) -> f64 {
        match *self {
            Self::Bernoulli { p } => match k {
                0 => 1.0 - p,
                1 => p,
                _ => 0.0,
            },
            Self::Finite(ref s) => match s.values.binary_search(&k) {
                Ok(i) => s.weights[i],
                Err(_) => 0.0,
            },
            _ => self.ln_pmf(k).exp(),
        }
    }
}

/// Bernoulli success probability after tilting by `theta`, evaluated without overflow.
fn bernoulli_tilt(p: f64, theta: f64) -> f64 {
    if theta <= 0.0 {
        p * theta.exp() / (1.0 + p * theta.exp_m1())
    } else {
        p / (p + (1.0 - p) * (-theta).exp())
    }
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Bernoulli { p } => write!(f, "Bernoulli({p})"),
            Self::Geometric { p } => write!(f, "Geometric({p})"),
            Self::Poisson { rate } => write!(f, "Poisson({rate})"),
            Self::Finite(s) => {
                write!(f, "Finite{{")?;
                for (i, (v, w)) in s.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "({v}, {w})")?;
                }
                write!(f, "}}")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    /// Direct truncated series, independent of `series` and the closed forms.
    fn brute_series(pmf: impl Fn(u64) -> f64, f: impl Fn(f64) -> f64, terms: u64) -> f64 {
        (0..terms).map(|k| pmf(k) * f(k as f64)).sum()
    }

    fn poisson_pmf_recurrence(rate: f64) -> impl Fn(u64) -> f64 {
        move |k| {
            let mut p = (-rate).exp();
            for j in 1..=k {
                p *= rate / j as f64;
            }
            p
        }
    }

    #[test]
    fn means() {
        assert_eq!(DistributionSpec::bernoulli(0.0).unwrap().mean(), 0.0);
        assert_eq!(DistributionSpec::geometric(0.5).unwrap().mean(), 1.0);
        assert_eq!(DistributionSpec::finite([(-1, 0.5), (1, 0.5)]).unwrap().mean(), 0.0);
    }

    #[test]
    fn variances_against_series_oracles() {
        assert_eq!(DistributionSpec::bernoulli(0.5).unwrap().variance(), 0.25);

        // Σ k² p^k (1-p) - mean², p = 1/2, truncated at 200 terms (tail < 1e-50)
        let g = DistributionSpec::geometric(0.5).unwrap();
        let second = brute_series(|k| 0.5f64.powi(k as i32) * 0.5, |k| k * k, 200);
        assert!(close(second - 1.0, 2.0, 1e-14));
        assert!(close(g.variance(), second - 1.0, 1e-14));

        let p = DistributionSpec::poisson(3.0).unwrap();
        let pmf = poisson_pmf_recurrence(3.0);
        let m1 = brute_series(&pmf, |k| k, 80);
        let m2 = brute_series(&pmf, |k| k * k, 80);
        assert!(close(p.variance(), m2 - m1 * m1, 1e-13));
    }

    #[test]
    fn third_moments() {
        let b = DistributionSpec::bernoulli(0.3).unwrap();
        // enumerate {0, 1} directly
        let direct = 0.7 * 0.3f64.powi(3) + 0.3 * 0.7f64.powi(3);
        assert!(close(b.abs_third_central_moment(), 0.1218, 1e-14));
        assert!(close(b.abs_third_central_moment(), direct, 1e-14));

        for c in [-4, 0, 17] {
            assert_eq!(DistributionSpec::constant(c).abs_third_central_moment(), 0.0);
        }

        let pois = DistributionSpec::poisson(2.0).unwrap();
        let oracle = brute_series(poisson_pmf_recurrence(2.0), |k| (k - 2.0).abs().powi(3), 60);
        assert!(close(pois.abs_third_central_moment(), oracle, 1e-13));

        let geo = DistributionSpec::geometric(0.8).unwrap();
        let mu = 4.0;
        let oracle = brute_series(|k| 0.8f64.powi(k as i32) * 0.2, |k| (k - mu).abs().powi(3), 600);
        assert!(close(geo.abs_third_central_moment(), oracle, 1e-13));
    }

    #[test]
    fn char_fn_examples() {
        let b = DistributionSpec::bernoulli(0.5).unwrap();
        assert!(b.char_fn(PI).norm() < 1e-16);
        for d in [
            b.clone(),
            DistributionSpec::geometric(0.3).unwrap(),
            DistributionSpec::poisson(4.0).unwrap(),
            DistributionSpec::finite([(-3, 0.2), (5, 0.8)]).unwrap(),
        ] {
            let z = d.char_fn(0.0);
            assert!((z - Complex64::new(1.0, 0.0)).norm() < 1e-15, "{d}");
        }
        let f = DistributionSpec::finite([(0, 0.5), (2, 0.5)]).unwrap();
        assert!(f.char_fn(PI / 2.0).norm() < 1e-16);
    }

    #[test]
    fn modulus_closed_forms() {
        let p = 0.37;
        let b = DistributionSpec::bernoulli(p).unwrap();
        for lam in [0.1, 1.0, 2.5, PI] {
            let expected = 1.0 + 2.0 * p * (1.0 - p) * (f64::cos(lam) - 1.0);
            assert!(close(b.char_fn_modulus_sq(lam), expected, 1e-14));
        }
        let g = DistributionSpec::geometric(0.5).unwrap();
        assert!(close(g.char_fn_modulus_sq(PI), 1.0 / 9.0, 1e-15));
        let w = DistributionSpec::poisson(1.7).unwrap();
        for lam in [0.3, 1.9, PI] {
            assert!(close(w.char_fn_modulus_sq(lam), (2.0 * 1.7 * (f64::cos(lam) - 1.0)).exp(), 1e-14));
        }
    }

    #[test]
    fn mgf_domains() {
        assert_eq!(DistributionSpec::bernoulli(0.3).unwrap().mgf_domain(), MgfInterval::real_line());
        let g = DistributionSpec::geometric(0.5).unwrap().mgf_domain();
        assert_eq!(g.lo, f64::NEG_INFINITY);
        assert!(close(g.hi, 2f64.ln(), 1e-16));
        assert!(g.hi_open);
        assert_eq!(
            DistributionSpec::finite([(-5, 0.5), (7, 0.5)]).unwrap().mgf_domain(),
            MgfInterval::real_line()
        );
    }

    #[test]
    fn cumulants_at_zero_are_moments() {
        for d in [
            DistributionSpec::bernoulli(0.3).unwrap(),
            DistributionSpec::geometric(0.6).unwrap(),
            DistributionSpec::poisson(2.2).unwrap(),
            DistributionSpec::finite([(-2, 0.25), (0, 0.25), (9, 0.5)]).unwrap(),
        ] {
            let c = d.cumulants(0.0).unwrap();
            assert_eq!(c.psi, 0.0);
            assert_eq!(c.psi_prime, d.mean());
            assert_eq!(c.psi_double_prime, d.variance());
        }
    }

    #[test]
    fn poisson_psi_closed_form() {
        let d = DistributionSpec::poisson(2.0).unwrap();
        assert!(close(d.psi(2f64.ln()).unwrap(), 2.0, 1e-15));
    }

    #[test]
    fn geometric_psi_prime_blows_up_at_boundary() {
        let d = DistributionSpec::geometric(0.5).unwrap();
        let hi = 2f64.ln();
        let mut last = 0.0;
        for k in 1..40 {
            let v = d.psi_prime(hi - 2f64.powi(-k)).unwrap();
            assert!(v > last);
            last = v;
        }
        assert!(last > 1e10);
        assert!(matches!(d.psi(hi), Err(Error::Domain { .. })));
        assert!(matches!(d.tilt(1.0), Err(Error::Domain { .. })));
    }

    #[test]
    fn tilt_examples() {
        let d = DistributionSpec::poisson(2.0).unwrap();
        match d.tilt(2f64.ln()).unwrap() {
            DistributionSpec::Poisson { rate } => assert!(close(rate, 4.0, 1e-15)),
            other => panic!("{other}"),
        }
        match DistributionSpec::bernoulli(0.5).unwrap().tilt((7.0f64 / 3.0).ln()).unwrap() {
            DistributionSpec::Bernoulli { p } => assert!(close(p, 0.7, 1e-15)),
            other => panic!("{other}"),
        }
        let f = DistributionSpec::finite([(1, 0.2), (4, 0.8)]).unwrap();
        assert_eq!(f.tilt(0.0).unwrap(), f);
    }

    #[test]
    fn finite_validation() {
        assert!(DistributionSpec::finite([]).is_err());
        assert!(DistributionSpec::finite([(1, 0.5), (1, 0.5)]).is_err());
        assert!(DistributionSpec::finite([(1, 0.5), (2, 0.4)]).is_err());
        assert!(DistributionSpec::finite([(1, -0.5), (2, 1.5)]).is_err());
        let f = DistributionSpec::finite([(3, 0.5 + 4e-10), (1, 0.5)]).unwrap();
        if let DistributionSpec::Finite(s) = f {
            assert_eq!(s.values(), &[1, 3]);
            assert!((s.weights().iter().sum::<f64>() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(DistributionSpec::bernoulli(1.2).is_err());
        assert!(DistributionSpec::bernoulli(f64::NAN).is_err());
        assert!(DistributionSpec::geometric(1.0).is_err());
        assert!(DistributionSpec::poisson(0.0).is_err());
        assert!(DistributionSpec::bernoulli(1.0).is_ok());
    }
}
