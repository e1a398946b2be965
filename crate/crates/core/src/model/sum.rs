use super::spec::Cumulants;
use super::{DistributionSpec, MgfInterval};
use crate::error::{Error, Result};
use crate::numeric::pairwise_sum;

/// One distinct component of a sum together with its multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub dist: DistributionSpec,
    pub count: u64,
}

/// `X = Σ X_j` over independent components, stored with multiplicities.
#[derive(Debug, Clone, PartialEq)]
pub struct SumModel {
    components: Vec<Component>,
}

/// First three absolute central moment sums of a model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSummary {
    pub mu: f64,
    pub sigma_sq: f64,
    /// `Σ E|X_j - μ_j|^3`.
    pub eta: f64,
    /// `η / σ^3`; `None` for a constant model.
    pub tau: Option<f64>,
}

impl MomentSummary {
    pub fn sigma(&self) -> f64 {
        self.sigma_sq.sqrt()
    }
}

impl SumModel {
    pub fn new(components: impl IntoIterator<Item = (DistributionSpec, u64)>) -> Result<Self> {
        let components: Vec<Component> = components
            .into_iter()
            .map(|(dist, count)| Component { dist, count })
            .collect();
        if components.is_empty() {
            return Err(Error::InvalidModel("model has no components".into()));
        }
        for (i, c) in components.iter().enumerate() {
            if c.count == 0 {
                return Err(Error::InvalidModel(format!("component {i} has count 0")));
            }
            c.dist
                .validate()
                .map_err(|e| Error::InvalidModel(format!("component {i}: {e}")))?;
        }
        let model = Self { components };
        model.checked_bounds()?;
        Ok(model)
    }

    /// A model with a single copy of `dist`.
    pub fn single(dist: DistributionSpec) -> Result<Self> {
        Self::new([(dist, 1)])
    }

    /// `count` i.i.d. copies of `dist`.
    pub fn iid(dist: DistributionSpec, count: u64) -> Result<Self> {
        Self::new([(dist, count)])
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    /// Number of summands `k` after expanding multiplicities.
    pub fn expanded_len(&self) -> u64 {
        self.components.iter().map(|c| c.count).sum()
    }

    /// Expanded list of summands in model order.
    pub fn expanded(&self) -> impl Iterator<Item = &DistributionSpec> + '_ {
        self.components
            .iter()
            .flat_map(|c| std::iter::repeat_n(&c.dist, c.count as usize))
    }

    /// True when every summand has zero variance.
    pub fn is_degenerate(&self) -> bool {
        self.components.iter().all(|c| c.dist.is_degenerate())
    }

    /// Sum of `count * f(component)` with fixed pairwise order.
    pub(crate) fn weighted(&self, f: impl Fn(&DistributionSpec) -> f64) -> f64 {
        let terms: Vec<f64> = self
            .components
            .iter()
            .map(|c| c.count as f64 * f(&c.dist))
            .collect();
        pairwise_sum(&terms)
    }

    pub fn mean(&self) -> f64 {
        self.weighted(DistributionSpec::mean)
    }

    pub fn variance(&self) -> f64 {
        self.weighted(DistributionSpec::variance)
    }

    pub fn summarize(&self) -> MomentSummary {
        summarize(self)
    }

    /// Intersection of the component MGF domains.
    pub fn mgf_domain(&self) -> MgfInterval {
        self.components
            .iter()
            .fold(MgfInterval::real_line(), |acc, c| acc.intersect(&c.dist.mgf_domain()))
    }

    /// `ψ_X(θ)` and derivatives of the sum.
    pub fn cumulants(&self, theta: f64) -> Result<Cumulants> {
        let per: Vec<Cumulants> = self
            .components
            .iter()
            .map(|c| c.dist.cumulants(theta))
            .collect::<Result<_>>()?;
        let sum = |f: fn(&Cumulants) -> f64| {
            let terms: Vec<f64> = per
                .iter()
                .zip(&self.components)
                .map(|(k, c)| c.count as f64 * f(k))
                .collect();
            pairwise_sum(&terms)
        };
        Ok(Cumulants {
            psi: sum(|k| k.psi),
            psi_prime: sum(|k| k.psi_prime),
            psi_double_prime: sum(|k| k.psi_double_prime),
        })
    }

    /// Tilts every component by `theta`.
    pub fn tilt(&self, theta: f64) -> Result<Self> {
        let components = self
            .components
            .iter()
            .map(|c| {
                Ok(Component {
                    dist: c.dist.tilt(theta)?,
                    count: c.count,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self { components })
    }

    /// Essential infimum and supremum of the sum, `None` meaning infinite.
    pub(crate) fn checked_bounds(&self) -> Result<(i64, Option<i64>)> {
        let overflow = || Error::InvalidModel("essential bounds overflow a 64-bit integer".into());
        let mut lower: i64 = 0;
        let mut upper: Option<i64> = Some(0);
        for c in &self.components {
            let count = i64::try_from(c.count).map_err(|_| overflow())?;
            let lo = c.dist.ess_inf().checked_mul(count).ok_or_else(overflow)?;
            lower = lower.checked_add(lo).ok_or_else(overflow)?;
            upper = match (upper, c.dist.ess_sup()) {
                (Some(u), Some(s)) => Some(
                    s.checked_mul(count)
                        .and_then(|v| u.checked_add(v))
                        .ok_or_else(overflow)?,
                ),
                _ => None,
            };
        }
        Ok((lower, upper))
    }
}

/// Componentwise `μ`, `σ²`, `η = Σ E|X_j - μ_j|^3` and `τ = η / σ^3`.
pub fn summarize(model: &SumModel) -> MomentSummary {
    let mu = model.mean();
    let sigma_sq = model.variance();
    let eta = model.weighted(DistributionSpec::abs_third_central_moment);
    let tau = (sigma_sq > 0.0).then(|| eta / (sigma_sq * sigma_sq.sqrt()));
    MomentSummary {
        mu,
        sigma_sq,
        eta,
        tau,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_summary() {
        let m = SumModel::iid(DistributionSpec::bernoulli(0.5).unwrap(), 100).unwrap();
        let s = summarize(&m);
        assert_eq!(s.mu, 50.0);
        assert_eq!(s.sigma_sq, 25.0);
        // per component 0.25 * (0.25 + 0.25) = 0.125
        assert_eq!(s.eta, 12.5);
        assert!((s.tau.unwrap() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn constant_model_has_no_tau() {
        let m = SumModel::single(DistributionSpec::finite([(3, 1.0)]).unwrap()).unwrap();
        let s = summarize(&m);
        assert_eq!((s.mu, s.sigma_sq), (3.0, 0.0));
        assert!(s.tau.is_none());
        assert!(m.is_degenerate());
    }

    #[test]
    fn mixed_summary_is_componentwise() {
        let b = DistributionSpec::bernoulli(0.2).unwrap();
        let p = DistributionSpec::poisson(1.0).unwrap();
        let m = SumModel::new([(b.clone(), 10), (p.clone(), 5)]).unwrap();
        let s = summarize(&m);
        assert!((s.mu - (10.0 * 0.2 + 5.0)).abs() < 1e-14);
        assert!((s.sigma_sq - (10.0 * 0.16 + 5.0)).abs() < 1e-14);
        let eta = 10.0 * b.abs_third_central_moment() + 5.0 * p.abs_third_central_moment();
        assert!((s.eta - eta).abs() < 1e-14);
        assert!(!m.is_degenerate());
    }

    #[test]
    fn rejects_bad_models() {
        assert!(SumModel::new(Vec::new()).is_err());
        assert!(SumModel::new([(DistributionSpec::poisson(1.0).unwrap(), 0)]).is_err());
        assert!(SumModel::new([(DistributionSpec::Bernoulli { p: 2.0 }, 1)]).is_err());
        let huge = DistributionSpec::finite([(i64::MAX / 2, 1.0)]).unwrap();
        assert!(SumModel::new([(huge, 3)]).is_err());
    }

    #[test]
    fn expanded_iterates_multiplicities() {
        let m = SumModel::new([
            (DistributionSpec::bernoulli(0.1).unwrap(), 2),
            (DistributionSpec::poisson(1.0).unwrap(), 3),
        ])
        .unwrap();
        assert_eq!(m.expanded().count(), 5);
        assert_eq!(m.expanded_len(), 5);
    }
}
