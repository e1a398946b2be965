use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Poisson};

use crate::error::{Error, Result};
use crate::model::{DistributionSpec, SumModel};
use crate::tilting::essential_bounds;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub probability: f64,
    /// Binomial standard error `√(p̂(1-p̂)/samples)`.
    pub stderr: f64,
    pub samples: u64,
}

/// Draws the sum of `count` independent copies of one component.
enum Sampler {
    Fixed(i64),
    Binomial(Binomial),
    Poisson(Poisson<f64>),
    /// Inverse CDF: `⌊ln U / ln p⌋` with `U` uniform on `(0, 1]`.
    Geometric { ln_p: f64, count: u64 },
    Finite { values: Vec<i64>, cdf: Vec<f64>, count: u64 },
}

impl Sampler {
    fn new(dist: &DistributionSpec, count: u64) -> Result<Self> {
        let bad = |e: &dyn std::fmt::Display| Error::InvalidArgument(format!("sampler for {dist}: {e}"));
        if let Some(c) = dist.constant_value() {
            return Ok(Sampler::Fixed(c * count as i64));
        }
        Ok(match *dist {
            DistributionSpec::Bernoulli { p } => Sampler::Binomial(Binomial::new(count, p).map_err(|e| bad(&e))?),
            DistributionSpec::Poisson { rate } => {
                Sampler::Poisson(Poisson::new(rate * count as f64).map_err(|e| bad(&e))?)
            }
            DistributionSpec::Geometric { p } => Sampler::Geometric { ln_p: p.ln(), count },
            DistributionSpec::Finite(ref s) => {
                let mut acc = 0.0;
                let cdf = s
                    .weights()
                    .iter()
                    .map(|w| {
                        acc += w;
                        acc
                    })
                    .collect();
                Sampler::Finite {
                    values: s.values().to_vec(),
                    cdf,
                    count,
                }
            }
        })
    }

    fn draw<R: Rng>(&self, rng: &mut R) -> i64 {
        match self {
            Sampler::Fixed(v) => *v,
            Sampler::Binomial(b) => b.sample(rng) as i64,
            Sampler::Poisson(p) => p.sample(rng) as i64,
            Sampler::Geometric { ln_p, count } => (0..*count)
                .map(|_| {
                    let u = 1.0 - rng.random::<f64>();
                    (u.ln() / ln_p).floor() as i64
                })
                .sum(),
            Sampler::Finite { values, cdf, count } => (0..*count)
                .map(|_| {
                    let u = rng.random::<f64>() * cdf[cdf.len() - 1];
                    let i = cdf.partition_point(|&c| c <= u).min(values.len() - 1);
                    values[i]
                })
                .sum(),
        }
    }
}

/// Monte Carlo estimate of `Pr[X = n]`, reproducible for a given seed.
pub fn mc_estimate(model: &SumModel, n: i64, samples: u64, seed: u64) -> Result<McEstimate> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let bounds = essential_bounds(model);
    let outside = bounds.lower.is_some_and(|a| n < a) || bounds.upper.is_some_and(|b| n > b);
    if outside {
        return Ok(McEstimate {
            probability: 0.0,
            stderr: 0.0,
            samples,
        });
    }
    let samplers: Vec<Sampler> = model
        .components()
        .iter()
        .map(|c| Sampler::new(&c.dist, c.count))
        .collect::<Result<_>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hits = (0..samples)
        .filter(|_| samplers.iter().map(|s| s.draw(&mut rng)).sum::<i64>() == n)
        .count() as u64;
    let probability = hits as f64 / samples as f64;
    Ok(McEstimate {
        probability,
        stderr: (probability * (1.0 - probability) / samples as f64).sqrt(),
        samples,
    })
}
