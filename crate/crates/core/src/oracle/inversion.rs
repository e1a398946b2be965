use std::f64::consts::PI;

use num_complex::Complex64;

use super::truncation_window;
use crate::error::{Error, Result};
use crate::model::SumModel;
use crate::numeric::pairwise_sum;

/// Largest imaginary part tolerated in an inverted probability.
pub const MAX_IMAG_RESIDUAL: f64 = 1e-10;

/// Probability recovered from the characteristic function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Inversion {
    pub probability: f64,
    /// `|Im|` of the quadrature sum; zero for exact arithmetic.
    pub imag_residual: f64,
    pub quad_points: usize,
}

/// Characteristic function of a model sampled on the periodic trapezoid grid
/// `λ_j = -π + 2πj/N`, reusable for many target points.
///
/// For an integer variable the trapezoid rule on the full period returns
/// `Σ_m Pr[X = n + mN]`, so it is exact once `N` exceeds the support width
/// and aliasing is the only error otherwise.
#[derive(Debug, Clone)]
pub struct InversionGrid {
    values: Vec<Complex64>,
    twiddles: Vec<Complex64>,
}

impl InversionGrid {
    pub fn new(model: &SumModel, quad_points: usize) -> Result<Self> {
        if quad_points < 64 {
            return Err(Error::InvalidArgument(format!(
                "quad_points = {quad_points} is below the minimum of 64"
            )));
        }
        let n = quad_points;
        let values = (0..n)
            .map(|j| {
                let lam = -PI + 2.0 * PI * j as f64 / n as f64;
                model.components().iter().fold(Complex64::new(1.0, 0.0), |acc, c| {
                    let f = c.dist.char_fn(lam);
                    acc * match u32::try_from(c.count) {
                        Ok(k) => f.powu(k),
                        Err(_) => (f.ln() * c.count as f64).exp(),
                    }
                })
            })
            .collect();
        let twiddles = (0..n)
            .map(|m| Complex64::cis(-2.0 * PI * m as f64 / n as f64))
            .collect();
        Ok(Self { values, twiddles })
    }

    pub fn quad_points(&self) -> usize {
        self.values.len()
    }

    /// `(1/N) Σ_j F(λ_j) e^{-i n λ_j}`.
    pub fn evaluate(&self, n: i64) -> Inversion {
        let len = self.values.len() as i128;
        // e^{-i n λ_j} = (-1)^n e^{-2πi nj/N}; the index is reduced exactly
        let sign = if n.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let step = (n as i128).rem_euclid(len);
        let mut re = Vec::with_capacity(self.values.len());
        let mut im = Vec::with_capacity(self.values.len());
        for (j, f) in self.values.iter().enumerate() {
            let idx = (step * j as i128).rem_euclid(len) as usize;
            let z = f * self.twiddles[idx];
            re.push(z.re);
            im.push(z.im);
        }
        let scale = sign / self.values.len() as f64;
        Inversion {
            probability: pairwise_sum(&re) * scale,
            imag_residual: (pairwise_sum(&im) * scale).abs(),
            quad_points: self.values.len(),
        }
    }
}

/// Node count of four times the estimated support width, as a power of two,
/// and at least 256.
pub fn default_quad_points(model: &SumModel) -> usize {
    let eps = 1e-18 / model.expanded_len() as f64;
    let width: u64 = model
        .components()
        .iter()
        .map(|c| {
            let (lo, hi, _) = truncation_window(&c.dist, eps);
            (hi - lo) as u64 * c.count
        })
        .sum::<u64>()
        + 1;
    (4 * width).next_power_of_two().max(256) as usize
}

/// `Pr[X = n]` by trapezoidal inversion of the characteristic function.
pub fn inversion_prob(model: &SumModel, n: i64, quad_points: usize) -> Result<Inversion> {
    let inv = InversionGrid::new(model, quad_points)?.evaluate(n);
    if inv.imag_residual >= MAX_IMAG_RESIDUAL {
        return Err(Error::Numerical(format!(
            "imaginary residual {:e} in inversion at n = {n}",
            inv.imag_residual
        )));
    }
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::DistributionSpec;

    #[test]
    fn constant_variable() {
        let m = SumModel::single(DistributionSpec::bernoulli(0.0).unwrap()).unwrap();
        let inv = inversion_prob(&m, 0, 64).unwrap();
        assert!((inv.probability - 1.0).abs() < 1e-15);
        assert!(inversion_prob(&m, 1, 64).unwrap().probability.abs() < 1e-15);
    }

    #[test]
    fn binomial_peak() {
        let m = SumModel::iid(DistributionSpec::bernoulli(0.5).unwrap(), 100).unwrap();
        let inv = inversion_prob(&m, 50, default_quad_points(&m)).unwrap();
        assert!((inv.probability - 0.079_589_237_387_178_77).abs() < 1e-10);
        assert!(inv.imag_residual < 1e-14);
    }

    #[test]
    fn below_support_is_zero() {
        let m = SumModel::new([
            (DistributionSpec::finite([(3, 0.5), (5, 0.5)]).unwrap(), 2),
            (DistributionSpec::poisson(2.0).unwrap(), 1),
        ])
        .unwrap();
        let grid = InversionGrid::new(&m, default_quad_points(&m)).unwrap();
        for n in [-10, 0, 5] {
            assert!(grid.evaluate(n).probability.abs() < 1e-10, "n = {n}");
        }
        assert!(grid.evaluate(6).probability > 0.0);
    }

    #[test]
    fn rejects_small_grid() {
        let m = SumModel::single(DistributionSpec::poisson(1.0).unwrap()).unwrap();
        assert!(inversion_prob(&m, 0, 32).is_err());
    }

    #[test]
    fn default_nodes() {
        let m = SumModel::iid(DistributionSpec::bernoulli(0.5).unwrap(), 100).unwrap();
        assert_eq!(default_quad_points(&m), 512);
        let small = SumModel::single(DistributionSpec::bernoulli(0.5).unwrap()).unwrap();
        assert_eq!(default_quad_points(&small), 256);
    }
}
