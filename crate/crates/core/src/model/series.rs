//! Certified summation over the unbounded supports (geometric, Poisson).

use super::DistributionSpec;
use crate::numeric::{ln_poisson_pmf, pairwise_sum};

/// Stop once the bound on the neglected upper tail drops below this
/// fraction of the accumulated sum.
const RELATIVE_TAIL: f64 = 1e-17;

/// Result of a truncated series along with the last index included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    pub truncation_point: i64,
}

/// `E|X - E X|^order` for a geometric or Poisson component.
///
/// Terms are accumulated outward from the mode. Past the mean the ratio of
/// consecutive terms is nonincreasing, so once it drops below one the
/// remaining tail is bounded by a geometric series in that ratio.
pub fn abs_central_moment(d: &DistributionSpec, order: i32) -> SeriesValue {
    let mu = d.mean();
    let (mode, pmf_at_mode): (i64, f64) = match *d {
        DistributionSpec::Geometric { p } => (0, 1.0 - p),
        DistributionSpec::Poisson { rate } => {
            let m = rate.floor() as u64;
            (m as i64, ln_poisson_pmf(m, rate).exp())
        }
        _ => panic!("series summation only applies to geometric and Poisson components"),
    };
    // ratio pmf(k+1)/pmf(k)
    let step = |k: i64| -> f64 {
        match *d {
            DistributionSpec::Geometric { p } => p,
            DistributionSpec::Poisson { rate } => rate / (k + 1) as f64,
            _ => unreachable!(),
        }
    };
    let weight = |k: i64| (k as f64 - mu).abs().powi(order);

    let mut below = Vec::new();
    let mut pmf = pmf_at_mode;
    let mut k = mode;
    while k > 0 {
        pmf /= step(k - 1);
        k -= 1;
        if pmf == 0.0 {
            break;
        }
        below.push(pmf * weight(k));
    }

    let mut terms: Vec<f64> = below.into_iter().rev().collect();
    let mut acc: f64 = terms.iter().sum();
    let mut pmf = pmf_at_mode;
    let mut k = mode;
    loop {
        let term = pmf * weight(k);
        terms.push(term);
        acc += term;
        if k as f64 > mu + 1.0 {
            let ratio = step(k) * ((k as f64 + 1.0 - mu) / (k as f64 - mu)).powi(order);
            if ratio < 1.0 && term * ratio / (1.0 - ratio) <= RELATIVE_TAIL * acc {
                break;
            }
        }
        if pmf == 0.0 {
            break;
        }
        pmf *= step(k);
        k += 1;
    }
    SeriesValue {
        value: pairwise_sum(&terms),
        truncation_point: k,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeroth_moment_is_total_mass() {
        for d in [
            DistributionSpec::geometric(0.9).unwrap(),
            DistributionSpec::poisson(0.3).unwrap(),
            DistributionSpec::poisson(250.0).unwrap(),
        ] {
            let s = abs_central_moment(&d, 0);
            assert!((s.value - 1.0).abs() < 1e-13, "{d}: {}", s.value);
        }
    }

    #[test]
    fn second_moment_is_variance() {
        for d in [
            DistributionSpec::geometric(0.5).unwrap(),
            DistributionSpec::geometric(0.99).unwrap(),
            DistributionSpec::poisson(7.5).unwrap(),
        ] {
            let s = abs_central_moment(&d, 2);
            assert!((s.value / d.variance() - 1.0).abs() < 1e-12, "{d}");
        }
    }

    #[test]
    fn truncation_point_reported() {
        let d = DistributionSpec::geometric(0.5).unwrap();
        let s = abs_central_moment(&d, 3);
        assert!(s.truncation_point > 40 && s.truncation_point < 200);
    }
}
