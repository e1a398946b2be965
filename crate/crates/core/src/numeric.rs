//! Small numeric helpers shared by the other modules.

/// Pairwise (tree) summation with a fixed left-to-right split.
///
/// The split point depends only on the slice length, so the result is the
/// same on every platform for the same input order.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        2 => values[0] + values[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
        }
    }
}

/// `ln(Σ exp(x_i))` without overflow. Returns `-inf` for an empty slice.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if max == f64::INFINITY {
        return f64::INFINITY;
    }
    let shifted: Vec<f64> = values.iter().map(|v| (v - max).exp()).collect();
    max + pairwise_sum(&shifted).ln()
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `ln Pr[W = k]` for `W ~ Poisson(rate)`.
///
/// For large `k` the leading terms of `k ln(rate) - ln k!` cancel; this uses
/// the saddle-point split `-½ln(2πk) - stirlerr(k) - k·(d - ln(1+d))` with
/// `d = (rate - k)/k`, which keeps the absolute error near `ε·|rate - k|`.
pub fn ln_poisson_pmf(k: u64, rate: f64) -> f64 {
    if k == 0 {
        return -rate;
    }
    if k < 16 {
        let ln_fact: f64 = (2..=k).map(|j| (j as f64).ln()).sum();
        return k as f64 * rate.ln() - rate - ln_fact;
    }
    let kf = k as f64;
    let d = (rate - kf) / kf;
    let bd0 = kf * (d - d.ln_1p());
    -0.5 * (2.0 * std::f64::consts::PI * kf).ln() - stirling_error(kf) - bd0
}

/// `ln k! - (k + ½) ln k + k - ½ ln 2π` for `k ≥ 16`, by its asymptotic series.
fn stirling_error(k: f64) -> f64 {
    let inv = 1.0 / k;
    let inv2 = inv * inv;
    inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)))
}

/// Natural log of the standard normal density normalizer, `ln √(2π)`.
pub const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_7;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_naive_on_small_input() {
        let v = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(pairwise_sum(&v), 15.0);
        assert_eq!(pairwise_sum(&[]), 0.0);
    }

    #[test]
    fn pairwise_is_more_accurate_than_naive() {
        let v = vec![0.1; 1 << 20];
        let exact = 0.1 * (1u64 << 20) as f64;
        let naive: f64 = v.iter().sum();
        assert!((pairwise_sum(&v) - exact).abs() <= (naive - exact).abs());
    }

    #[test]
    fn log_sum_exp_handles_large_arguments() {
        let v = [1000.0, 1000.0];
        assert!((log_sum_exp(&v) - (1000.0 + 2f64.ln())).abs() < 1e-12);
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
        assert_eq!(log_sum_exp(&[f64::NEG_INFINITY, 0.0]), 0.0);
    }

    #[test]
    fn poisson_log_pmf_matches_recurrence() {
        // pmf(k) = pmf(k-1)·rate/k starting from e^{-rate}, in log space
        for rate in [0.5f64, 17.0, 60.0] {
            let mut log_p = -rate;
            for k in 1..200u64 {
                log_p += rate.ln() - (k as f64).ln();
                let got = ln_poisson_pmf(k, rate);
                assert!((got - log_p).abs() < 1e-12 * (1.0 + log_p.abs()), "rate {rate}, k {k}");
            }
        }
    }

    #[test]
    fn ln_sqrt_2pi_constant() {
        assert!((LN_SQRT_2PI - (2.0 * std::f64::consts::PI).sqrt().ln()).abs() < 1e-16);
    }
}
