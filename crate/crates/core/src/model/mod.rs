//! Component distributions, sums of independent components and their moments.

mod series;
mod spec;
mod sum;

use std::fmt;

pub use series::{abs_central_moment, SeriesValue};
pub use spec::{Cumulants, DistributionSpec, FiniteSupport, FINITE_WEIGHT_TOLERANCE};
pub use sum::{summarize, Component, MomentSummary, SumModel};

/// An interval of `θ` values, possibly unbounded, on which the MGF is finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MgfInterval {
    pub lo: f64,
    pub hi: f64,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl MgfInterval {
    pub fn new(lo: f64, hi: f64, lo_open: bool, hi_open: bool) -> Self {
        debug_assert!(lo <= 0.0 && 0.0 <= hi);
        Self {
            lo,
            hi,
            lo_open: lo_open || lo.is_infinite(),
            hi_open: hi_open || hi.is_infinite(),
        }
    }

    pub fn real_line() -> Self {
        Self::new(f64::NEG_INFINITY, f64::INFINITY, true, true)
    }

    /// Strict interior membership, `lo < θ < hi`.
    pub fn contains_interior(&self, theta: f64) -> bool {
        self.lo < theta && theta < self.hi
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let (lo, lo_open) = match self.lo.partial_cmp(&other.lo) {
            Some(std::cmp::Ordering::Greater) => (self.lo, self.lo_open),
            Some(std::cmp::Ordering::Less) => (other.lo, other.lo_open),
            _ => (self.lo, self.lo_open || other.lo_open),
        };
        let (hi, hi_open) = match self.hi.partial_cmp(&other.hi) {
            Some(std::cmp::Ordering::Less) => (self.hi, self.hi_open),
            Some(std::cmp::Ordering::Greater) => (other.hi, other.hi_open),
            _ => (self.hi, self.hi_open || other.hi_open),
        };
        Self { lo, hi, lo_open, hi_open }
    }

    /// True when the interval is the single point `{0}`.
    pub fn is_trivial(&self) -> bool {
        self.lo == 0.0 && self.hi == 0.0
    }
}

impl fmt::Display for MgfInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = if self.lo_open { '(' } else { '[' };
        let close = if self.hi_open { ')' } else { ']' };
        write!(f, "{open}{}, {}{close}", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intersection_takes_tighter_ends() {
        let a = MgfInterval::new(f64::NEG_INFINITY, 2f64.ln(), true, true);
        let b = MgfInterval::new(f64::NEG_INFINITY, 4f64.ln(), true, true);
        let c = a.intersect(&b);
        assert_eq!(c.hi, 2f64.ln());
        assert!(c.hi_open);
        assert_eq!(MgfInterval::real_line().intersect(&a), a);
        assert!(!c.is_trivial());
        assert!(c.contains_interior(0.0));
        assert!(!c.contains_interior(2f64.ln()));
    }

    #[test]
    fn display() {
        assert_eq!(MgfInterval::real_line().to_string(), "(-inf, inf)");
    }
}
