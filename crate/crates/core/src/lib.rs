//! Point probabilities `Pr[X = n]` for sums of independent integer random
//! variables.
//!
//! The crate provides a Gaussian local-limit estimate with an explicit
//! third-moment error functional, an exponentially tilted variant that stays
//! sharp in the tails, exact oracles (convolution, characteristic-function
//! inversion, Monte Carlo) to check both against, and a grid test for the
//! monotone-modulus hypothesis the estimates rely on.

pub mod calibrate;
pub mod error;
pub mod estimator;
pub mod model;
pub mod monotone;
pub mod numeric;
pub mod oracle;
pub mod tilting;

pub use error::{Error, Result};
pub use estimator::{gaussian_point_estimate, EstimateFlags, EstimateOptions, EstimateResult};
pub use model::{DistributionSpec, MgfInterval, MomentSummary, SumModel};
pub use tilting::{EssentialBounds, TailEstimate, TiltSolution};
