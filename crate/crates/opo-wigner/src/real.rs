//! Scalar abstraction for the analytic kernels.
//!
//! Everything that is plain arithmetic on quadratures (drift, diffusion,
//! potential fields, log-densities, EPR algebra) is generic over [`Real`],
//! so the same formulas run in `f32` or `f64`. The quadrature engine and
//! the stochastic integrators are `f64` only.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, NumAssign};

pub trait Real: Float + FloatConst + NumAssign + Debug + Display + Copy + Send + Sync {
    /// Lossy conversion from `f64`, for constants.
    fn of(x: f64) -> Self {
        Self::from(x).expect("finite f64 constant converts to any Real")
    }

    fn two() -> Self {
        Self::one() + Self::one()
    }

    fn half() -> Self {
        Self::one() / Self::two()
    }
}

impl<T> Real for T where T: Float + FloatConst + NumAssign + Debug + Display + Copy + Send + Sync {}
