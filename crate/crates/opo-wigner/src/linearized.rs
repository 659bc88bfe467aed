//! Linearized fluctuation theory: closed-form EPR variances below and above
//! threshold, the Gaussian approximation of the Wigner distribution, and the
//! Duan-Simon separability check.

use serde::Serialize;
use thiserror::Error;

use crate::phase::{epr_transform, PhasePoint};
use crate::real::Real;

/// Which route produced a set of EPR variances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VarianceSource {
    Linearized,
    Quadrature,
    Sde,
}

impl VarianceSource {
    pub fn label(&self) -> &'static str {
        match self {
            VarianceSource::Linearized => "linearized",
            VarianceSource::Quadrature => "quadrature",
            VarianceSource::Sde => "sde",
        }
    }
}

/// Steady-state variances of the four EPR quadratures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EprVariances<R: Real = f64> {
    pub v_x_plus: R,
    pub v_x_minus: R,
    pub v_y_plus: R,
    pub v_y_minus: R,
    pub source: VarianceSource,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinearizedError {
    /// The antisqueezed variances `1/(1-μ)` blow up at threshold. Returned
    /// as a tagged condition so sweeps can emit a marker instead of an inf.
    #[error("linearized variances diverge at threshold (mu = 1)")]
    ThresholdDivergence,
    #[error("pump parameter mu must be nonnegative, got {0}")]
    NegativePump(f64),
    #[error("linearized Wigner distribution requires mu < 1, got {0} (non-normalizable)")]
    AboveThreshold(f64),
}

/// Closed-form linearized EPR variances.
///
/// Below threshold `⟨x₊²⟩ = ⟨y₋²⟩ = 1/(1-μ)` and `⟨x₋²⟩ = ⟨y₊²⟩ = 1/(1+μ)`;
/// above threshold `⟨x₊²⟩ = ⟨y₋²⟩ = 1/(μ-1) + (μ-1)/g²` and
/// `⟨x₋²⟩ = ⟨y₊²⟩ = 1/2`. At `μ = 1` (within [`crate::params::THRESHOLD_TOL`])
/// the divergence is reported as an error rather than an infinity.
pub fn linearized_variances<R: Real>(mu: R, g2: R) -> Result<EprVariances<R>, LinearizedError> {
    if mu < R::zero() || !mu.is_finite() {
        return Err(LinearizedError::NegativePump(mu.to_f64().unwrap_or(f64::NAN)));
    }
    let one = R::one();
    let d = mu - one;
    if d.abs() <= R::of(crate::params::THRESHOLD_TOL) {
        return Err(LinearizedError::ThresholdDivergence);
    }
    let (anti, sq) = if mu < one {
        (one / (one - mu), one / (one + mu))
    } else {
        (one / (mu - one) + (mu - one) / g2, R::half())
    };
    Ok(EprVariances {
        v_x_plus: anti,
        v_x_minus: sq,
        v_y_plus: sq,
        v_y_minus: anti,
        source: VarianceSource::Linearized,
    })
}

/// Unnormalized linearized Wigner distribution in EPR variables,
/// evaluated at a phase point.
///
/// `exp{-½[(1+μ)x₋² + (1+μ)y₊² + (1-μ)x₊² + (1-μ)y₋²]}`; only defined
/// below threshold where the Gaussian is normalizable.
pub fn w_linear<R: Real>(p: &PhasePoint<R>, mu: R) -> Result<R, LinearizedError> {
    if mu < R::zero() || !mu.is_finite() {
        return Err(LinearizedError::NegativePump(mu.to_f64().unwrap_or(f64::NAN)));
    }
    if mu >= R::one() {
        return Err(LinearizedError::AboveThreshold(mu.to_f64().unwrap_or(f64::NAN)));
    }
    let e = epr_transform(p);
    let one = R::one();
    let q = (one + mu) * (e.x_minus * e.x_minus + e.y_plus * e.y_plus)
        + (one - mu) * (e.x_plus * e.x_plus + e.y_minus * e.y_minus);
    Ok((-q * R::half()).exp())
}

/// Result of the Duan-Simon separability test on the squeezed pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DuanSimon<R: Real = f64> {
    /// `⟨x₋²⟩ + ⟨y₊²⟩`.
    pub sum: R,
    /// Violation of the separable bound 2 (vacuum variance 1 per quadrature).
    pub entangled: bool,
}

/// Duan-Simon criterion on the squeezed EPR pair: the state is entangled
/// when `⟨x₋²⟩ + ⟨y₊²⟩ < 2` in this normalization.
pub fn duan_simon_check<R: Real>(v: &EprVariances<R>) -> DuanSimon<R> {
    let sum = v.v_x_minus + v.v_y_plus;
    DuanSimon {
        sum,
        entangled: sum < R::two(),
    }
}
