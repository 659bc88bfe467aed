//! Control parameters of the nondegenerate OPO, dimensionless rescaling,
//! regime classification and the classical (deterministic) fixed points.
//!
//! The model assumes equal signal/idler damping `γ₁ = γ₂ = γ`. All
//! dimensionless quantities derive from the physical rates through
//! `g = χ/√(2γγ₀)` and `μ = χE/(γγ₀)`; the threshold pump amplitude is
//! `E_c = γγ₀/χ` so that `μ = E/E_c`.

use thiserror::Error;

use crate::phase::PhasePoint;
use crate::real::Real;

/// Equality tolerance on `μ` when deciding whether the pump sits exactly at
/// threshold. Sweeps land on `μ = 1` up to float parsing noise; without a
/// tolerance the regime label would flap.
pub const THRESHOLD_TOL: f64 = 1e-12;

/// Minimum `γ₀/γ` for which the adiabatic elimination of the pump is
/// considered trustworthy by default.
pub const DEFAULT_ADIABATIC_MIN_RATIO: f64 = 10.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParamsError {
    #[error("pump parameter mu must be nonnegative, got {0}")]
    NegativePump(f64),
    #[error("nonlinear coupling g^2 must be nonnegative, got {0}")]
    NegativeCoupling(f64),
    #[error("damping rate {name} must be positive, got {value}")]
    NonPositiveDamping { name: &'static str, value: f64 },
    #[error("coupling chi must be nonnegative, got {0}")]
    NegativeChi(f64),
    #[error("pump amplitude E must be nonnegative, got {0}")]
    NegativePumpAmplitude(f64),
}

/// Dimensionless control parameters plus the physical damping rates they
/// were derived from.
///
/// `g2 = 0` is admitted as the decoupled/linear limit; it is rejected where
/// it makes a quantity ill-defined (normalizing the distribution at or
/// above threshold).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpoParams<R: Real = f64> {
    /// Normalized pump `μ = χE/(γγ₀)`; `μ = 1` is the oscillation threshold.
    pub mu: R,
    /// Squared dimensionless coupling `g² = χ²/(2γγ₀)`.
    pub g2: R,
    /// Signal/idler damping rate (1/time).
    pub gamma: R,
    /// Pump damping rate (1/time).
    pub gamma0: R,
}

impl<R: Real> OpoParams<R> {
    pub fn new(mu: R, g2: R, gamma: R, gamma0: R) -> Result<Self, ParamsError> {
        if mu < R::zero() || !mu.is_finite() {
            return Err(ParamsError::NegativePump(mu.to_f64().unwrap_or(f64::NAN)));
        }
        if g2 < R::zero() || !g2.is_finite() {
            return Err(ParamsError::NegativeCoupling(g2.to_f64().unwrap_or(f64::NAN)));
        }
        if gamma <= R::zero() {
            return Err(ParamsError::NonPositiveDamping {
                name: "gamma",
                value: gamma.to_f64().unwrap_or(f64::NAN),
            });
        }
        if gamma0 <= R::zero() {
            return Err(ParamsError::NonPositiveDamping {
                name: "gamma0",
                value: gamma0.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self { mu, g2, gamma, gamma0 })
    }

    /// Dimensionless controls with unit damping rates, the common case for
    /// everything expressed in units of `1/γ`.
    pub fn dimensionless(mu: R, g2: R) -> Result<Self, ParamsError> {
        Self::new(mu, g2, R::one(), R::of(DEFAULT_ADIABATIC_MIN_RATIO))
    }

    /// Damping ratio `γ_r = γ₀/γ`.
    pub fn gamma_r(&self) -> R {
        self.gamma0 / self.gamma
    }

    /// Whether the adiabatic elimination of the pump is valid for the given
    /// minimum damping ratio.
    pub fn adiabatic_valid(&self, min_ratio: R) -> bool {
        self.gamma_r() >= min_ratio
    }

    pub fn regime(&self) -> Regime<R> {
        Regime::classify(self.mu)
    }

    /// Effective diffusion scale `s(μ)` of this parameter set.
    pub fn s(&self) -> R {
        s_factor(self.mu).expect("params hold mu >= 0")
    }
}

/// `s(μ)`: 1 below threshold, `μ` above; continuous at `μ = 1`.
///
/// This is the mean diffusion scale obtained by averaging the diagonal of
/// the diffusion matrix over the classical steady-state intensities.
pub fn s_factor<R: Real>(mu: R) -> Result<R, ParamsError> {
    if mu < R::zero() || !mu.is_finite() {
        return Err(ParamsError::NegativePump(mu.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(if mu <= R::one() { R::one() } else { mu })
}

/// Map physical rates to the dimensionless controls.
///
/// `g = χ/√(2γγ₀)`, `μ = χE/(γγ₀)`. Round-trips with [`OpoParams::pump_amplitude`]
/// for fixed `(γ, γ₀)`.
pub fn rescale_params<R: Real>(chi: R, gamma: R, gamma0: R, e_pump: R) -> Result<OpoParams<R>, ParamsError> {
    if chi < R::zero() || !chi.is_finite() {
        return Err(ParamsError::NegativeChi(chi.to_f64().unwrap_or(f64::NAN)));
    }
    if e_pump < R::zero() || !e_pump.is_finite() {
        return Err(ParamsError::NegativePumpAmplitude(e_pump.to_f64().unwrap_or(f64::NAN)));
    }
    if gamma <= R::zero() {
        return Err(ParamsError::NonPositiveDamping {
            name: "gamma",
            value: gamma.to_f64().unwrap_or(f64::NAN),
        });
    }
    if gamma0 <= R::zero() {
        return Err(ParamsError::NonPositiveDamping {
            name: "gamma0",
            value: gamma0.to_f64().unwrap_or(f64::NAN),
        });
    }
    let gg0 = gamma * gamma0;
    let g2 = chi * chi / (R::two() * gg0);
    let mu = chi * e_pump / gg0;
    OpoParams::new(mu, g2, gamma, gamma0)
}

impl<R: Real> OpoParams<R> {
    /// Physical coupling `χ = g·√(2γγ₀)`, the inverse of the rescaling map.
    pub fn chi(&self) -> R {
        (self.g2 * R::two() * self.gamma * self.gamma0).sqrt()
    }

    /// Physical pump amplitude `E = μγγ₀/χ` (undefined for `g2 = 0`).
    pub fn pump_amplitude(&self) -> R {
        self.mu * self.gamma * self.gamma0 / self.chi()
    }
}

/// Operating regime with the distance from threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime<R: Real = f64> {
    Below { distance: R },
    Threshold,
    Above { distance: R },
}

impl<R: Real> Regime<R> {
    pub fn classify(mu: R) -> Self {
        let d = mu - R::one();
        if d.abs() <= R::of(THRESHOLD_TOL) {
            Regime::Threshold
        } else if d < R::zero() {
            Regime::Below { distance: -d }
        } else {
            Regime::Above { distance: d }
        }
    }

    pub fn distance(&self) -> R {
        match *self {
            Regime::Below { distance } | Regime::Above { distance } => distance,
            Regime::Threshold => R::zero(),
        }
    }
}

/// Zeros of the two-mode drift.
///
/// Above threshold the nonzero solutions form a continuous ring per mode:
/// the drift vanishes on `x_i² + y_i² = 2(μ-1)/g²` with the phase sum
/// locked so that `x₁x₂ - y₁y₂ > 0`. Only the per-mode intensity enters the
/// statistics, so the set is reported through its radius and one
/// representative symmetric point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointSet<R: Real = f64> {
    /// Linear stability of the origin against the drift.
    pub origin_stable: bool,
    /// `μ = 1`: the origin is marginal (zero eigenvalue in the + sector).
    pub origin_marginal: bool,
    /// Ring of nonzero fixed points, present only above threshold.
    pub ring: Option<RingFamily<R>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingFamily<R: Real = f64> {
    /// Per-mode intensity `x² + y² = 2(μ-1)/g²` on the ring.
    pub intensity: R,
    /// The symmetric representative `(x*, 0, x*, 0)` with `x* = √intensity`.
    pub representative: PhasePoint<R>,
}

/// Classical fixed points of the drift vector.
///
/// The origin is labelled unstable above threshold from the linear part of
/// the drift (eigenvalues `γ(±μ - 1)`).
pub fn classical_fixed_points<R: Real>(params: &OpoParams<R>) -> FixedPointSet<R> {
    match Regime::classify(params.mu) {
        Regime::Below { .. } => FixedPointSet {
            origin_stable: true,
            origin_marginal: false,
            ring: None,
        },
        Regime::Threshold => FixedPointSet {
            origin_stable: true,
            origin_marginal: true,
            ring: None,
        },
        Regime::Above { .. } => {
            // g2 = 0 above threshold has no finite ring; drift is unbounded.
            let ring = if params.g2 > R::zero() {
                let intensity = R::two() * (params.mu - R::one()) / params.g2;
                let x = intensity.sqrt();
                Some(RingFamily {
                    intensity,
                    representative: PhasePoint::new(x, R::zero(), x, R::zero()),
                })
            } else {
                None
            };
            FixedPointSet {
                origin_stable: false,
                origin_marginal: false,
                ring,
            }
        }
    }
}
