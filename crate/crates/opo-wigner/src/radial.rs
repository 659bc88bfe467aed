//! Reduced radial form of the quasi-potential integrals.
//!
//! The distribution depends on the angles only through θ₁+θ₂, so every
//! moment collapses to a 2D integral over the mode radii:
//!
//! ```text
//! ∫ x₁^a y₁^b x₂^c y₂^d W d⁴X
//!   = 4π²𝒩 ∫∫ r₁^{a+b+1} r₂^{c+d+1} e^{E(r₁,r₂)} Σ_k w_k Î_k(μr₁r₂/s) dr₁ dr₂
//! E = -(r₁² + r₂² - 2μr₁r₂ + κ r₁²r₂²)/(2s)
//! ```
//!
//! where `Î_k` is the scaled Bessel function (the growing `e^{+z}` of the
//! angular integral is folded into `E`) and the `w_k` are exact Fourier
//! weights of the monomial's angular factor. The whole integrand is bounded
//! and Gaussian-or-faster decaying, so adaptive Gauss-Kronrod on `[0, R]²`
//! converges quickly.

use crate::bessel::bessel_i_scaled;
use crate::quad::{adaptive_gk, QuadratureError};

/// Exponent drop below the peak at which the tail is negligible even after
/// multiplication by the largest admissible monomial.
const TAIL_DROP: f64 = 60.0;

/// Scaled radial configuration of one parameter set / quartic convention.
#[derive(Debug, Clone, Copy)]
pub(crate) struct RadialCfg {
    pub mu: f64,
    pub s: f64,
    pub kappa: f64,
    /// Exponent value at the density peak, subtracted from `E` inside the
    /// integrand so that above-threshold integrals cannot overflow. The
    /// shift cancels in every moment ratio.
    pub shift: f64,
    /// Radial cutoff: integrand is below `e^-TAIL_DROP` of its peak outside
    /// `[0, R]²` for any monomial up to the supported degree.
    pub cutoff: f64,
}

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum RadialError {
    #[error("distribution is non-normalizable for mu >= 1 with g^2 = 0")]
    NonNormalizable,
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

impl RadialCfg {
    pub fn new(mu: f64, s: f64, kappa: f64) -> Result<Self, RadialError> {
        if mu >= 1.0 && kappa <= 0.0 {
            return Err(RadialError::NonNormalizable);
        }
        // peak of E along the symmetric diagonal r1 = r2 = r:
        // E(r, r) = (2(mu-1) r^2 - kappa r^4) / (2s)
        let (r_peak, shift) = if mu > 1.0 {
            let r2 = (mu - 1.0) / kappa;
            (r2.sqrt(), (mu - 1.0) * (mu - 1.0) / (2.0 * s * kappa))
        } else {
            (0.0, 0.0)
        };

        let diag = |r: f64| (2.0 * (mu - 1.0) * r * r - kappa * r.powi(4)) / (2.0 * s);
        let axis = |r: f64| -r * r / (2.0 * s);
        let margin = |r: f64| TAIL_DROP + 10.0 * r.max(1.0).ln();
        let mut r = r_peak.max(1.0);
        while diag(r) - shift > -margin(r) || axis(r) > -margin(r) {
            r += 0.25;
            if r > 1e4 {
                return Err(RadialError::NonNormalizable);
            }
        }
        Ok(Self { mu, s, kappa, shift, cutoff: r + 1.0 })
    }

    /// Integrand value at `(r1, r2)` for radial powers (`Jacobian included
    /// by the caller`) and Bessel weight list.
    fn eval(&self, r1: f64, r2: f64, pow1: i32, pow2: i32, weights: &[(u32, f64)]) -> f64 {
        let rr = r1 * r2;
        let e = -(r1 * r1 + r2 * r2 - 2.0 * self.mu * rr + self.kappa * rr * rr) / (2.0 * self.s)
            - self.shift;
        let z = self.mu * rr / self.s;
        let mut bess = 0.0;
        for &(k, w) in weights {
            bess += w * bessel_i_scaled(k, z);
        }
        r1.powi(pow1) * r2.powi(pow2) * e.exp() * bess
    }

    /// Iterated adaptive Gauss-Kronrod over `[0, R]²`.
    ///
    /// Returns the raw reduced integral (shift still applied) and an error
    /// estimate. `pow1`/`pow2` include the polar Jacobian, i.e. the plain
    /// normalization integral uses `(1, 1)`.
    pub fn integrate(
        &self,
        pow1: u32,
        pow2: u32,
        weights: &[(u32, f64)],
        rel_tol: f64,
    ) -> Result<(f64, f64), RadialError> {
        if weights.is_empty() {
            return Ok((0.0, 0.0));
        }
        let r = self.cutoff;
        let (p1, p2) = (pow1 as i32, pow2 as i32);

        // magnitude scan sets the absolute floor for the inner integrals so
        // that negligible outer slices exit immediately
        let mut scale = 0.0f64;
        let n_scan = 32;
        for i in 0..=n_scan {
            for j in 0..=n_scan {
                let v = self
                    .eval(r * i as f64 / n_scan as f64, r * j as f64 / n_scan as f64, p1, p2, weights)
                    .abs();
                if v > scale {
                    scale = v;
                }
            }
        }
        if scale == 0.0 {
            return Ok((0.0, 0.0));
        }
        let inner_abs_tol = scale * r * rel_tol * 1e-2;

        let inner_err_bound = std::cell::Cell::new(0.0f64);
        let outer = |r1: f64| -> f64 {
            match adaptive_gk(
                &|r2: f64| self.eval(r1, r2, p1, p2, weights),
                0.0,
                r,
                rel_tol * 0.1,
                inner_abs_tol,
                200,
            ) {
                Ok((v, e)) => {
                    if e > inner_err_bound.get() {
                        inner_err_bound.set(e);
                    }
                    v
                }
                Err(_) => f64::NAN, // surfaces as NonFinite in the outer pass
            }
        };
        let (value, outer_err) = adaptive_gk(&outer, 0.0, r, rel_tol, scale * r * r * rel_tol * 1e-2, 200)?;
        Ok((value, outer_err + inner_err_bound.get() * r))
    }
}
