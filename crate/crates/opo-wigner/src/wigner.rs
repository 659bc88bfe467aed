//! The steady-state quasi-potential Wigner distribution: log-density,
//! normalization, conditional slices, the mode-2 marginal and peak
//! structure.

use serde::Serialize;
use thiserror::Error;

use crate::params::OpoParams;
use crate::phase::PhasePoint;
use crate::radial::{RadialCfg, RadialError};
use crate::real::Real;

/// Coefficient convention for the quartic term of the exponent.
///
/// Line-integrating the mean-diffusion potential field gives `g²/2`
/// (`AppendixB`), which is also the only choice consistent with the
/// classical fixed points and with `s(μ) = μ` above threshold. The main-text
/// closed form prints a bare `g²` (`AsPrinted`); it is kept selectable for
/// literal figure comparison. The two differ in the above-threshold peak
/// radius: `√(2(μ-1))/g` versus `√(μ-1)/g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
pub enum QuarticConvention {
    #[default]
    AppendixB,
    AsPrinted,
}

impl QuarticConvention {
    /// Quartic coefficient κ for a given `g²`.
    pub fn kappa<R: Real>(&self, g2: R) -> R {
        match self {
            QuarticConvention::AppendixB => g2 * R::half(),
            QuarticConvention::AsPrinted => g2,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            QuarticConvention::AppendixB => "appendixB",
            QuarticConvention::AsPrinted => "asPrinted",
        }
    }
}

/// Logarithm of the unnormalized steady-state Wigner distribution,
///
/// ```text
/// -(1/2s(μ)) [ x₁²+y₁²+x₂²+y₂² + 2μ(y₁y₂-x₁x₂) + κ (x₁²+y₁²)(x₂²+y₂²) ]
/// ```
pub fn log_w_unnorm<R: Real>(p: &PhasePoint<R>, params: &OpoParams<R>, conv: QuarticConvention) -> R {
    let r1s = p.r1_sq();
    let r2s = p.r2_sq();
    let kappa = conv.kappa(params.g2);
    let bracket = r1s + r2s + R::two() * params.mu * (p.y1 * p.y2 - p.x1 * p.x2) + kappa * r1s * r2s;
    -bracket / (R::two() * params.s())
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WignerError {
    /// `μ >= 1` with `g² = 0`: the quartic confinement is absent and the
    /// distribution has no finite normalization.
    #[error("Wigner distribution is non-normalizable at mu = {mu} with g^2 = 0")]
    NonNormalizable { mu: f64 },
    #[error("normalization quadrature failed: {0}")]
    Quadrature(#[from] crate::quad::QuadratureError),
}

pub(crate) fn radial_err_to_wigner(e: RadialError, mu: f64) -> WignerError {
    match e {
        RadialError::NonNormalizable => WignerError::NonNormalizable { mu },
        RadialError::Quadrature(q) => WignerError::Quadrature(q),
    }
}

/// Default relative tolerance of the normalization / moment quadrature.
pub const DEFAULT_QUAD_TOL: f64 = 1e-8;

/// A normalized steady-state distribution: parameters, convention, the
/// normalization constant 𝒩 and its quadrature error estimate.
///
/// Immutable once built; every evaluation is pure.
#[derive(Debug, Clone)]
pub struct WignerField {
    params: OpoParams<f64>,
    convention: QuarticConvention,
    norm: f64,
    norm_err: f64,
    rel_tol: f64,
    pub(crate) radial: RadialCfg,
    /// Raw reduced normalization integral (with the exponent shift still
    /// applied); moments divide by this so the shift cancels exactly.
    pub(crate) raw_norm: f64,
}

impl WignerField {
    /// Normalize the distribution at the default tolerance.
    pub fn normalize(params: &OpoParams<f64>, conv: QuarticConvention) -> Result<Self, WignerError> {
        Self::normalize_with_tol(params, conv, DEFAULT_QUAD_TOL)
    }

    pub fn normalize_with_tol(
        params: &OpoParams<f64>,
        conv: QuarticConvention,
        rel_tol: f64,
    ) -> Result<Self, WignerError> {
        let kappa = conv.kappa(params.g2);
        let radial = RadialCfg::new(params.mu, params.s(), kappa)
            .map_err(|e| radial_err_to_wigner(e, params.mu))?;
        let (raw, raw_err) = radial
            .integrate(1, 1, &[(0, 1.0)], rel_tol)
            .map_err(|e| radial_err_to_wigner(e, params.mu))?;
        // integral of W = 4 pi^2 N e^{shift} raw  =>  N = e^{-shift} / (4 pi^2 raw)
        let four_pi_sq = 4.0 * std::f64::consts::PI * std::f64::consts::PI;
        let norm = (-radial.shift).exp() / (four_pi_sq * raw);
        let norm_err = norm * (raw_err / raw);
        Ok(Self {
            params: *params,
            convention: conv,
            norm,
            norm_err,
            rel_tol,
            radial,
            raw_norm: raw,
        })
    }

    pub fn params(&self) -> &OpoParams<f64> {
        &self.params
    }

    pub fn convention(&self) -> QuarticConvention {
        self.convention
    }

    /// Normalization constant 𝒩.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// Quadrature error estimate on 𝒩.
    pub fn norm_err(&self) -> f64 {
        self.norm_err
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    /// Normalized density at a phase point.
    pub fn value(&self, p: &PhasePoint<f64>) -> f64 {
        self.norm * log_w_unnorm(p, &self.params, self.convention).exp()
    }

    /// Marginal distribution of mode 2 at `(x₂, y₂)`.
    pub fn marginal(&self, x2: f64, y2: f64, method: MarginalMethod) -> f64 {
        let u = x2 * x2 + y2 * y2;
        let mu = self.params.mu;
        let s = self.params.s();
        let two_pi = 2.0 * std::f64::consts::PI;
        match method {
            // The mode-1 integral of the full W at fixed (x2, y2) is
            // Gaussian and evaluates in closed form:
            //   ∫ W d²X₁ = 2πs𝒩/(1+κu) · exp{-(u/2s)(1+κu-μ²)/(1+κu)}
            // This inherits the field's normalization, so it integrates
            // to one by construction.
            MarginalMethod::Numeric => {
                let kappa = self.convention.kappa(self.params.g2);
                let denom = 1.0 + kappa * u;
                let expo = -(u / (2.0 * s)) * (denom - mu * mu) / denom;
                two_pi * s * self.norm / denom * expo.exp()
            }
            // Printed closed form, kept verbatim: prefactor 2π𝒩μ and a bare
            // g² in both the denominator and the quartic term.
            MarginalMethod::ClosedForm => {
                let g2 = self.params.g2;
                let expo = -((1.0 - mu * mu) * u + g2 * u * u) / (2.0 * s);
                two_pi * self.norm * mu / (1.0 + g2 * u) * expo.exp()
            }
        }
    }

    /// Values of the joint density on the `y₁ = y₂ = 0` plane over a
    /// cartesian grid; relative values within the slice are meaningful,
    /// the slice itself is not a normalized 2D density.
    pub fn conditional_slice(&self, x1_grid: &[f64], x2_grid: &[f64]) -> SliceGrid {
        let mut w = Vec::with_capacity(x1_grid.len());
        for &x1 in x1_grid {
            let mut row = Vec::with_capacity(x2_grid.len());
            for &x2 in x2_grid {
                row.push(self.value(&PhasePoint::new(x1, 0.0, x2, 0.0)));
            }
            w.push(row);
        }
        SliceGrid {
            x1: x1_grid.to_vec(),
            x2: x2_grid.to_vec(),
            w,
        }
    }

    /// Maxima of the `y₁ = y₂ = 0` slice, from the analytic stationarity
    /// condition: the origin below threshold, the pair `(±x*, ±x*)` with
    /// `x* = √((μ-1)/κ)` above.
    pub fn peak_locations(&self) -> Vec<(f64, f64)> {
        let mu = self.params.mu;
        if mu - 1.0 <= crate::params::THRESHOLD_TOL {
            return vec![(0.0, 0.0)];
        }
        let kappa = self.convention.kappa(self.params.g2);
        let x = ((mu - 1.0) / kappa).sqrt();
        vec![(x, x), (-x, -x)]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MarginalMethod {
    /// Mode-1 variables integrated out of the full distribution.
    Numeric,
    /// The printed closed form evaluated verbatim.
    ClosedForm,
}

/// A slice evaluation: `w[i][j] = W(x1[i], 0, x2[j], 0)`.
#[derive(Debug, Clone)]
pub struct SliceGrid {
    pub x1: Vec<f64>,
    pub x2: Vec<f64>,
    pub w: Vec<Vec<f64>>,
}

impl SliceGrid {
    /// Grid indices of all global maxima (ties within `rel_tol`).
    pub fn argmaxima(&self, rel_tol: f64) -> Vec<(usize, usize)> {
        let mut best = f64::NEG_INFINITY;
        for row in &self.w {
            for &v in row {
                if v > best {
                    best = v;
                }
            }
        }
        let mut out = Vec::new();
        for (i, row) in self.w.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v >= best * (1.0 - rel_tol) {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

/// Uniform grid helper: `n` points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2);
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(|i| lo + step * i as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(mu: f64, g2: f64) -> OpoParams<f64> {
        OpoParams::dimensionless(mu, g2).unwrap()
    }

    #[test]
    fn log_w_at_origin_is_zero() {
        let p = params(0.7, 0.01);
        assert_eq!(log_w_unnorm(&PhasePoint::origin(), &p, QuarticConvention::AppendixB), 0.0);
    }

    #[test]
    fn log_w_vacuum_gaussian() {
        let p = params(0.0, 0.0);
        let v = log_w_unnorm(&PhasePoint::new(1.0, 0.0, 0.0, 0.0), &p, QuarticConvention::AppendixB);
        assert!((v + 0.5).abs() < 1e-15);
    }

    #[test]
    fn log_w_above_threshold_ring_value() {
        // bracket = 200 - 300 + 50 = -50, divided by 2s = 3
        let p = params(1.5, 0.01);
        let v = log_w_unnorm(&PhasePoint::new(10.0, 0.0, 10.0, 0.0), &p, QuarticConvention::AppendixB);
        assert!((v - 50.0 / 3.0).abs() < 1e-12, "got {v}");
    }

    #[test]
    fn phase_rotation_parity_exact() {
        // W(x1,y1,x2,y2) = W(y1,-x1,-y2,x2), bit-exact
        let p = params(1.3, 0.02);
        let pts = [
            PhasePoint::new(0.3, -1.2, 0.7, 2.1),
            PhasePoint::new(-5.0, 3.3, 0.1, -0.4),
        ];
        for pt in pts {
            let rotated = PhasePoint::new(pt.y1, -pt.x1, -pt.y2, pt.x2);
            for conv in [QuarticConvention::AppendixB, QuarticConvention::AsPrinted] {
                assert_eq!(
                    log_w_unnorm(&pt, &p, conv).to_bits(),
                    log_w_unnorm(&rotated, &p, conv).to_bits()
                );
            }
        }
    }

    #[test]
    fn mode_exchange_and_sign_flip_symmetry() {
        let p = params(0.9, 0.015);
        let pt = PhasePoint::new(1.1, -0.3, 0.2, 0.8);
        let sw = PhasePoint::new(pt.x2, pt.y2, pt.x1, pt.y1);
        let neg = PhasePoint::new(-pt.x1, -pt.y1, -pt.x2, -pt.y2);
        let v = log_w_unnorm(&pt, &p, QuarticConvention::AppendixB);
        assert!((v - log_w_unnorm(&sw, &p, QuarticConvention::AppendixB)).abs() < 1e-15);
        assert!((v - log_w_unnorm(&neg, &p, QuarticConvention::AppendixB)).abs() < 1e-15);
    }

    #[test]
    fn vacuum_normalization_constant() {
        let p = params(0.0, 0.0);
        let f = WignerField::normalize(&p, QuarticConvention::AppendixB).unwrap();
        let expect = 1.0 / (4.0 * std::f64::consts::PI * std::f64::consts::PI);
        assert!((f.norm() - expect).abs() < 1e-9 * expect, "got {}", f.norm());
    }

    #[test]
    fn non_normalizable_above_threshold_without_quartic() {
        let p = params(1.5, 0.0);
        match WignerField::normalize(&p, QuarticConvention::AppendixB) {
            Err(WignerError::NonNormalizable { mu }) => assert_eq!(mu, 1.5),
            other => panic!("expected NonNormalizable, got {other:?}"),
        }
    }

    #[test]
    fn marginal_depends_only_on_radius() {
        let f = WignerField::normalize(&params(0.8, 0.01), QuarticConvention::AppendixB).unwrap();
        for m in [MarginalMethod::Numeric, MarginalMethod::ClosedForm] {
            let a = f.marginal(3.0, 4.0, m);
            let b = f.marginal(5.0, 0.0, m);
            assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-300));
        }
    }

    #[test]
    fn marginal_below_threshold_peaks_at_origin() {
        let f = WignerField::normalize(&params(0.8, 0.01), QuarticConvention::AppendixB).unwrap();
        let at0 = f.marginal(0.0, 0.0, MarginalMethod::Numeric);
        for r in [0.5, 1.0, 2.0, 4.0, 8.0] {
            assert!(f.marginal(r, 0.0, MarginalMethod::Numeric) < at0);
        }
    }

    #[test]
    fn marginal_above_threshold_ring_radius() {
        // exponent of the printed form is maximal at u = (mu^2-1)/(2 g^2) = 22
        let f = WignerField::normalize(&params(1.2, 0.01), QuarticConvention::AppendixB).unwrap();
        let u_star = (1.2f64 * 1.2 - 1.0) / (2.0 * 0.01);
        assert!((u_star - 22.0).abs() < 1e-12);
        let val = |u: f64| f.marginal(u.sqrt(), 0.0, MarginalMethod::ClosedForm);
        // discrete check on a u-grid of spacing 1: argmax within prefactor
        // drift of the exponent peak
        let mut best_u = 0.0;
        let mut best = f64::NEG_INFINITY;
        for i in 0..=60 {
            let u = i as f64;
            let v = val(u);
            if v > best {
                best = v;
                best_u = u;
            }
        }
        assert!(
            (best_u - u_star).abs() <= 1.5,
            "argmax u = {best_u}, exponent peak {u_star}"
        );
        // and the exponent itself is maximal at exactly u_star
        let expo = |u: f64| -((1.0 - 1.2f64 * 1.2) * u + 0.01 * u * u) / (2.0 * 1.2);
        assert!(expo(u_star) > expo(u_star - 0.5) && expo(u_star) > expo(u_star + 0.5));
    }

    #[test]
    fn marginal_numeric_integrates_to_one() {
        // 2D integral over the plane: 2π ∫ marginal(r) r dr = 1
        for mu in [0.5, 1.2] {
            let f = WignerField::normalize(&params(mu, 0.01), QuarticConvention::AppendixB).unwrap();
            let int = crate::quad::adaptive_gk(
                &|r: f64| r * f.marginal(r, 0.0, MarginalMethod::Numeric),
                0.0,
                60.0,
                1e-9,
                0.0,
                300,
            )
            .unwrap()
            .0
                * 2.0
                * std::f64::consts::PI;
            assert!((int - 1.0).abs() < 1e-6, "mu = {mu}: integral {int}");
        }
    }

    #[test]
    fn slice_symmetric_under_joint_sign_flip() {
        let f = WignerField::normalize(&params(1.5, 0.01), QuarticConvention::AppendixB).unwrap();
        let grid = linspace(-15.0, 15.0, 31);
        let s = f.conditional_slice(&grid, &grid);
        let n = grid.len();
        for i in 0..n {
            for j in 0..n {
                let a = s.w[i][j];
                let b = s.w[n - 1 - i][n - 1 - j];
                assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-300));
            }
        }
    }

    #[test]
    fn slice_peaks_below_and_above() {
        let grid = linspace(-15.0, 15.0, 61);
        let below = WignerField::normalize(&params(0.5, 0.01), QuarticConvention::AppendixB).unwrap();
        let am = below.conditional_slice(&grid, &grid).argmaxima(1e-9);
        assert_eq!(am, vec![(30, 30)]); // origin

        let above = WignerField::normalize(&params(1.5, 0.01), QuarticConvention::AppendixB).unwrap();
        let am = above.conditional_slice(&grid, &grid).argmaxima(1e-9);
        assert_eq!(am.len(), 2);
        // x* = 10 lies exactly on this grid
        let x = |i: usize| grid[i];
        assert!((x(am[0].0) + 10.0).abs() < 1e-12 && (x(am[0].1) + 10.0).abs() < 1e-12);
        assert!((x(am[1].0) - 10.0).abs() < 1e-12 && (x(am[1].1) - 10.0).abs() < 1e-12);
    }

    #[test]
    fn peak_locations_by_convention() {
        let below = WignerField::normalize(&params(0.9, 0.01), QuarticConvention::AppendixB).unwrap();
        assert_eq!(below.peak_locations(), vec![(0.0, 0.0)]);

        let b = WignerField::normalize(&params(1.5, 0.01), QuarticConvention::AppendixB).unwrap();
        let pk = b.peak_locations();
        assert!((pk[0].0 - 10.0).abs() < 1e-12);

        let p = WignerField::normalize(&params(1.5, 0.01), QuarticConvention::AsPrinted).unwrap();
        let pk = p.peak_locations();
        assert!((pk[0].0 - 50f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn slice_maxima_match_classical_fixed_points_appendix_b() {
        let pars = params(1.7, 0.013);
        let f = WignerField::normalize(&pars, QuarticConvention::AppendixB).unwrap();
        let ring = crate::params::classical_fixed_points(&pars).ring.unwrap();
        let pk = f.peak_locations();
        assert!((pk[0].0 - ring.representative.x1).abs() < 1e-10);
    }
}
