//! Diffusion-matrix algebra and the quasi-potential construction: the
//! `a, b, c, d` scalars, the closed-form diffusion matrix and its inverse,
//! the exact and mean-diffusion `Z` fields, numerical curl tests and line
//! integration of the conservative field back to the distribution exponent.

use thiserror::Error;

use crate::params::OpoParams;
use crate::phase::PhasePoint;
use crate::quad::gauss_legendre_64;
use crate::real::Real;

/// The four scalars parameterizing the diffusion matrix:
/// `a = 1 + (g²/2)(x₂²+y₂²)`, `b = 1 + (g²/2)(x₁²+y₁²)`,
/// `c = (g²/2)(x₁x₂ + y₁y₂)`, `d = (g²/2)(x₁y₂ - y₁x₂)`.
pub fn abcd<R: Real>(p: &PhasePoint<R>, params: &OpoParams<R>) -> (R, R, R, R) {
    let half_g2 = params.g2 * R::half();
    let a = R::one() + half_g2 * p.r2_sq();
    let b = R::one() + half_g2 * p.r1_sq();
    let c = half_g2 * (p.x1 * p.x2 + p.y1 * p.y2);
    let d = half_g2 * (p.x1 * p.y2 - p.y1 * p.x2);
    (a, b, c, d)
}

/// Diffusion matrix `D = B Bᵀ` in closed form, units `2γ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionMatrix<R: Real = f64> {
    pub m: [[R; 4]; 4],
    pub a: R,
    pub b: R,
    pub c: R,
    pub d: R,
}

impl<R: Real> DiffusionMatrix<R> {
    /// `ab - c² - d²`, identically `1 + (g²/2)(r₁² + r₂²)`.
    pub fn det_factor(&self) -> R {
        self.a * self.b - self.c * self.c - self.d * self.d
    }
}

/// `D(X) = 2γ [[a,0,c,d],[0,a,-d,c],[c,-d,b,0],[d,c,0,b]]`.
pub fn diffusion<R: Real>(p: &PhasePoint<R>, params: &OpoParams<R>) -> DiffusionMatrix<R> {
    let (a, b, c, d) = abcd(p, params);
    let t = R::two() * params.gamma;
    let z = R::zero();
    let m = [
        [t * a, z, t * c, t * d],
        [z, t * a, -(t * d), t * c],
        [t * c, -(t * d), t * b, z],
        [t * d, t * c, z, t * b],
    ];
    DiffusionMatrix { m, a, b, c, d }
}

/// Closed-form inverse of the diffusion matrix.
///
/// Structure as printed (entries `b, a, ∓c, ∓d` over `ab - c² - d²`); the
/// scalar prefactor is `1/(2γ)`, fixed so that `D·D⁻¹ = I` holds.
pub fn diffusion_inverse<R: Real>(p: &PhasePoint<R>, params: &OpoParams<R>) -> [[R; 4]; 4] {
    let (a, b, c, d) = abcd(p, params);
    let det = a * b - c * c - d * d;
    let f = R::one() / (R::two() * params.gamma * det);
    let z = R::zero();
    [
        [f * b, z, -(f * c), -(f * d)],
        [z, f * b, f * d, -(f * c)],
        [-(f * c), f * d, f * a, z],
        [-(f * d), -(f * c), z, f * a],
    ]
}

/// Which intensity appears in the cubic bracket of the exact `Z` field.
///
/// The printed components carry the own-mode intensity
/// (`-(g²/2)x₁(x₁²+y₁²)` in `Z₁`); the drift structure suggests the
/// opposite-mode one. Neither variant satisfies the potential condition, so
/// both are kept selectable and the printed form is the default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ZExactVariant {
    #[default]
    AsPrinted,
    DriftConsistent,
}

/// The exact (non-conservative) `Z` field of the full diffusion matrix:
/// prefactor `1/(1 + (g²/2)(r₁²+r₂²))` times the printed brackets.
pub fn z_exact<R: Real>(
    p: &PhasePoint<R>,
    params: &OpoParams<R>,
    variant: ZExactVariant,
) -> [R; 4] {
    let g2 = params.g2;
    let mu = params.mu;
    let r1s = p.r1_sq();
    let r2s = p.r2_sq();
    let pref = R::one() / (R::one() + g2 * R::half() * (r1s + r2s));
    let lin = R::one() + g2;
    let half_g2 = g2 * R::half();
    let (q1, q2) = match variant {
        ZExactVariant::AsPrinted => (r1s, r2s),
        ZExactVariant::DriftConsistent => (r2s, r1s),
    };
    [
        pref * (-(lin * p.x1) + mu * p.x2 - half_g2 * p.x1 * q1),
        pref * (-(lin * p.y1) + mu * p.y2 - half_g2 * p.y1 * q1),
        pref * (-(lin * p.x2) + mu * p.x1 - half_g2 * p.x2 * q2),
        pref * (-(lin * p.y2) + mu * p.y1 - half_g2 * p.y2 * q2),
    ]
}

/// The mean-diffusion (conservative) `Z` field, `Z = -A/(γ s(μ))`:
///
/// ```text
/// Z₁ = (1/s)[ x₁ - μx₂ + (g²/2)x₁(x₂²+y₂²) ]   (and cyclic)
/// ```
///
/// This is exactly `-∇ log W` for the quartic coefficient `g²/2`, so the
/// line integral of `Z` from the origin reproduces the distribution
/// exponent with `W = N exp(-∫Z·dX)`.
pub fn z_approx<R: Real>(p: &PhasePoint<R>, params: &OpoParams<R>) -> [R; 4] {
    let s = params.s();
    let mu = params.mu;
    let half_g2 = params.g2 * R::half();
    let r1s = p.r1_sq();
    let r2s = p.r2_sq();
    [
        (p.x1 - mu * p.x2 + half_g2 * p.x1 * r2s) / s,
        (p.y1 + mu * p.y2 + half_g2 * p.y1 * r2s) / s,
        (p.x2 - mu * p.x1 + half_g2 * p.x2 * r1s) / s,
        (p.y2 + mu * p.y1 + half_g2 * p.y2 * r1s) / s,
    ]
}

/// Tag for a packaged 4-vector field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldTag {
    Exact,
    Approx,
}

/// A callable 4-vector field over phase space with its provenance tag.
pub struct VectorField4 {
    pub tag: FieldTag,
    f: Box<dyn Fn(&PhasePoint<f64>) -> [f64; 4] + Send + Sync>,
}

impl VectorField4 {
    pub fn exact(params: OpoParams<f64>, variant: ZExactVariant) -> Self {
        Self {
            tag: FieldTag::Exact,
            f: Box::new(move |p| z_exact(p, &params, variant)),
        }
    }

    pub fn approx(params: OpoParams<f64>) -> Self {
        Self {
            tag: FieldTag::Approx,
            f: Box::new(move |p| z_approx(p, &params)),
        }
    }

    pub fn eval(&self, p: &PhasePoint<f64>) -> [f64; 4] {
        (self.f)(p)
    }
}

/// Default step for the central-difference curl estimate. The fields are
/// low-order rational functions, so truncation error is O(h²) with mild
/// constants.
pub const CURL_STEP: f64 = 1e-5;

/// Antisymmetrized Jacobian `∂ᵢZⱼ - ∂ⱼZᵢ` by central differences.
pub fn curl_matrix<F: Fn(&PhasePoint<f64>) -> [f64; 4]>(
    field: &F,
    p: &PhasePoint<f64>,
    h: f64,
) -> [[f64; 4]; 4] {
    assert!(h > 0.0);
    let mut jac = [[0.0f64; 4]; 4];
    let x = p.to_array();
    for j in 0..4 {
        let mut xp = x;
        let mut xm = x;
        xp[j] += h;
        xm[j] -= h;
        let fp = field(&PhasePoint::from_array(xp));
        let fm = field(&PhasePoint::from_array(xm));
        for i in 0..4 {
            jac[i][j] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    let mut curl = [[0.0f64; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            curl[i][j] = jac[i][j] - jac[j][i];
        }
    }
    curl
}

/// Largest |entry| of the curl matrix.
pub fn max_abs_curl<F: Fn(&PhasePoint<f64>) -> [f64; 4]>(
    field: &F,
    p: &PhasePoint<f64>,
    h: f64,
) -> f64 {
    curl_matrix(field, p, h)
        .iter()
        .flatten()
        .fold(0.0f64, |m, &v| m.max(v.abs()))
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PotentialError {
    #[error("field is not curl-free near the integration path (max |curl| = {max_curl:.3e} at sample {at})")]
    CurlTestFailed { max_curl: f64, at: usize },
    #[error("line integral is path-dependent: straight {straight:.12e} vs axis-parallel {staircase:.12e}")]
    PathDependent { straight: f64, staircase: f64 },
}

/// Tolerance for the curl test and the two-path consistency check inside
/// [`potential_from_z`].
pub const POTENTIAL_CURL_TOL: f64 = 1e-8;

/// Line integral `∫ Z·dX` from the origin to `X` along the straight
/// segment, cross-checked against an axis-parallel path.
///
/// The curl is verified at samples along the segment first; a
/// non-conservative field (the exact `Z`) aborts with
/// [`PotentialError::CurlTestFailed`]. For the mean-diffusion field the
/// result equals `-log_w_unnorm(X)` under the `g²/2` convention.
pub fn potential_from_z(field: &VectorField4, target: &PhasePoint<f64>) -> Result<f64, PotentialError> {
    // curl check on a few points of the segment (skip the origin, where
    // even the exact field is trivially symmetric)
    for (idx, t) in [0.25, 0.5, 0.75, 1.0].iter().enumerate() {
        let p = PhasePoint::new(t * target.x1, t * target.y1, t * target.x2, t * target.y2);
        let c = max_abs_curl(&|q| field.eval(q), &p, CURL_STEP);
        if c > POTENTIAL_CURL_TOL {
            return Err(PotentialError::CurlTestFailed { max_curl: c, at: idx });
        }
    }

    let x = target.to_array();
    let straight = gauss_legendre_64(
        &|t: f64| {
            let p = PhasePoint::new(t * x[0], t * x[1], t * x[2], t * x[3]);
            let z = field.eval(&p);
            z[0] * x[0] + z[1] * x[1] + z[2] * x[2] + z[3] * x[3]
        },
        0.0,
        1.0,
    );

    // axis-parallel staircase: raise one coordinate at a time
    let mut staircase = 0.0;
    let mut base = [0.0f64; 4];
    for i in 0..4 {
        let lo = base;
        staircase += gauss_legendre_64(
            &|t: f64| {
                let mut q = lo;
                q[i] = t;
                field.eval(&PhasePoint::from_array(q))[i]
            },
            0.0,
            x[i],
        );
        base[i] = x[i];
    }

    let scale = straight.abs().max(1.0);
    if (straight - staircase).abs() > POTENTIAL_CURL_TOL * scale {
        return Err(PotentialError::PathDependent { straight, staircase });
    }
    Ok(straight)
}
