//! Deterministic moment extraction from the analytic distribution and the
//! variance sweep tables behind the threshold-region figures.
//!
//! A monomial `x₁^a y₁^b x₂^c y₂^d` turns, in polar coordinates, into exact
//! Fourier weights of `e^{ikθ}` per mode; the angular integral couples equal
//! Fourier orders of the two modes through `I_k(μr₁r₂/s)`. Odd-parity
//! monomials have no surviving order and short-circuit to an exact zero.

use std::io;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::linearized::{linearized_variances, EprVariances, LinearizedError, VarianceSource};
use crate::params::OpoParams;
use crate::wigner::{QuarticConvention, WignerField, WignerError};

/// Highest total degree the moment engine accepts.
pub const MAX_MOMENT_DEGREE: u32 = 8;

/// Exponents `(a, b, c, d)` of `x₁^a y₁^b x₂^c y₂^d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonomialSpec {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
}

impl MonomialSpec {
    pub fn new(a: u32, b: u32, c: u32, d: u32) -> Self {
        Self { a, b, c, d }
    }

    pub fn total_degree(&self) -> u32 {
        self.a + self.b + self.c + self.d
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MomentError {
    #[error("monomial degree {degree} exceeds the supported maximum {max}")]
    DegreeOverflow { degree: u32, max: u32 },
    #[error(transparent)]
    Wigner(#[from] WignerError),
}

/// A quadrature moment with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentValue {
    pub value: f64,
    pub error: f64,
}

/// Fourier coefficients of `cos^p θ sin^q θ` on `e^{ikθ}`, exact dyadic
/// rationals. Index `i` holds the coefficient of `k = i - (p+q)`.
fn fourier_coeffs(p: u32, q: u32) -> Vec<Complex64> {
    let n = (p + q) as usize;
    let mut out = vec![Complex64::new(0.0, 0.0); 2 * n + 1];
    // prefactor (1/2)^p (-i/2)^q
    let mut pref = Complex64::new(0.5f64.powi(p as i32), 0.0);
    pref *= Complex64::new(0.0, -0.5).powu(q);
    for j in 0..=p {
        for m in 0..=q {
            let k = 2 * (j + m) as i64 - n as i64;
            let sign = if (q - m) % 2 == 0 { 1.0 } else { -1.0 };
            let coeff = binomial(p, j) * binomial(q, m) * sign;
            out[(k + n as i64) as usize] += pref * coeff;
        }
    }
    out
}

fn binomial(n: u32, k: u32) -> f64 {
    let mut v = 1.0f64;
    for i in 0..k {
        v = v * (n - i) as f64 / (i + 1) as f64;
    }
    v
}

/// Angular weights `w_k` such that
/// `∫∫ cos^aθ₁ sin^bθ₁ cos^cθ₂ sin^dθ₂ e^{z cos(θ₁+θ₂)} dθ₁dθ₂
///  = 4π² Σ_k w_k I_k(z)`.
/// Empty when every weight vanishes (odd-parity monomial).
fn angular_weights(m: &MonomialSpec) -> Vec<(u32, f64)> {
    let c1 = fourier_coeffs(m.a, m.b);
    let c2 = fourier_coeffs(m.c, m.d);
    let n1 = (m.a + m.b) as i64;
    let n2 = (m.c + m.d) as i64;
    let k_max = n1.min(n2);
    let mut weights = Vec::new();
    for k in 0..=k_max {
        let g1 = c1[(k + n1) as usize];
        let g2 = c2[(k + n2) as usize];
        let w = if k == 0 {
            (g1 * g2).re
        } else {
            // pair k with -k; coefficients of a real function are conjugate
            2.0 * (g1 * g2).re
        };
        if w != 0.0 {
            weights.push((k as u32, w));
        }
    }
    weights
}

/// `∫ x₁^a y₁^b x₂^c y₂^d W d⁴X` with a quadrature error estimate.
///
/// Odd-symmetry monomials return an exact zero without touching the
/// quadrature.
pub fn moment(field: &WignerField, m: &MonomialSpec) -> Result<MomentValue, MomentError> {
    if m.total_degree() > MAX_MOMENT_DEGREE {
        return Err(MomentError::DegreeOverflow {
            degree: m.total_degree(),
            max: MAX_MOMENT_DEGREE,
        });
    }
    let weights = angular_weights(m);
    if weights.is_empty() {
        return Ok(MomentValue { value: 0.0, error: 0.0 });
    }
    let (raw, raw_err) = field
        .radial
        .integrate(m.a + m.b + 1, m.c + m.d + 1, &weights, field.rel_tol())
        .map_err(|e| crate::wigner::radial_err_to_wigner(e, field.params().mu))?;
    // moments are ratios of reduced integrals; the 4π²𝒩 e^{shift} factors cancel
    let value = raw / field.raw_norm;
    let error = (raw_err + raw.abs() * field.norm_err() / field.norm()) / field.raw_norm;
    Ok(MomentValue { value, error: error.abs() })
}

/// EPR variances assembled from second moments of the raw quadratures:
/// `v_x± = (⟨x₁²⟩ + ⟨x₂²⟩ ± 2⟨x₁x₂⟩)/2` and likewise for `y`.
///
/// Finite for every `μ`, including threshold. Returns the variances and the
/// worst per-entry quadrature error.
pub fn epr_variances_from_wigner(field: &WignerField) -> Result<(EprVariances, f64), MomentError> {
    let x1sq = moment(field, &MonomialSpec::new(2, 0, 0, 0))?;
    let x2sq = moment(field, &MonomialSpec::new(0, 0, 2, 0))?;
    let y1sq = moment(field, &MonomialSpec::new(0, 2, 0, 0))?;
    let y2sq = moment(field, &MonomialSpec::new(0, 0, 0, 2))?;
    let x1x2 = moment(field, &MonomialSpec::new(1, 0, 1, 0))?;
    let y1y2 = moment(field, &MonomialSpec::new(0, 1, 0, 1))?;
    let v = EprVariances {
        v_x_plus: 0.5 * (x1sq.value + x2sq.value + 2.0 * x1x2.value),
        v_x_minus: 0.5 * (x1sq.value + x2sq.value - 2.0 * x1x2.value),
        v_y_plus: 0.5 * (y1sq.value + y2sq.value + 2.0 * y1y2.value),
        v_y_minus: 0.5 * (y1sq.value + y2sq.value - 2.0 * y1y2.value),
        source: VarianceSource::Quadrature,
    };
    let err = [&x1sq, &x2sq, &y1sq, &y2sq, &x1x2, &y1y2]
        .iter()
        .map(|m| m.error)
        .fold(0.0f64, f64::max)
        * 2.0;
    Ok((v, err))
}

/// One table entry: a finite value or the threshold divergence marker.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum VarEntry {
    Value(f64),
    Divergent,
}

impl VarEntry {
    pub fn value(&self) -> Option<f64> {
        match self {
            VarEntry::Value(v) => Some(*v),
            VarEntry::Divergent => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VarianceRow {
    pub mu: f64,
    pub source: VarianceSource,
    pub v_x_plus: VarEntry,
    pub v_x_minus: VarEntry,
    pub v_y_plus: VarEntry,
    pub v_y_minus: VarEntry,
    pub error: f64,
}

impl VarianceRow {
    pub fn from_variances(mu: f64, v: &EprVariances, error: f64) -> Self {
        Self {
            mu,
            source: v.source,
            v_x_plus: VarEntry::Value(v.v_x_plus),
            v_x_minus: VarEntry::Value(v.v_x_minus),
            v_y_plus: VarEntry::Value(v.v_y_plus),
            v_y_minus: VarEntry::Value(v.v_y_minus),
            error,
        }
    }
}

/// Per-μ rows of EPR variances from the requested sources, sorted by μ.
#[derive(Debug, Clone, Default, Serialize)]
pub struct VarianceTable {
    pub rows: Vec<VarianceRow>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SweepError {
    #[error("mu grid must be finite and ascending")]
    BadGrid,
    #[error(transparent)]
    Moment(#[from] MomentError),
    #[error("linearized variances: {0}")]
    Linearized(#[from] LinearizedError),
}

/// Build the per-μ variance table from the closed-form linearized theory
/// and/or the quadrature moments of the analytic distribution.
///
/// At `μ = 1` the linearized antisqueezed entries carry the divergence
/// marker; the squeezed entries are continuous there (both branches give
/// 1/2). Quadrature rows are computed in parallel; row order is by μ, with
/// linearized before quadrature at equal μ.
pub fn variance_sweep(
    mu_grid: &[f64],
    g2: f64,
    convention: QuarticConvention,
    linearized: bool,
    quadrature: bool,
) -> Result<VarianceTable, SweepError> {
    if mu_grid.iter().any(|m| !m.is_finite()) || mu_grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(SweepError::BadGrid);
    }
    let mut rows = Vec::new();
    for &mu in mu_grid {
        if linearized {
            rows.push(linearized_row(mu, g2)?);
        }
    }
    if quadrature {
        let quad_rows: Vec<Result<VarianceRow, SweepError>> = mu_grid
            .par_iter()
            .map(|&mu| {
                let params = OpoParams::dimensionless(mu, g2)
                    .map_err(|_| SweepError::BadGrid)?;
                let field = WignerField::normalize(&params, convention)
                    .map_err(MomentError::Wigner)?;
                let (v, err) = epr_variances_from_wigner(&field)?;
                Ok(VarianceRow::from_variances(mu, &v, err))
            })
            .collect();
        for r in quad_rows {
            rows.push(r?);
        }
    }
    rows.sort_by(|a, b| {
        a.mu.partial_cmp(&b.mu)
            .unwrap()
            .then_with(|| source_order(a.source).cmp(&source_order(b.source)))
    });
    Ok(VarianceTable { rows })
}

fn source_order(s: VarianceSource) -> u8 {
    match s {
        VarianceSource::Linearized => 0,
        VarianceSource::Quadrature => 1,
        VarianceSource::Sde => 2,
    }
}

/// Linearized row with divergence markers at threshold.
pub fn linearized_row(mu: f64, g2: f64) -> Result<VarianceRow, SweepError> {
    match linearized_variances(mu, g2) {
        Ok(v) => Ok(VarianceRow::from_variances(mu, &v, 0.0)),
        Err(LinearizedError::ThresholdDivergence) => Ok(VarianceRow {
            mu,
            source: VarianceSource::Linearized,
            v_x_plus: VarEntry::Divergent,
            // both branches of the squeezed entries give 1/2 at mu = 1
            v_x_minus: VarEntry::Value(0.5),
            v_y_plus: VarEntry::Value(0.5),
            v_y_minus: VarEntry::Divergent,
            error: 0.0,
        }),
        Err(e) => Err(SweepError::Linearized(e)),
    }
}

impl VarianceTable {
    /// CSV serialization: `mu,source,vxp,vxm,vyp,vym,err` with 17
    /// significant digits and the literal token `div` for divergences.
    pub fn write_csv<W: io::Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "mu,source,vxp,vxm,vyp,vym,err")?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                fmt_g17(r.mu),
                r.source.label(),
                fmt_entry(r.v_x_plus),
                fmt_entry(r.v_x_minus),
                fmt_entry(r.v_y_plus),
                fmt_entry(r.v_y_minus),
                fmt_g17(r.error),
            )?;
        }
        Ok(())
    }
}

/// 17 significant digits, enough to round-trip any f64 exactly.
pub fn fmt_g17(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_entry(e: VarEntry) -> String {
    match e {
        VarEntry::Value(v) => fmt_g17(v),
        VarEntry::Divergent => "div".to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::OpoParams;

    fn field(mu: f64, g2: f64) -> WignerField {
        let p = OpoParams::dimensionless(mu, g2).unwrap();
        WignerField::normalize(&p, QuarticConvention::AppendixB).unwrap()
    }

    #[test]
    fn odd_moments_vanish_exactly() {
        let f = field(0.7, 0.01);
        for m in [
            MonomialSpec::new(1, 0, 0, 0),
            MonomialSpec::new(0, 1, 0, 0),
            MonomialSpec::new(1, 1, 1, 0),
            MonomialSpec::new(3, 0, 0, 0),
            MonomialSpec::new(2, 1, 0, 2),
        ] {
            let v = moment(&f, &m).unwrap();
            assert_eq!(v.value, 0.0);
            assert_eq!(v.error, 0.0);
        }
    }

    #[test]
    fn cross_phase_moments_vanish_exactly() {
        // <x1 y2> and <x1 y1> are killed by the angular weights alone
        let f = field(1.2, 0.01);
        assert_eq!(moment(&f, &MonomialSpec::new(1, 0, 0, 1)).unwrap().value, 0.0);
        assert_eq!(moment(&f, &MonomialSpec::new(1, 1, 0, 0)).unwrap().value, 0.0);
    }

    #[test]
    fn vacuum_second_moment() {
        let f = field(0.0, 0.0);
        let v = moment(&f, &MonomialSpec::new(2, 0, 0, 0)).unwrap();
        assert!((v.value - 1.0).abs() < 1e-8, "got {}", v.value);
    }

    #[test]
    fn degree_overflow_rejected() {
        let f = field(0.5, 0.01);
        let m = MonomialSpec::new(4, 4, 1, 0);
        assert!(matches!(
            moment(&f, &m),
            Err(MomentError::DegreeOverflow { degree: 9, .. })
        ));
    }

    #[test]
    fn gaussian_limit_covariances() {
        // g2 -> 0, mu = 0.5: <x1^2> = 1/(1-mu^2), <x1 x2> = mu/(1-mu^2)
        let f = field(0.5, 0.0);
        let x1sq = moment(&f, &MonomialSpec::new(2, 0, 0, 0)).unwrap().value;
        let x1x2 = moment(&f, &MonomialSpec::new(1, 0, 1, 0)).unwrap().value;
        assert!((x1sq - 1.0 / 0.75).abs() < 1e-7, "x1sq {x1sq}");
        assert!((x1x2 - 0.5 / 0.75).abs() < 1e-7, "x1x2 {x1x2}");
    }

    #[test]
    fn sign_structure_x1x2_y1y2() {
        let f = field(0.9, 0.01);
        let a = moment(&f, &MonomialSpec::new(1, 0, 1, 0)).unwrap().value;
        let b = moment(&f, &MonomialSpec::new(0, 1, 0, 1)).unwrap().value;
        assert!(a > 0.0);
        assert_eq!(a, -b, "identical radial integral, opposite angular weight");
    }

    #[test]
    fn quadrature_variances_match_linearized_deep_below() {
        // mu = 0.2 sits far enough below threshold for the quartic shift to
        // stay inside 0.02 on every entry
        let (v, _) = epr_variances_from_wigner(&field(0.2, 0.01)).unwrap();
        let l = linearized_variances(0.2, 0.01).unwrap();
        assert!((v.v_x_plus - l.v_x_plus).abs() < 0.02);
        assert!((v.v_x_minus - l.v_x_minus).abs() < 0.02);
        assert!((v.v_y_plus - l.v_y_plus).abs() < 0.02);
        assert!((v.v_y_minus - l.v_y_minus).abs() < 0.02);
    }

    #[test]
    fn squeezed_variance_near_linearized_at_09() {
        let (v, _) = epr_variances_from_wigner(&field(0.9, 0.01)).unwrap();
        assert!((v.v_x_minus - 1.0 / 1.9).abs() < 0.02, "got {}", v.v_x_minus);
    }

    #[test]
    fn finite_at_threshold() {
        let (v, _) = epr_variances_from_wigner(&field(1.0, 0.01)).unwrap();
        assert!(v.v_x_plus.is_finite());
        // regression value, cross-checked against an importance-sampled
        // Monte Carlo estimate of the same distribution
        assert!((v.v_x_plus - 11.2908).abs() < 0.01, "got {}", v.v_x_plus);
    }

    #[test]
    fn epr_symmetry_of_assembled_variances() {
        let (v, _) = epr_variances_from_wigner(&field(1.5, 0.01)).unwrap();
        // <y1 y2> = -<x1 x2> makes v_y_plus = v_x_minus and v_y_minus = v_x_plus
        assert!((v.v_y_plus - v.v_x_minus).abs() < 1e-10);
        assert!((v.v_y_minus - v.v_x_plus).abs() < 1e-7 * v.v_x_plus);
    }

    #[test]
    fn sweep_linearized_rows() {
        let t = variance_sweep(&[0.5], 0.01, QuarticConvention::AppendixB, true, false).unwrap();
        assert_eq!(t.rows.len(), 1);
        let r = &t.rows[0];
        assert_eq!(r.v_x_plus, VarEntry::Value(2.0));
        match r.v_x_minus {
            VarEntry::Value(v) => assert!((v - 2.0 / 3.0).abs() < 1e-14),
            VarEntry::Divergent => panic!(),
        }
    }

    #[test]
    fn sweep_threshold_markers() {
        let t = variance_sweep(&[1.0], 0.01, QuarticConvention::AppendixB, true, true).unwrap();
        assert_eq!(t.rows.len(), 2);
        assert_eq!(t.rows[0].source, VarianceSource::Linearized);
        assert_eq!(t.rows[0].v_x_plus, VarEntry::Divergent);
        assert_eq!(t.rows[0].v_y_minus, VarEntry::Divergent);
        assert_eq!(t.rows[0].v_x_minus, VarEntry::Value(0.5));
        assert_eq!(t.rows[1].source, VarianceSource::Quadrature);
        assert!(t.rows[1].v_x_plus.value().unwrap().is_finite());
    }

    #[test]
    fn sweep_rejects_descending_grid() {
        assert_eq!(
            variance_sweep(&[1.0, 0.5], 0.01, QuarticConvention::AppendixB, true, false).unwrap_err(),
            SweepError::BadGrid
        );
    }

    #[test]
    fn csv_format() {
        let t = variance_sweep(&[1.0], 0.01, QuarticConvention::AppendixB, true, false).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "mu,source,vxp,vxm,vyp,vym,err");
        let row = lines.next().unwrap();
        assert!(row.starts_with("1.0000000000000000e0,linearized,div,"));
        assert!(row.contains("5.0000000000000000e-1"));
    }
}
