//! Phase-space points and the EPR quadrature transform.
//!
//! Quadrature convention: `x = α + α*`, `y = -i(α - α*)`, so every
//! quadrature has vacuum variance 1.

use crate::real::Real;

/// The four real quadratures of signal (1) and idler (2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint<R: Real = f64> {
    pub x1: R,
    pub y1: R,
    pub x2: R,
    pub y2: R,
}

impl<R: Real> PhasePoint<R> {
    pub fn new(x1: R, y1: R, x2: R, y2: R) -> Self {
        Self { x1, y1, x2, y2 }
    }

    pub fn origin() -> Self {
        Self::new(R::zero(), R::zero(), R::zero(), R::zero())
    }

    pub fn from_array(a: [R; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(self) -> [R; 4] {
        [self.x1, self.y1, self.x2, self.y2]
    }

    /// Mode-1 intensity `x₁² + y₁²`.
    pub fn r1_sq(&self) -> R {
        self.x1 * self.x1 + self.y1 * self.y1
    }

    /// Mode-2 intensity `x₂² + y₂²`.
    pub fn r2_sq(&self) -> R {
        self.x2 * self.x2 + self.y2 * self.y2
    }

    pub fn norm_sq(&self) -> R {
        self.r1_sq() + self.r2_sq()
    }

    pub fn is_finite(&self) -> bool {
        self.x1.is_finite() && self.y1.is_finite() && self.x2.is_finite() && self.y2.is_finite()
    }
}

/// Combined (EPR) quadratures `x± = (x₁ ± x₂)/√2`, `y± = (y₁ ± y₂)/√2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EprPoint<R: Real = f64> {
    pub x_plus: R,
    pub y_plus: R,
    pub x_minus: R,
    pub y_minus: R,
}

impl<R: Real> EprPoint<R> {
    pub fn norm_sq(&self) -> R {
        self.x_plus * self.x_plus
            + self.y_plus * self.y_plus
            + self.x_minus * self.x_minus
            + self.y_minus * self.y_minus
    }
}

/// Orthogonal map from mode quadratures to EPR quadratures.
pub fn epr_transform<R: Real>(p: &PhasePoint<R>) -> EprPoint<R> {
    let inv_sqrt2 = R::FRAC_1_SQRT_2();
    EprPoint {
        x_plus: (p.x1 + p.x2) * inv_sqrt2,
        y_plus: (p.y1 + p.y2) * inv_sqrt2,
        x_minus: (p.x1 - p.x2) * inv_sqrt2,
        y_minus: (p.y1 - p.y2) * inv_sqrt2,
    }
}

/// Inverse of [`epr_transform`]; composition recovers the input to machine
/// precision.
pub fn epr_inverse<R: Real>(e: &EprPoint<R>) -> PhasePoint<R> {
    let inv_sqrt2 = R::FRAC_1_SQRT_2();
    PhasePoint {
        x1: (e.x_plus + e.x_minus) * inv_sqrt2,
        y1: (e.y_plus + e.y_minus) * inv_sqrt2,
        x2: (e.x_plus - e.x_minus) * inv_sqrt2,
        y2: (e.y_plus - e.y_minus) * inv_sqrt2,
    }
}
