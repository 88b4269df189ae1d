use num_complex::Complex64;

use super::path::PathSpec;
use super::rk::{integrate, RkConfig, RkError};
use super::TransportError;
use crate::foliation::Chart;
use crate::{Foliation, Poly2};

/// Integration aborts where the denominator drops below this fraction of
/// the size of its terms.
pub const POLE_FLOOR: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolonomyResult {
    /// Transversal coordinate at the end of the path.
    pub endpoint: Complex64,
    /// Derivative of the endpoint with respect to the starting value.
    pub multiplier_variational: Complex64,
    pub steps: usize,
    /// Largest accepted local error estimate (at most the tolerance).
    pub max_residual: f64,
}

/// `dw/ds = num(s, w) / den(s, w)` with the variational equation
/// `dξ/ds = ∂_w(num/den) ξ`. Polynomials take `(s, w)`.
#[derive(Debug, Clone)]
pub(crate) struct LeafOde {
    num: Poly2,
    den: Poly2,
    num_w: Poly2,
    den_w: Poly2,
    den_abs: Vec<(i32, i32, f64)>,
}

impl LeafOde {
    pub(crate) fn new(num: Poly2, den: Poly2) -> Self {
        let den_abs = den.terms().map(|((i, j), c)| (i as i32, j as i32, c.norm())).collect();
        Self {
            num_w: num.derivative_y(),
            den_w: den.derivative_y(),
            num,
            den,
            den_abs,
        }
    }

    /// `dy/dx = Q/P` in the affine chart.
    pub(crate) fn affine(f: &Foliation) -> Self {
        Self::new(f.q().clone(), f.p().clone())
    }

    /// `du/dv = u P̃ / R̃` in `U1`, with `s = v` and `w = u`.
    pub(crate) fn at_infinity(f: &Foliation) -> Self {
        let form = f.chart_form(Chart::U1);
        Self::new(form.a.swap_vars(), form.b.swap_vars())
    }

    fn floor(&self, s: Complex64, w: Complex64) -> f64 {
        let (a, b) = (s.norm(), w.norm());
        let size: f64 = self.den_abs.iter().map(|&(i, j, c)| c * a.powi(i) * b.powi(j)).sum();
        POLE_FLOOR * (1.0 + size)
    }

    /// `(dw/ds, d(∂_w(num/den))/ds)` factors, or `None` at a pole.
    pub(crate) fn slope(&self, s: Complex64, w: Complex64) -> Option<(Complex64, Complex64)> {
        let den = self.den.eval(s, w);
        if den.norm() < self.floor(s, w) {
            return None;
        }
        let num = self.num.eval(s, w);
        let g = num / den;
        let gw = (self.num_w.eval(s, w) - g * self.den_w.eval(s, w)) / den;
        Some((g, gw))
    }

    /// Transports `(w0, ξ = 1)` along `path`.
    pub(crate) fn transport(&self, path: &PathSpec, w0: Complex64, tol: f64) -> Result<HolonomyResult, TransportError> {
        let cfg = RkConfig { tol, ..Default::default() };
        let mut state = [w0, Complex64::new(1.0, 0.0)];
        let mut steps = 0;
        let mut max_err: f64 = 0.0;
        for seg in &path.segments {
            let rhs = |t: f64, y: &[Complex64; 2]| {
                let s = seg.point(t);
                let (g, gw) = self.slope(s, y[0])?;
                let ds = seg.velocity(t);
                Some([g * ds, gw * y[1] * ds])
            };
            let out = integrate(rhs, 0.0, 1.0, state, &cfg, |_, _| false).map_err(|e| match e {
                RkError::Pole { t } => TransportError::PoleEncountered { at: seg.point(t) },
                RkError::StepUnderflow { .. } => TransportError::StepUnderflow,
                RkError::MaxSteps { .. } => TransportError::ToleranceNotMet,
            })?;
            state = out.y;
            steps += out.steps;
            max_err = max_err.max(out.max_err);
        }
        Ok(HolonomyResult {
            endpoint: state[0],
            multiplier_variational: state[1],
            steps,
            max_residual: max_err * tol,
        })
    }
}

/// Continues the leaf through `start` along a path in the `x`-plane,
/// integrating `dy/dx = Q/P` and its variational equation.
pub fn continue_leaf(
    f: &Foliation,
    start: (Complex64, Complex64),
    path: &PathSpec,
    tol: f64,
) -> Result<HolonomyResult, TransportError> {
    if path.chart != Chart::U0 || (path.start() - start.0).norm() > 1e-12 * (1.0 + start.0.norm()) {
        return Err(TransportError::InvalidPath);
    }
    LeafOde::affine(f).transport(path, start.1, tol)
}
