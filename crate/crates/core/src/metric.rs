//! Fubini–Study quantities: the metric on tangent vectors, the energy of
//! straight segments with its distance bound, and the foliation-adapted
//! metric whose restriction to each leaf has curvature
//! `κ = −2(n−1)(|P|² + |Q|² + |R|²) / (1 + |p|²)^(n+1)`, `n` the
//! geometric degree.

use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use thiserror::Error;

use crate::transport::rk::{integrate, RkConfig};
use crate::transport::TransportError;
use crate::{Foliation, Poly2};

/// `|P|² + |Q|² + |R|²` below this fraction of the size of its terms
/// marks a singular point.
pub const SINGULAR_REL: f64 = 1e-24;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("point is singular for the foliation")]
    SingularPoint,
    #[error("leaf continuation failed: {0}")]
    Transport(#[from] TransportError),
}

type Point = (Complex64, Complex64);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricSample {
    pub point: Point,
    pub tangent: Point,
    pub fs_length_sq: f64,
}

impl MetricSample {
    pub fn new(point: Point, tangent: Point) -> Self {
        Self {
            point,
            tangent,
            fs_length_sq: fs_norm_sq(point, tangent),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureSample {
    pub point: Point,
    pub kappa: f64,
}

fn fs_numerator((x, y): Point, (dx, dy): Point) -> f64 {
    dx.norm_sqr() + dy.norm_sqr() + (x * dy - y * dx).norm_sqr()
}

fn weight((x, y): Point) -> f64 {
    1.0 + x.norm_sqr() + y.norm_sqr()
}

/// `(|dx|² + |dy|² + |x dy − y dx|²) / (1 + |x|² + |y|²)²`.
pub fn fs_norm_sq(point: Point, tangent: Point) -> f64 {
    fs_numerator(point, tangent) / weight(point).powi(2)
}

/// `∫₀¹ ‖γ'(t)‖² dt` along `γ(t) = (1−t)p₀ + t p₁`, by Gauss–Legendre.
pub fn segment_energy(p0: Point, p1: Point, quad_points: usize) -> f64 {
    let rule = GaussLegendre::new(NonZeroUsize::new(quad_points.max(1)).expect("nonzero"));
    let d = (p1.0 - p0.0, p1.1 - p0.1);
    rule.integrate(0.0, 1.0, |t| {
        let p = (p0.0 + d.0 * t, p0.1 + d.1 * t);
        fs_norm_sq(p, d)
    })
}

/// Euclidean distance from the origin of `ℂ²` to the segment `[p₀, p₁]`.
pub fn origin_distance(p0: Point, p1: Point) -> f64 {
    let d = (p1.0 - p0.0, p1.1 - p0.1);
    let dd = d.0.norm_sqr() + d.1.norm_sqr();
    let t = if dd == 0.0 {
        0.0
    } else {
        (-(p0.0 * d.0.conj() + p0.1 * d.1.conj()).re / dd).clamp(0.0, 1.0)
    };
    (p0.0 + d.0 * t).norm().hypot((p0.1 + d.1 * t).norm())
}

/// `|p₀ − p₁|² / (1 + δ²)` with `δ` the distance from the origin to the
/// segment; bounds the segment energy from above.
pub fn energy_bound(p0: Point, p1: Point) -> f64 {
    let d2 = (p1.0 - p0.0).norm_sqr() + (p1.1 - p0.1).norm_sqr();
    let delta = origin_distance(p0, p1);
    d2 / (1.0 + delta * delta)
}

fn field_sq(p: &Poly2, q: &Poly2, r: &Poly2, (x, y): Point) -> Result<f64, MetricError> {
    let s = p.eval(x, y).norm_sqr() + q.eval(x, y).norm_sqr() + r.eval(x, y).norm_sqr();
    let (ax, ay) = (x.norm(), y.norm());
    let size: f64 = [p, q, r]
        .iter()
        .map(|poly| {
            poly.terms()
                .map(|((i, j), c)| c.norm() * ax.powi(i as i32) * ay.powi(j as i32))
                .sum::<f64>()
                .powi(2)
        })
        .sum();
    if s <= SINGULAR_REL * size || s == 0.0 {
        Err(MetricError::SingularPoint)
    } else {
        Ok(s)
    }
}

/// `ρ = (1 + |x|² + |y|²)^(n−1) (|dx|² + |dy|² + |x dy − y dx|²) / (|P|² + |Q|² + |R|²)`.
pub fn foliation_metric_norm_sq(f: &Foliation, point: Point, tangent: Point) -> Result<f64, MetricError> {
    let n = f.geometric_degree() as i32;
    let s = field_sq(f.p(), f.q(), f.r(), point)?;
    Ok(weight(point).powi(n - 1) * fs_numerator(point, tangent) / s)
}

/// The same metric written in `(u, v) ∈ U1`, using
/// `P̃ = u^(n+1) P(1/u, v/u)` and likewise for `Q` and `R`.
pub fn foliation_metric_norm_sq_u1(f: &Foliation, point: Point, tangent: Point) -> Result<f64, MetricError> {
    let n = f.geometric_degree();
    let e = n + 1;
    let lift = |p: &Poly2| p.map_exponents(|i, j| (e - i - j, j));
    let s = field_sq(&lift(f.p()), &lift(f.q()), &lift(f.r()), point)?;
    Ok(weight(point).powi(n as i32 - 1) * fs_numerator(point, tangent) / s)
}

/// Closed-form Gaussian curvature of the leaf through `point`.
pub fn leaf_curvature(f: &Foliation, point: Point) -> Result<f64, MetricError> {
    let n = f.geometric_degree() as i32;
    let s = field_sq(f.p(), f.q(), f.r(), point)?;
    Ok(-2.0 * (n - 1) as f64 * s / weight(point).powi(n + 1))
}

/// Point of the leaf reached in complex time `t` under `dx/dT = P`,
/// `dy/dT = Q`.
fn flow(f: &Foliation, (x, y): Point, t: Complex64) -> Result<Point, MetricError> {
    let cfg = RkConfig {
        tol: 1e-14,
        ..Default::default()
    };
    let rhs = |_: f64, z: &[Complex64; 2]| {
        let (p, q) = f.field(z[0], z[1]);
        Some([p * t, q * t])
    };
    let out = integrate(rhs, 0.0, 1.0, [x, y], &cfg, |_, _| false).map_err(|_| TransportError::StepUnderflow)?;
    Ok((out.y[0], out.y[1]))
}

/// Curvature from a five-point Laplacian of `log h` on the leaf, with
/// `h² = (1 + |x|² + |y|²)^(n−1)` in the time `T` of `(P, Q)`:
/// `κ = −Δ log h / h²`.
pub fn curvature_fd_check(f: &Foliation, point: Point, h: f64) -> Result<f64, MetricError> {
    field_sq(f.p(), f.q(), f.r(), point)?;
    let n = f.geometric_degree() as f64;
    let log_h = |p: Point| 0.5 * (n - 1.0) * weight(p).ln();
    let mut sum = -4.0 * log_h(point);
    for dir in [Complex64::new(h, 0.0), Complex64::new(-h, 0.0), Complex64::new(0.0, h), Complex64::new(0.0, -h)] {
        sum += log_h(flow(f, point, dir)?);
    }
    let laplacian = sum / (h * h);
    Ok(-laplacian / weight(point).powf(n - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn fs_at_simple_points() {
        assert_eq!(fs_norm_sq((c(0.0), c(0.0)), (c(1.0), c(0.0))), 1.0);
        assert_eq!(fs_norm_sq((c(0.0), c(0.0)), (c(0.0), c(1.0))), 1.0);
        assert_eq!(fs_norm_sq((c(1.0), c(0.0)), (c(0.0), c(1.0))), 0.5);
    }

    #[test]
    fn curvature_example() {
        let p = Poly2::from_real_parts(&[(2, 0, 1.0, 0.0), (0, 0, 1.0, 0.0)]).unwrap();
        let q = Poly2::from_real_parts(&[(0, 2, 1.0, 0.0)]).unwrap();
        let f = Foliation::new(p, q).unwrap();
        assert_eq!(f.geometric_degree(), 2);
        let origin = (c(0.0), c(0.0));
        assert_eq!(leaf_curvature(&f, origin).unwrap(), -2.0);
        let fd = curvature_fd_check(&f, origin, 1e-3).unwrap();
        assert!((fd + 2.0).abs() < 2e-4, "{fd}");
    }

    #[test]
    fn degree_one_is_flat() {
        let f = Foliation::new(Poly2::y(), Poly2::x()).unwrap();
        let p = (c(0.3), Complex64::new(-1.0, 2.0));
        assert_eq!(leaf_curvature(&f, p).unwrap(), 0.0);
        assert!(curvature_fd_check(&f, p, 1e-3).unwrap().abs() < 1e-6);
    }

    #[test]
    fn singular_point_is_refused() {
        let f = Foliation::new(Poly2::y(), Poly2::x()).unwrap();
        assert_eq!(leaf_curvature(&f, (c(0.0), c(0.0))), Err(MetricError::SingularPoint));
    }
}
