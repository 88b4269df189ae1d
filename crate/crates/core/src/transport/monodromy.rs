use std::f64::consts::TAU;

use num_complex::Complex64;

use super::continuation::{HolonomyResult, LeafOde};
use super::path::{PathSpec, Segment};
use super::TransportError;
use crate::foliation::Chart;
use crate::singular::{infinity_charts, infinity_singularities};
use crate::Foliation;

/// Geometry of the standard loops around the singular points on the line
/// at infinity, in the `v`-coordinate of `U1`.
#[derive(Debug, Clone, PartialEq)]
pub struct InfinityLoops {
    pub roots: Vec<Complex64>,
    /// Common base point of all loops.
    pub base: Complex64,
    /// Default loop radius: a third of the smallest distance between roots.
    pub radius: f64,
}

fn min_distance(z: Complex64, pts: &[Complex64]) -> f64 {
    pts.iter().map(|p| (p - z).norm()).fold(f64::INFINITY, f64::min)
}

impl InfinityLoops {
    pub fn new(roots: Vec<Complex64>) -> Result<Self, TransportError> {
        if roots.is_empty() {
            return Err(TransportError::IndexOutOfRange);
        }
        let mut nn = f64::INFINITY;
        for (i, a) in roots.iter().enumerate() {
            for b in &roots[i + 1..] {
                nn = nn.min((a - b).norm());
            }
        }
        let radius = if nn.is_finite() { nn / 3.0 } else { 1.0 };
        // Grid search over the bounding box grown by the spacing, for the
        // point farthest from every root.
        let pad = if nn.is_finite() { nn } else { 1.0 };
        let (mut lo, mut hi) = (roots[0], roots[0]);
        for r in &roots {
            lo = Complex64::new(lo.re.min(r.re), lo.im.min(r.im));
            hi = Complex64::new(hi.re.max(r.re), hi.im.max(r.im));
        }
        lo -= Complex64::new(pad, pad);
        hi += Complex64::new(pad, pad);
        const G: usize = 40;
        let mut base = lo;
        let mut best = -1.0;
        for i in 0..=G {
            for k in 0..=G {
                let z = Complex64::new(
                    lo.re + (hi.re - lo.re) * i as f64 / G as f64,
                    lo.im + (hi.im - lo.im) * k as f64 / G as f64,
                );
                let d = min_distance(z, &roots);
                if d > best {
                    best = d;
                    base = z;
                }
            }
        }
        Ok(Self { roots, base, radius })
    }

    pub fn for_foliation(f: &Foliation) -> Result<Self, TransportError> {
        if !f.pl_property() {
            return Err(TransportError::NotPl);
        }
        Self::new(infinity_singularities(f)?.iter().map(|s| s.a).collect())
    }

    /// The loop from the base point to the circle of `radius` around root
    /// `j`, once counterclockwise, and back.
    ///
    /// When the straight approach passes too close to another root it is
    /// bent through a waypoint; the multiplier depends only on the circle.
    pub fn loop_path(&self, j: usize, radius: f64) -> Result<PathSpec, TransportError> {
        let a = *self.roots.get(j).ok_or(TransportError::IndexOutOfRange)?;
        let others: Vec<Complex64> = self.roots.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &r)| r).collect();
        if radius <= 0.0 || radius >= min_distance(a, &others) {
            return Err(TransportError::RadiusTooLarge);
        }
        let clearance = 0.5 * radius.min(min_distance(a, &others) - radius);
        let dir = self.base - a;
        let angle = if dir.norm() > 0.0 { dir.arg() } else { 0.0 };
        let entry = a + Complex64::from_polar(radius, angle);
        let clear = |segs: &[Segment]| others.iter().all(|&o| segs.iter().all(|s| s.distance_to(o) > clearance));
        let mut approach = vec![Segment::Line { from: self.base, to: entry }];
        if !clear(&approach) {
            let normal = Complex64::new(-dir.im, dir.re) / dir.norm().max(f64::MIN_POSITIVE);
            let mid = (self.base + entry) * 0.5;
            let span = dir.norm().max(radius);
            let found = (1..=8).flat_map(|k| [k as f64, -(k as f64)]).find_map(|k| {
                let w = mid + normal * (0.25 * k * span);
                let segs = vec![Segment::Line { from: self.base, to: w }, Segment::Line { from: w, to: entry }];
                clear(&segs).then_some(segs)
            });
            approach = found.ok_or(TransportError::InvalidPath)?;
        }
        let mut segments = approach.clone();
        segments.push(Segment::Arc { center: a, radius, start: angle, sweep: TAU });
        segments.extend(approach.iter().rev().map(Segment::reversed));
        PathSpec::new(Chart::U1, segments)
    }
}

/// Transports the transversal coordinate `u` along a path in the
/// `v`-plane of `U1`.
pub fn holonomy_at_infinity(f: &Foliation, path: &PathSpec, u0: Complex64, tol: f64) -> Result<HolonomyResult, TransportError> {
    if path.chart != Chart::U1 {
        return Err(TransportError::InvalidPath);
    }
    LeafOde::at_infinity(f).transport(path, u0, tol)
}

/// Monodromy of the leaf at infinity around its `j`-th singular point,
/// with multiplier from the variational equation along `u ≡ 0`.
pub fn infinity_monodromy(f: &Foliation, j: usize, radius: Option<f64>, tol: f64) -> Result<HolonomyResult, TransportError> {
    let loops = InfinityLoops::for_foliation(f)?;
    let path = loops.loop_path(j, radius.unwrap_or(loops.radius))?;
    holonomy_at_infinity(f, &path, Complex64::default(), tol)
}

/// `exp ∮ (P̃(0,v) + R̃_v(0,v)) / R̃(0,v) dv` over the circle around the
/// `j`-th point, reduced by the factor `e^{2πi}` from the residue `λ + 1`.
///
/// The periodic trapezoid rule converges geometrically; points are doubled
/// until successive values agree.
pub fn multiplier_by_integral(f: &Foliation, j: usize, radius: Option<f64>) -> Result<Complex64, TransportError> {
    let loops = InfinityLoops::for_foliation(f)?;
    let radius = radius.unwrap_or(loops.radius);
    loops.loop_path(j, radius)?;
    let a = loops.roots[j];
    let charts = infinity_charts(f);
    let (p0, r0) = (charts.p0(), charts.r0());
    let r0v = r0.derivative();
    let integrand = |theta: f64| {
        let e = Complex64::from_polar(radius, theta);
        let v = a + e;
        (p0.eval(v) + r0v.eval(v)) / r0.eval(v) * Complex64::new(0.0, 1.0) * e
    };
    let mut n = 16;
    let mut prev = trapezoid(&integrand, n);
    while n < 1 << 20 {
        n *= 2;
        let next = trapezoid(&integrand, n);
        if (next - prev).norm() <= 1e-14 * (1.0 + next.norm()) {
            return Ok((next - Complex64::new(0.0, TAU)).exp());
        }
        prev = next;
    }
    Err(TransportError::QuadratureFailed)
}

fn trapezoid(g: &impl Fn(f64) -> Complex64, n: usize) -> Complex64 {
    let h = TAU / n as f64;
    (0..n).map(|k| g(k as f64 * h)).sum::<Complex64>() * h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Poly2;

    fn saddle() -> Foliation {
        Foliation::new(Poly2::y(), Poly2::x()).unwrap()
    }

    #[test]
    fn saddle_multipliers() {
        let f = saddle();
        for j in 0..2 {
            let m = infinity_monodromy(&f, j, None, 1e-12).unwrap();
            assert!((m.multiplier_variational + 1.0).norm() < 1e-8, "{m:?}");
            assert!(m.endpoint.norm() < 1e-15);
            let i = multiplier_by_integral(&f, j, None).unwrap();
            assert!((i + 1.0).norm() < 1e-8, "{i}");
        }
    }

    #[test]
    fn oversized_radius() {
        let f = saddle();
        assert_eq!(infinity_monodromy(&f, 0, Some(2.5), 1e-10), Err(TransportError::RadiusTooLarge));
    }
}
