use num_complex::Complex64;
use num_traits::Zero;

use super::{Chart, Foliation, FoliationError};
use crate::cpoly::{roots, Degree, DEFAULT_CLUSTER_TOL};
use crate::{Poly1, Poly2};

/// Relative threshold for trimming leading coefficients of the finite
/// tangency polynomial and for reading off the order at infinity.
const TANGENCY_REL: f64 = 1e-10;

/// The projective closure of `T ↦ (x0 + a T, y0 + b T)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line {
    pub base: (Complex64, Complex64),
    pub dir: (Complex64, Complex64),
}

/// A tangency point of a foliation with a line. `point` is `None` for the
/// point of the line at infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tangency {
    pub point: Option<(Complex64, Complex64)>,
    pub order: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TangencyCount {
    pub tangencies: Vec<Tangency>,
    pub total: usize,
}

/// Counts tangencies of `f` with `line`, with multiplicity, including the
/// point at infinity of the line.
///
/// At affine points the order is the root multiplicity of
/// `T ↦ b P(ℓ(T)) − a Q(ℓ(T))`, also at singular points of the foliation.
/// The order at infinity is computed in whichever of `U1`, `U2` contains
/// the point at infinity of the line.
pub fn tangency_count(f: &Foliation, line: &Line) -> Result<TangencyCount, FoliationError> {
    let (a, b) = line.dir;
    if a.is_zero() && b.is_zero() {
        return Err(FoliationError::DegenerateLine);
    }
    let restricted = |p: &Poly2| p.restrict_to_line(line.base, line.dir);
    let t = &restricted(f.p()).scale(b) - &restricted(f.q()).scale(a);
    let scale = f.coeff_scale() * (1.0 + a.norm() + b.norm()).powi(f.affine_degree() as i32 + 1);
    if t.is_negligible(TANGENCY_REL, scale) {
        return Err(FoliationError::LineIsLeaf);
    }
    let t = t.trim_relative(TANGENCY_REL);
    let mut tangencies = Vec::new();
    if t.degree() > Degree::Finite(0) {
        for r in roots(&t, DEFAULT_CLUSTER_TOL).expect("nonzero polynomial") {
            let z = r.value;
            tangencies.push(Tangency {
                point: Some((line.base.0 + a * z, line.base.1 + b * z)),
                order: r.multiplicity,
            });
        }
    }
    let at_infinity = order_at_infinity(f, line);
    if at_infinity > 0 {
        tangencies.push(Tangency {
            point: None,
            order: at_infinity,
        });
    }
    let total = tangencies.iter().map(|t| t.order).sum();
    Ok(TangencyCount { tangencies, total })
}

fn order_at_infinity(f: &Foliation, line: &Line) -> usize {
    let ((x0, y0), (a, b)) = (line.base, line.dir);
    let c = a * y0 - b * x0;
    let one = Complex64::new(1.0, 0.0);
    let (chart, tangency) = if a.norm() >= b.norm() {
        // (u, v) = (t, (b + c t)/a), direction (1, c/a).
        (Chart::U1, [(c / a, b / a), (c, -a)])
    } else {
        // (r, s) = (t, (a − c t)/b), direction (1, −c/b).
        (Chart::U2, [(-c / b, a / b), (-c, -b)])
    };
    let cf = f.chart_form(chart);
    let [(slope, offset), (wa, wb)] = tangency;
    let base = (Complex64::zero(), offset);
    let dir = (one, slope);
    let g: Poly1 = &cf.a.restrict_to_line(base, dir).scale(wa) + &cf.b.restrict_to_line(base, dir).scale(wb);
    if g.is_zero() {
        return 0;
    }
    g.order_at_zero(TANGENCY_REL)
}
