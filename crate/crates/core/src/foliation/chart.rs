use serde::{Deserialize, Serialize};

use super::Foliation;
use crate::Poly2;

/// The three standard affine charts of the projective plane.
///
/// `U0` has coordinates `(x, y)`, `U1` has `(u, v) = (1/x, y/x)` and `U2`
/// has `(r, s) = (1/y, x/y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Chart {
    U0,
    U1,
    U2,
}

/// The foliation in one chart as `A dv − B du = 0`, so that leaves have
/// direction `(du, dv) ∝ (A, B)`. In every chart the first polynomial
/// variable is the first chart coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartForm {
    pub chart: Chart,
    pub a: Poly2,
    pub b: Poly2,
}

impl ChartForm {
    /// Direction of the leaf through `(u, v)`.
    pub fn direction(&self, u: crate::C64, v: crate::C64) -> (crate::C64, crate::C64) {
        (self.a.eval(u, v), self.b.eval(u, v))
    }
}

impl Foliation {
    /// The foliation written in `chart`, with any common factor `u^m` of
    /// the two coefficients removed.
    pub fn chart_form(&self, chart: Chart) -> ChartForm {
        let k = self.affine_degree + 1;
        let (a, b) = match chart {
            Chart::U0 => (self.p.clone(), self.q.clone()),
            // x^i y^j ↦ u^(k-i-j) v^j
            Chart::U1 => (
                self.p.map_exponents(|i, j| (k - i - j, j)),
                self.r.map_exponents(|i, j| (k - i - j, j)),
            ),
            // x^i y^j ↦ r^(k-i-j) s^i; the field is (−Q, R) in (r, s).
            Chart::U2 => (
                -self.q.map_exponents(|i, j| (k - i - j, i)),
                self.r.map_exponents(|i, j| (k - i - j, i)),
            ),
        };
        let m = match (a.x_order(), b.x_order()) {
            (Some(p), Some(q)) => p.min(q),
            (Some(p), None) => p,
            (None, Some(q)) => q,
            (None, None) => 0,
        };
        ChartForm {
            chart,
            a: a.div_x_power(m),
            b: b.div_x_power(m),
        }
    }
}
