//! Foliations of the projective plane given by `ω = P dy − Q dx` in the
//! affine chart, with degree classification and the line at infinity.

mod chart;
mod darboux;
pub mod format;
pub mod sample;
mod tangency;

use num_complex::Complex64;
use num_traits::Zero;
use thiserror::Error;

use crate::cpoly::{gcd_check, simple_roots, Degree, DEFAULT_CLUSTER_TOL};
use crate::Poly2;

pub use chart::{Chart, ChartForm};
pub use darboux::{invariant_lines, is_algebraic_leaf, InvariantLines, Pencil};
pub use tangency::{tangency_count, Line, Tangency, TangencyCount};

/// Relative threshold for deciding that a derived coefficient vanishes.
pub const ZERO_REL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FoliationError {
    #[error("P and Q are both zero")]
    BothZero,
    #[error("P and Q share a nonconstant factor")]
    NotRelativelyPrime,
    #[error("the line is invariant (its tangency polynomial vanishes identically)")]
    LineIsLeaf,
    #[error("the line direction is zero")]
    DegenerateLine,
    #[error("candidate curve is constant")]
    ConstantK,
}

/// A foliation `P dy − Q dx` together with its cached classification.
#[derive(Debug, Clone, PartialEq)]
pub struct Foliation {
    name: Option<String>,
    p: Poly2,
    q: Poly2,
    r: Poly2,
    affine_degree: u32,
    geometric_degree: u32,
    infinity_is_leaf: bool,
    pl_property: bool,
}

impl Foliation {
    pub fn new(p: Poly2, q: Poly2) -> Result<Self, FoliationError> {
        if p.is_zero() && q.is_zero() {
            return Err(FoliationError::BothZero);
        }
        if !gcd_check(&p, &q) {
            return Err(FoliationError::NotRelativelyPrime);
        }
        let r = &(&Poly2::y() * &p) - &(&Poly2::x() * &q);
        let affine_degree = p.degree().max(q.degree()).finite().unwrap_or(0);
        let mut f = Self {
            name: None,
            p,
            q,
            r,
            affine_degree,
            geometric_degree: 0,
            infinity_is_leaf: false,
            pl_property: false,
        };
        f.infinity_is_leaf = f.compute_infinity_is_leaf();
        f.geometric_degree = if f.infinity_is_leaf {
            affine_degree
        } else {
            affine_degree.saturating_sub(1)
        };
        f.pl_property = f.compute_pl_property();
        Ok(f)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn p(&self) -> &Poly2 {
        &self.p
    }

    pub fn q(&self) -> &Poly2 {
        &self.q
    }

    /// `R = yP − xQ`.
    pub fn r(&self) -> &Poly2 {
        &self.r
    }

    pub fn affine_degree(&self) -> u32 {
        self.affine_degree
    }

    pub fn geometric_degree(&self) -> u32 {
        self.geometric_degree
    }

    pub fn infinity_is_leaf(&self) -> bool {
        self.infinity_is_leaf
    }

    pub fn pl_property(&self) -> bool {
        self.pl_property
    }

    /// Geometric degree at most one.
    pub fn is_global_vector_field(&self) -> bool {
        self.geometric_degree <= 1
    }

    /// Scale of the coefficients, used for relative zero tests.
    pub fn coeff_scale(&self) -> f64 {
        self.p.max_abs_coeff().max(self.q.max_abs_coeff())
    }

    /// `‖P‖₁ + ‖Q‖₁`.
    pub fn norm1(&self) -> f64 {
        self.p.norm1() + self.q.norm1()
    }

    /// The vector field `(P, Q)` at a point.
    pub fn field(&self, x: Complex64, y: Complex64) -> (Complex64, Complex64) {
        (self.p.eval(x, y), self.q.eval(x, y))
    }

    /// Projective dimensions of the parameter spaces containing this
    /// foliation: by geometric degree `d` (`d² + 4d + 2`) and by affine
    /// degree `n` (`n² + 3n + 1`). Reported as metadata only.
    pub fn moduli_dimensions(&self) -> (u32, u32) {
        let d = self.geometric_degree;
        let n = self.affine_degree;
        (d * d + 4 * d + 2, n * n + 3 * n + 1)
    }

    fn compute_infinity_is_leaf(&self) -> bool {
        let n = self.affine_degree;
        let top = self.r.homogeneous_part(n + 1);
        let tol = ZERO_REL * self.coeff_scale();
        let leaf = top.terms().any(|(_, c)| c.norm() > tol);
        leaf
    }

    fn compute_pl_property(&self) -> bool {
        if !self.infinity_is_leaf {
            return false;
        }
        let n = self.affine_degree as usize;
        let b0 = self.chart_form(Chart::U1).b.specialize_x(Complex64::zero());
        let b0 = b0.trim_relative(ZERO_REL);
        if b0.degree() != Degree::Finite(n as u32 + 1) {
            return false;
        }
        matches!(simple_roots(&b0, DEFAULT_CLUSTER_TOL), Ok(Some(rs)) if rs.len() == n + 1)
    }
}
