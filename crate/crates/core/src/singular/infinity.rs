use std::f64::consts::TAU;

use num_complex::Complex64;
use num_traits::Zero;

use super::{nonreal, Decision, SingularError};
use crate::cpoly::{roots, Degree, DEFAULT_CLUSTER_TOL};
use crate::foliation::{Foliation, ZERO_REL};
use crate::{Poly1, Poly2};

/// The chart data at infinity: `X₁ = u P̃ ∂u + R̃ ∂v` in `(u, v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct InfinityCharts {
    pub p_tilde: Poly2,
    pub r_tilde: Poly2,
}

impl InfinityCharts {
    /// `v ↦ R̃(0, v)`.
    pub fn r0(&self) -> Poly1 {
        self.r_tilde.specialize_x(Complex64::zero())
    }

    /// `v ↦ P̃(0, v)`.
    pub fn p0(&self) -> Poly1 {
        self.p_tilde.specialize_x(Complex64::zero())
    }
}

/// `u P̃(u, v) = u^(n+1) P(1/u, v/u)` and `R̃(u, v) = u^(n+1) R(1/u, v/u)`.
pub fn infinity_charts(f: &Foliation) -> InfinityCharts {
    let n = f.affine_degree();
    InfinityCharts {
        p_tilde: f.p().map_exponents(|i, j| (n - i - j, j)),
        r_tilde: f.r().map_exponents(|i, j| (n + 1 - i - j, j)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfinitySingularity {
    /// The point is `(u, v) = (0, a)`.
    pub a: Complex64,
    /// `P̃(0, a)`.
    pub eigen_top: Complex64,
    /// `R̃_v(0, a)`.
    pub eigen_bottom: Complex64,
    /// Characteristic number `P̃(0, a) / R̃_v(0, a)`.
    pub lambda: Complex64,
    /// `exp(2πiλ)`.
    pub multiplier: Complex64,
    /// Whether `|ν| ≠ 1`, i.e. `λ ∉ ℝ`.
    pub hyperbolic: Decision,
}

/// Singular points on the line at infinity inside the chart `U1`.
///
/// A point at `v = ∞` (the origin of `U2`) is not represented; it occurs
/// exactly when `R̃(0, v)` has degree below `n + 1`.
pub fn infinity_singularities(f: &Foliation) -> Result<Vec<InfinitySingularity>, SingularError> {
    if !f.infinity_is_leaf() {
        return Err(SingularError::InfinityNotLeaf);
    }
    let ch = infinity_charts(f);
    let r0 = ch.r0().trim_relative(ZERO_REL);
    let p0 = ch.p0();
    let dr0 = r0.derivative();
    if r0.degree() <= Degree::Finite(0) {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for root in roots(&r0, DEFAULT_CLUSTER_TOL)? {
        if root.multiplicity > 1 {
            return Err(SingularError::NonSimpleRoot(root.value));
        }
        let a = root.value;
        let eigen_top = p0.eval(a);
        let eigen_bottom = dr0.eval(a);
        let lambda = eigen_top / eigen_bottom;
        out.push(InfinitySingularity {
            a,
            eigen_top,
            eigen_bottom,
            lambda,
            multiplier: (Complex64::i() * TAU * lambda).exp(),
            hyperbolic: nonreal(lambda),
        });
    }
    Ok(out)
}

/// `|Σ λⱼ − 1|` over the `n + 1` points at infinity.
pub fn residue_identity_defect(f: &Foliation) -> Result<f64, SingularError> {
    if !f.pl_property() {
        return Err(SingularError::NotPl);
    }
    let sum: Complex64 = infinity_singularities(f)?.iter().map(|s| s.lambda).sum();
    Ok((sum - 1.0).norm())
}
