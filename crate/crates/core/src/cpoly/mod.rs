//! Complex polynomial arithmetic in one and two variables, root finding
//! and resultant-based elimination.

mod poly1;
mod poly2;
pub mod resultant;
pub mod roots;

use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::Zero;
use thiserror::Error;

pub use poly1::Poly1;
pub use poly2::{AffineMap, Poly2};
pub use resultant::{common_zeros, gcd_check, newton2};
pub use roots::{roots, simple_roots, Root, DEFAULT_CLUSTER_TOL};

use crate::scalar::{modulus, Real};

/// Default relative coefficient tolerance for zero tests in division.
pub const COEFF_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum CpolyError {
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("coefficient is not finite")]
    NonFinite,
    #[error("resultant vanishes identically in both variables")]
    ResultantDegenerate,
}

/// Polynomial degree; the zero polynomial has degree minus infinity, which
/// compares below every finite degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    MinusInfinity,
    Finite(u32),
}

impl Degree {
    pub fn finite(self) -> Option<u32> {
        match self {
            Degree::Finite(d) => Some(d),
            Degree::MinusInfinity => None,
        }
    }
}

impl std::fmt::Display for Degree {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Degree::MinusInfinity => f.write_str("-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// Graded order key: total degree first, then the power of `x`.
fn graded_key(e: (u32, u32)) -> (u32, u32) {
    (e.0 + e.1, e.0)
}

/// Multivariate division of `num` by `den` under the graded order.
///
/// Returns `(quotient, exact)`; `exact` is true when the remainder is zero
/// up to `rel` times the coefficient scale of the computation.
///
/// # Panics
///
/// If `den` is the zero polynomial.
pub fn poly_divide<T: Real>(num: &Poly2<T>, den: &Poly2<T>, rel: T) -> (Poly2<T>, bool) {
    assert!(!den.is_zero(), "division by the zero polynomial");
    let (lead_e, lead_c) = den
        .terms()
        .max_by_key(|&(e, _)| graded_key(e))
        .expect("nonzero divisor");
    let mut rem: BTreeMap<(u32, u32), Complex<T>> = num.terms().map(|(e, c)| (graded_key(e), c)).collect();
    let den_terms: Vec<((u32, u32), Complex<T>)> = den.terms().collect();
    let den_scale = den.max_abs_coeff();
    let mut scale = num.max_abs_coeff();
    let mut quotient = Poly2::zero();
    let mut leftover = false;
    while let Some((&key, &c)) = rem.iter().next_back() {
        rem.remove(&key);
        if modulus(c) <= rel * scale {
            continue;
        }
        let (i, j) = (key.1, key.0 - key.1);
        if i < lead_e.0 || j < lead_e.1 {
            leftover = true;
            continue;
        }
        let (qi, qj) = (i - lead_e.0, j - lead_e.1);
        let qc = c / lead_c;
        scale = scale.max(modulus(qc) * den_scale);
        quotient.add_term(qi, qj, qc);
        for &((a, b), d) in &den_terms {
            if (a, b) == lead_e {
                continue;
            }
            let k = graded_key((a + qi, b + qj));
            let e = rem.entry(k).or_insert_with(Complex::zero);
            *e = *e - qc * d;
        }
    }
    (quotient, !leftover)
}
