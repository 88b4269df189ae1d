use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{nonreal, Decision, SingularError};
use crate::cpoly::{common_zeros, newton2, CpolyError};
use crate::foliation::Foliation;

/// Region `{Re, Im of x and y all in [lo, hi]}` searched for singularities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchBox {
    pub lo: f64,
    pub hi: f64,
}

impl Default for SearchBox {
    fn default() -> Self {
        Self { lo: -10.0, hi: 10.0 }
    }
}

impl SearchBox {
    pub fn contains(&self, z: Complex64) -> bool {
        let inside = |t: f64| t >= self.lo && t <= self.hi;
        inside(z.re) && inside(z.im)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AffineClass {
    Degenerate,
    NondegenerateNonhyperbolic,
    Hyperbolic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineSingularity {
    pub location: (Complex64, Complex64),
    /// Jacobian of `(P, Q)`, rows `(P_x, P_y)` and `(Q_x, Q_y)`.
    pub jacobian: [[Complex64; 2]; 2],
    pub eigenvalues: (Complex64, Complex64),
    pub classification: AffineClass,
    /// Whether `σ₁/σ₂ ∉ ℝ`; borderline cases are classified as not hyperbolic.
    pub ratio_nonreal: Decision,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AffineSearch {
    pub singularities: Vec<AffineSingularity>,
    /// `deg P · deg Q`, an upper bound for the number of isolated
    /// singularities in the whole affine plane.
    pub bezout_bound: u32,
}

/// Common zeros of `P` and `Q` in `search_box`.
///
/// Zeros come from resultant elimination followed by Newton polishing.
/// `grid` additionally seeds Newton's method from a `grid × grid` lattice of
/// real points in the box, which recovers zeros the elimination may lose
/// to ill-conditioning; pass 0 to disable.
pub fn affine_singularities(
    f: &Foliation,
    search_box: SearchBox,
    grid: usize,
) -> Result<AffineSearch, SingularError> {
    let (p, q) = (f.p(), f.q());
    let deg = |d: crate::cpoly::Degree| d.finite().unwrap_or(0);
    let bezout_bound = deg(p.degree()) * deg(q.degree());
    let mut points = match common_zeros(p, q, 1e-8) {
        Ok(z) => z,
        Err(CpolyError::ResultantDegenerate) => return Err(SingularError::ResultantDegenerate),
        Err(e) => return Err(e.into()),
    };
    if grid > 0 {
        let step = (search_box.hi - search_box.lo) / grid.max(2).saturating_sub(1) as f64;
        for a in 0..grid {
            for b in 0..grid {
                let x0 = Complex64::new(search_box.lo + a as f64 * step, 1e-3);
                let y0 = Complex64::new(search_box.lo + b as f64 * step, -1e-3);
                let (x, y) = newton2(p, q, x0, y0);
                if crate::cpoly::resultant::residual_ok(p, q, x, y, f.coeff_scale(), 1e-10) {
                    points.push((x, y));
                }
            }
        }
    }
    let mut singularities: Vec<AffineSingularity> = Vec::new();
    for (x, y) in points {
        if !(search_box.contains(x) && search_box.contains(y)) {
            continue;
        }
        let dup = singularities.iter().any(|s| {
            let (u, v) = s.location;
            (u - x).norm() + (v - y).norm() < 1e-7 * (1.0 + x.norm() + y.norm())
        });
        if !dup {
            singularities.push(classify(f, x, y));
        }
    }
    singularities.sort_by(|a, b| {
        let key = |s: &AffineSingularity| (s.location.0.re, s.location.0.im, s.location.1.re, s.location.1.im);
        key(a).partial_cmp(&key(b)).unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(AffineSearch {
        singularities,
        bezout_bound,
    })
}

/// Eigenvalues of a 2×2 complex matrix by the quadratic formula, ordered so
/// the one of larger modulus comes first.
pub fn eigenvalues_2x2(m: [[Complex64; 2]; 2]) -> (Complex64, Complex64) {
    let half_tr = (m[0][0] + m[1][1]) / 2.0;
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = (half_tr * half_tr - det).sqrt();
    // Avoid cancellation: compute the larger root first.
    let big = if (half_tr + disc).norm() >= (half_tr - disc).norm() {
        half_tr + disc
    } else {
        half_tr - disc
    };
    let small = if big.norm() == 0.0 { big } else { det / big };
    (big, small)
}

pub(super) fn classify(f: &Foliation, x: Complex64, y: Complex64) -> AffineSingularity {
    let (p, q) = (f.p(), f.q());
    let jacobian = [
        [p.derivative_x().eval(x, y), p.derivative_y().eval(x, y)],
        [q.derivative_x().eval(x, y), q.derivative_y().eval(x, y)],
    ];
    let (s1, s2) = eigenvalues_2x2(jacobian);
    let jnorm = jacobian.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max);
    let degenerate = jnorm == 0.0 || (s1 * s2).norm() <= 1e-10 * jnorm * jnorm;
    let ratio_nonreal = if degenerate { Decision::No } else { nonreal(s1 / s2) };
    let classification = if degenerate {
        AffineClass::Degenerate
    } else if ratio_nonreal == Decision::Yes {
        AffineClass::Hyperbolic
    } else {
        AffineClass::NondegenerateNonhyperbolic
    };
    AffineSingularity {
        location: (x, y),
        jacobian,
        eigenvalues: (s1, s2),
        classification,
        ratio_nonreal,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Poly2;

    #[test]
    fn radial_and_saddle() {
        let f1 = Foliation::new(Poly2::x(), Poly2::y()).unwrap();
        let s = affine_singularities(&f1, SearchBox::default(), 0).unwrap();
        assert_eq!(s.singularities.len(), 1);
        let only = s.singularities[0];
        assert_eq!(only.eigenvalues, (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)));
        assert_eq!(only.classification, AffineClass::NondegenerateNonhyperbolic);

        let f2 = Foliation::new(Poly2::y(), Poly2::x()).unwrap();
        let s = affine_singularities(&f2, SearchBox::default(), 0).unwrap().singularities;
        assert_eq!(s.len(), 1);
        let (a, b) = s[0].eigenvalues;
        assert!(((a * b) + 1.0).norm() < 1e-14 && (a + b).norm() < 1e-14);
        assert_eq!(s[0].classification, AffineClass::NondegenerateNonhyperbolic);
    }

    #[test]
    fn diagonal_hyperbolic() {
        let q = Poly2::from_real_parts(&[(0, 1, 0.0, 1.0)]).unwrap();
        let f = Foliation::new(Poly2::x(), q).unwrap();
        let s = affine_singularities(&f, SearchBox::default(), 0).unwrap().singularities;
        assert_eq!(s[0].classification, AffineClass::Hyperbolic);
    }

    #[test]
    fn quadratic_field_singularities() {
        // P = x^2 - 1, Q = y^2 - 4: four singularities (±1, ±2).
        let p = Poly2::from_real_parts(&[(2, 0, 1.0, 0.0), (0, 0, -1.0, 0.0)]).unwrap();
        let q = Poly2::from_real_parts(&[(0, 2, 1.0, 0.0), (0, 0, -4.0, 0.0)]).unwrap();
        let f = Foliation::new(p, q).unwrap();
        let s = affine_singularities(&f, SearchBox::default(), 4).unwrap();
        assert_eq!(s.bezout_bound, 4);
        assert_eq!(s.singularities.len(), 4);
        let small = SearchBox { lo: -1.5, hi: 1.5 };
        assert_eq!(affine_singularities(&f, small, 0).unwrap().singularities.len(), 0);
    }
}
