use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Foliation, FoliationError, ZERO_REL};
use crate::cpoly::{common_zeros, poly_divide, roots, Degree, DEFAULT_CLUSTER_TOL};
use crate::{Poly1, Poly2};

/// Relative tolerance used when dividing `K_x P + K_y Q` by `K`.
const DIVISION_REL: f64 = crate::cpoly::COEFF_TOL;

/// Checks whether `{K = 0}` is invariant: `K_x P + K_y Q = K K̃` with
/// `deg K̃ ≤ n − 1`. Returns the cofactor `K̃` when it is.
pub fn is_algebraic_leaf(f: &Foliation, k: &Poly2) -> Result<Option<Poly2>, FoliationError> {
    if k.is_constant() || k.is_zero() {
        return Err(FoliationError::ConstantK);
    }
    let d = &(&k.derivative_x() * f.p()) + &(&k.derivative_y() * f.q());
    let (cofactor, exact) = poly_divide(&d, k, DIVISION_REL);
    let bound = Degree::Finite(f.affine_degree().saturating_sub(1));
    if exact && cofactor.degree() <= bound {
        Ok(Some(cofactor))
    } else {
        Ok(None)
    }
}

/// Centre of a pencil of invariant lines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Pencil {
    /// All lines through an affine point.
    Point(Complex64, Complex64),
    /// All lines with direction `(a, b)`.
    Direction(Complex64, Complex64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantLines {
    /// Invariant lines `αx + βy + γ`, normalised to `α = 1`, or to `β = 1`
    /// for horizontal lines. For a pencil these are representatives only.
    pub lines: Vec<Poly2>,
    pub pencil: Option<Pencil>,
}

/// All invariant affine lines of `f`.
///
/// Non-vertical lines `y = m x + s` are invariant iff every coefficient
/// `c_k(s, m)` of `x ↦ Q(x, mx + s) − m P(x, mx + s)` vanishes. Common
/// zeros are found by eliminating between two random combinations of the
/// `c_k`, and every candidate is then verified with [`is_algebraic_leaf`].
/// Vertical lines `x = s` are handled by the common roots of the
/// `y`-coefficients of `P(s, y)`.
pub fn invariant_lines(f: &Foliation) -> InvariantLines {
    if f.geometric_degree() == 0 {
        return pencil_lines(f);
    }
    let mut candidates = Vec::new();
    let cks = slope_coefficients(f);
    let mut rng = ChaCha8Rng::seed_from_u64(0x1ee7);
    for _attempt in 0..4 {
        let combo = |rng: &mut ChaCha8Rng| {
            cks.iter().fold(Poly2::zero(), |acc, ck| {
                let w = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                &acc + &ck.scale(w)
            })
        };
        let e1 = combo(&mut rng);
        let e2 = combo(&mut rng);
        if let Ok(zs) = common_zeros(&e1, &e2, 1e-8) {
            for (s, m) in zs {
                candidates.push(line(-m, Complex64::one(), -s));
            }
            break;
        }
    }
    for s in vertical_offsets(f) {
        candidates.push(line(Complex64::one(), Complex64::zero(), -s));
    }
    InvariantLines {
        lines: verified(f, candidates),
        pencil: None,
    }
}

fn line(a: Complex64, b: Complex64, c: Complex64) -> Poly2 {
    let mut terms = Vec::with_capacity(3);
    for (e, v) in [((1, 0), a), ((0, 1), b), ((0, 0), c)] {
        if !v.is_zero() {
            terms.push((e.0, e.1, v));
        }
    }
    Poly2::from_terms(terms).expect("finite line coefficients")
}

fn normalise(k: &Poly2) -> Poly2 {
    let (a, b) = (k.coeff(1, 0), k.coeff(0, 1));
    let lead = if a.norm() > 1e-10 * b.norm() { a } else { b };
    k.scale(lead.inv()).prune(1e-13)
}

fn verified(f: &Foliation, candidates: Vec<Poly2>) -> Vec<Poly2> {
    let mut out: Vec<Poly2> = Vec::new();
    for k in candidates {
        let k = normalise(&k);
        if out.iter().any(|l| same_line(l, &k)) {
            continue;
        }
        if matches!(is_algebraic_leaf(f, &k), Ok(Some(_))) {
            out.push(k);
        }
    }
    out
}

/// Projective equality of two linear forms.
fn same_line(a: &Poly2, b: &Poly2) -> bool {
    let ea = [(1, 0), (0, 1), (0, 0)].map(|(i, j)| a.coeff(i, j));
    let eb = [(1, 0), (0, 1), (0, 0)].map(|(i, j)| b.coeff(i, j));
    let scale = ea.iter().map(|c| c.norm()).fold(0.0, f64::max) * eb.iter().map(|c| c.norm()).fold(0.0, f64::max);
    (0..3).all(|p| ((p + 1)..3).all(|q| (ea[p] * eb[q] - ea[q] * eb[p]).norm() <= 1e-8 * scale))
}

/// Coefficients `c_k(s, m)` as polynomials in `(s, m)` (first variable `s`).
fn slope_coefficients(f: &Foliation) -> Vec<Poly2> {
    let n = f.affine_degree() as usize;
    let mut cks = vec![Poly2::zero(); n + 2];
    // x^i (m x + s)^j = Σ_l C(j,l) m^l s^(j-l) x^(i+l)
    let mut expand = |p: &Poly2, extra_m: u32, sign: f64| {
        for ((i, j), c) in p.terms() {
            let mut binom = 1.0;
            for l in 0..=j {
                if l > 0 {
                    binom = binom * (j - l + 1) as f64 / l as f64;
                }
                let k = (i + l) as usize;
                let term = Poly2::monomial(j - l, l + extra_m, c * (sign * binom));
                cks[k] = &cks[k] + &term;
            }
        }
    };
    expand(f.q(), 0, 1.0);
    expand(f.p(), 1, -1.0);
    cks.retain(|c| !c.is_zero());
    cks
}

/// Offsets `s` with `P(s, y) ≡ 0`.
fn vertical_offsets(f: &Foliation) -> Vec<Complex64> {
    let dy = f.p().degree_y().finite().unwrap_or(0);
    let coeffs: Vec<Poly1> = (0..=dy)
        .map(|j| {
            let row: Vec<Complex64> = (0..=f.affine_degree()).map(|i| f.p().coeff(i, j)).collect();
            Poly1::new(row).expect("finite").trim_relative(ZERO_REL)
        })
        .filter(|c| !c.is_zero())
        .collect();
    let Some(pivot) = coeffs.iter().min_by_key(|c| c.degree()) else {
        return Vec::new();
    };
    if pivot.degree() == Degree::Finite(0) {
        return Vec::new();
    }
    roots(pivot, DEFAULT_CLUSTER_TOL)
        .map(|rs| rs.into_iter().map(|r| r.value).collect())
        .unwrap_or_default()
}

/// Geometric degree zero: the field is `(f0 + h x, g0 + h y)` with `h`
/// constant, or constant. Every line through the centre is invariant.
fn pencil_lines(f: &Foliation) -> InvariantLines {
    let h = f.p().coeff(1, 0);
    let (f0, g0) = (f.p().coeff(0, 0), f.q().coeff(0, 0));
    let one = Complex64::one();
    let zero = Complex64::zero();
    if f.affine_degree() == 0 || h.norm() <= ZERO_REL * f.coeff_scale() {
        // Constant field (f0, g0): lines g0 x − f0 y + c.
        let reps = [line(g0, -f0, zero), line(g0, -f0, one)];
        return InvariantLines {
            lines: reps.iter().map(normalise).collect(),
            pencil: Some(Pencil::Direction(f0, g0)),
        };
    }
    let (cx, cy) = (-f0 / h, -g0 / h);
    let reps = [line(one, zero, -cx), line(zero, one, -cy), line(one, -one, cy - cx)];
    InvariantLines {
        lines: reps.iter().map(normalise).collect(),
        pencil: Some(Pencil::Point(cx, cy)),
    }
}
