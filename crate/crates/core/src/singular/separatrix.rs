use num_complex::Complex64;
use num_traits::{One, Zero};

use super::{AffineClass, AffineSingularity, SingularError};
use crate::cpoly::AffineMap;
use crate::foliation::Foliation;
use crate::{Poly1, Poly2};

/// Below this size a divisor `σ₂ − kσ₁` is treated as resonant.
const RESONANCE_TOL: f64 = 1e-12;

/// One local separatrix, written as the graph `η = Σ_{k≥2} c_k ξ^k` where
/// `ξ` runs along `direction` and `η` along the other eigenvector.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparatrixJet {
    pub base: AffineSingularity,
    pub direction: (Complex64, Complex64),
    pub transverse: (Complex64, Complex64),
    pub jet: Poly1,
    /// Largest residual coefficient through the jet order, relative to
    /// the scale of the transformed field.
    pub residual: f64,
}

/// Both separatrices of a hyperbolic singularity, to the given order.
pub fn separatrix_jets(
    f: &Foliation,
    s: &AffineSingularity,
    order: usize,
) -> Result<(SeparatrixJet, SeparatrixJet), SingularError> {
    if s.classification != AffineClass::Hyperbolic {
        return Err(SingularError::NotHyperbolic);
    }
    let (s1, s2) = s.eigenvalues;
    let e1 = eigenvector(s.jacobian, s1);
    let e2 = eigenvector(s.jacobian, s2);
    Ok((
        jet_along(f, s, e1, e2, s1, s2, order)?,
        jet_along(f, s, e2, e1, s2, s1, order)?,
    ))
}

fn eigenvector(m: [[Complex64; 2]; 2], sigma: Complex64) -> (Complex64, Complex64) {
    let a = (m[0][1], sigma - m[0][0]);
    let b = (sigma - m[1][1], m[1][0]);
    let na = a.0.norm() + a.1.norm();
    let nb = b.0.norm() + b.1.norm();
    let v = if na >= nb { a } else { b };
    let len = (v.0.norm_sqr() + v.1.norm_sqr()).sqrt();
    (v.0 / len, v.1 / len)
}

#[allow(clippy::too_many_arguments)]
fn jet_along(
    f: &Foliation,
    s: &AffineSingularity,
    e: (Complex64, Complex64),
    t: (Complex64, Complex64),
    sigma_along: Complex64,
    sigma_across: Complex64,
    order: usize,
) -> Result<SeparatrixJet, SingularError> {
    // (x, y) = p + ξ e + η t, and (ξ', η') = M⁻¹ (P, Q).
    let (px, py) = s.location;
    let map = AffineMap {
        x: [e.0, t.0, px],
        y: [e.1, t.1, py],
    };
    let pp = f.p().compose_affine(&map);
    let qq = f.q().compose_affine(&map);
    let det = e.0 * t.1 - t.0 * e.1;
    // M⁻¹ = [[t.1, −t.0], [−e.1, e.0]] / det
    let big_f = &pp.scale(t.1 / det) - &qq.scale(t.0 / det);
    let big_g = &qq.scale(e.0 / det) - &pp.scale(e.1 / det);
    let scale = big_f.max_abs_coeff().max(big_g.max_abs_coeff());

    let mut c = vec![Complex64::zero(); order + 1];
    for k in 2..=order {
        let r = residual(&big_f, &big_g, &c, k + 1)[k];
        let divisor = sigma_across - sigma_along * k as f64;
        if divisor.norm() <= RESONANCE_TOL * (sigma_along.norm() + sigma_across.norm()) {
            return Err(SingularError::ResonantDivisor(k));
        }
        c[k] = -r / divisor;
    }
    let res = residual(&big_f, &big_g, &c, order + 1);
    let worst = res.iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(SeparatrixJet {
        base: *s,
        direction: e,
        transverse: t,
        jet: Poly1::new(c).expect("finite coefficients"),
        residual: if scale > 0.0 { worst / scale } else { worst },
    })
}

/// Coefficients `0..len` of `G(ξ, φ(ξ)) − φ'(ξ) F(ξ, φ(ξ))`.
fn residual(big_f: &Poly2, big_g: &Poly2, c: &[Complex64], len: usize) -> Vec<Complex64> {
    let phi: Vec<Complex64> = (0..len).map(|k| c.get(k).copied().unwrap_or_default()).collect();
    let dphi: Vec<Complex64> = (0..len)
        .map(|k| phi.get(k + 1).map_or(Complex64::zero(), |&a| a * (k + 1) as f64))
        .collect();
    let f_on = substitute(big_f, &phi, len);
    let g_on = substitute(big_g, &phi, len);
    let prod = mul_trunc(&dphi, &f_on, len);
    (0..len).map(|k| g_on[k] - prod[k]).collect()
}

fn mul_trunc(a: &[Complex64], b: &[Complex64], len: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::zero(); len];
    for (i, &x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Truncated series of `ξ ↦ p(ξ, φ(ξ))`.
fn substitute(p: &Poly2, phi: &[Complex64], len: usize) -> Vec<Complex64> {
    let mut phi_pows = vec![{
        let mut one = vec![Complex64::zero(); len];
        one[0] = Complex64::one();
        one
    }];
    let mut out = vec![Complex64::zero(); len];
    for ((i, j), coeff) in p.terms() {
        while phi_pows.len() <= j as usize {
            let next = mul_trunc(phi_pows.last().unwrap(), phi, len);
            phi_pows.push(next);
        }
        let pw = &phi_pows[j as usize];
        for k in 0..len.saturating_sub(i as usize) {
            out[k + i as usize] += coeff * pw[k];
        }
    }
    out
}
