use num_complex::Complex;
use num_traits::{One, Zero};

use super::GermError;
use crate::scalar::{is_finite, modulus, Real};

/// Default truncation order.
pub const DEFAULT_ORDER: usize = 16;

/// Truncated power series `c₁ z + c₂ z² + … + c_N z^N` of a germ fixing 0.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet<T: Real> {
    /// `coeffs[k - 1] = c_k`.
    coeffs: Vec<Complex<T>>,
}

/// Product of two series with zero constant term allowed, truncated to
/// `len` coefficients (index = power).
pub(crate) fn series_mul<T: Real>(a: &[Complex<T>], b: &[Complex<T>], len: usize) -> Vec<Complex<T>> {
    let mut out = vec![Complex::zero(); len];
    for (i, &x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(len - i) {
            out[i + j] = out[i + j] + x * y;
        }
    }
    out
}

impl<T: Real> Jet<T> {
    /// Builds a jet from `c₁, …, c_N`.
    pub fn new(coeffs: Vec<Complex<T>>) -> Result<Self, GermError> {
        if coeffs.iter().any(|&c| !is_finite(c)) {
            return Err(GermError::NonFinite);
        }
        match coeffs.first() {
            None => Err(GermError::EmptyJet),
            Some(c) if c.is_zero() => Err(GermError::NotInvertible),
            Some(_) => Ok(Self { coeffs }),
        }
    }

    pub fn identity(order: usize) -> Self {
        Self::linear(Complex::one(), order)
    }

    /// `ν z` to the given order.
    pub fn linear(nu: Complex<T>, order: usize) -> Self {
        let mut coeffs = vec![Complex::zero(); order.max(1)];
        coeffs[0] = nu;
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// `c_k` for `k ≥ 1`; zero beyond the order.
    pub fn coeff(&self, k: usize) -> Complex<T> {
        if k == 0 {
            return Complex::zero();
        }
        self.coeffs.get(k - 1).copied().unwrap_or_else(Complex::zero)
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    /// `f'(0)`.
    pub fn multiplier(&self) -> Complex<T> {
        self.coeffs[0]
    }

    /// `||c₁| − 1| > tol`.
    pub fn is_hyperbolic(&self, tol: T) -> bool {
        (modulus(self.multiplier()) - T::one()).abs() > tol
    }

    /// Truncates or zero-extends to `order`.
    pub fn with_order(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order.max(1), Complex::zero());
        Self { coeffs }
    }

    /// Evaluates the truncated polynomial.
    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        self.coeffs.iter().rev().fold(Complex::<T>::zero(), |acc: Complex<T>, &c| acc * z + c) * z
    }

    /// Series with index = power (constant term zero), length `order + 1`.
    pub(crate) fn series(&self) -> Vec<Complex<T>> {
        let mut s = Vec::with_capacity(self.coeffs.len() + 1);
        s.push(Complex::zero());
        s.extend_from_slice(&self.coeffs);
        s
    }

    pub(crate) fn from_series(s: &[Complex<T>], order: usize) -> Self {
        let mut coeffs: Vec<Complex<T>> = s.iter().skip(1).take(order).copied().collect();
        coeffs.resize(order, Complex::zero());
        Self { coeffs }
    }

    /// `self ∘ g`, truncated to the smaller of the two orders.
    pub fn compose(&self, g: &Jet<T>) -> Jet<T> {
        let order = self.order().min(g.order());
        let len = order + 1;
        let gs = g.series();
        // Horner in the series ring: ((c_N g + c_{N-1}) g + …) g.
        let mut acc = vec![Complex::zero(); len];
        for k in (1..=order).rev() {
            acc = series_mul(&acc, &gs, len);
            acc[0] = acc[0] + self.coeff(k);
        }
        acc = series_mul(&acc, &gs, len);
        Jet::from_series(&acc, order)
    }

    /// Compositional inverse through the same order.
    pub fn invert(&self) -> Jet<T> {
        let order = self.order();
        let c1 = self.multiplier();
        let mut h = Jet::linear(c1.inv(), order);
        // Fix one coefficient of h per pass: f(h(z)) = z + e_k z^k + …
        for k in 2..=order {
            let e = self.compose(&h).coeff(k);
            h.coeffs[k - 1] = h.coeffs[k - 1] - e / c1;
        }
        h
    }

    /// The jet `h` with `self ∘ h = g`, solved order by order.
    ///
    /// Agrees with `self.invert().compose(g)` in exact arithmetic but never
    /// forms the inverse, whose coefficients can be far larger than those
    /// of the result.
    pub fn solve_left(&self, g: &Jet<T>) -> Jet<T> {
        let order = self.order().min(g.order());
        let c1 = self.multiplier();
        let mut h = Jet {
            coeffs: vec![Complex::zero(); order],
        };
        h.coeffs[0] = g.multiplier() / c1;
        for k in 2..=order {
            let e = self.compose(&h).coeff(k);
            h.coeffs[k - 1] = (g.coeff(k) - e) / c1;
        }
        h
    }

    /// The jet `h` with `h ∘ self = g`, solved order by order from the
    /// powers of `self`.
    pub fn solve_right(&self, g: &Jet<T>) -> Jet<T> {
        let order = self.order().min(g.order());
        let pows = self.with_order(order).powers(order);
        let mut h = vec![Complex::zero(); order + 1];
        for k in 1..=order {
            let mut rhs = g.coeff(k);
            for m in 1..k {
                rhs = rhs - h[m] * pows[m][k];
            }
            h[k] = rhs / pows[k][k];
        }
        Jet::from_series(&h, order)
    }

    /// `zeta ∘ self ∘ zeta⁻¹`, without forming `zeta⁻¹`.
    pub fn conjugate_by(&self, zeta: &Jet<T>) -> Jet<T> {
        zeta.solve_right(&zeta.compose(self))
    }

    /// Series of `self^m` (ordinary power), index = power, length `order + 1`.
    pub(crate) fn powers(&self, max_m: usize) -> Vec<Vec<Complex<T>>> {
        let len = self.order() + 1;
        let s = self.series();
        let mut one = vec![Complex::zero(); len];
        one[0] = Complex::one();
        let mut out = vec![one];
        for m in 1..=max_m {
            let next = series_mul(&out[m - 1], &s, len);
            out.push(next);
        }
        out
    }

    /// Largest coefficient difference `max_k |a_k − b_k|`.
    pub fn max_abs_diff(&self, other: &Jet<T>) -> T {
        let n = self.order().max(other.order());
        (1..=n)
            .map(|k| modulus(self.coeff(k) - other.coeff(k)))
            .fold(T::zero(), T::max)
    }

    /// `M(ρ) = Σ_{k≥2} |c_k| ρ^(k−2)`, so `|f(z) − c₁z| ≤ M |z|²` on `|z| ≤ ρ`.
    pub fn quadratic_bound(&self, rho: T) -> T {
        self.coeffs
            .iter()
            .skip(1)
            .rev()
            .fold(T::zero(), |acc, &c| acc * rho + modulus(c))
    }
}
