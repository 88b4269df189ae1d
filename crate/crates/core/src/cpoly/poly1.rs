use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use super::{CpolyError, Degree};
use crate::scalar::{is_finite, modulus, Real};

/// Dense univariate complex polynomial, lowest degree first.
///
/// Trailing (highest-degree) exact zeros are never stored, so the last
/// coefficient is nonzero unless the polynomial is zero.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Poly1<T: Real> {
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> Poly1<T> {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex<T>) -> Self {
        Self::from_coeffs_unchecked(vec![c])
    }

    /// The monomial `t`.
    pub fn t() -> Self {
        Self::from_coeffs_unchecked(vec![Complex::zero(), Complex::one()])
    }

    pub fn new(coeffs: Vec<Complex<T>>) -> Result<Self, CpolyError> {
        if coeffs.iter().any(|c| !is_finite(*c)) {
            return Err(CpolyError::NonFinite);
        }
        Ok(Self::from_coeffs_unchecked(coeffs))
    }

    /// Builds `lead * Π (t - r)` from its roots.
    pub fn from_roots(lead: Complex<T>, roots: &[Complex<T>]) -> Self {
        let mut p = Self::constant(lead);
        for &r in roots {
            p = &p * &Self::from_coeffs_unchecked(vec![-r, Complex::one()]);
        }
        p
    }

    pub(crate) fn from_coeffs_unchecked(mut coeffs: Vec<Complex<T>>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex<T> {
        self.coeffs.get(k).copied().unwrap_or_else(Complex::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::MinusInfinity,
            n => Degree::Finite((n - 1) as u32),
        }
    }

    pub fn leading(&self) -> Complex<T> {
        self.coeffs.last().copied().unwrap_or_else(Complex::zero)
    }

    pub fn eval(&self, t: Complex<T>) -> Complex<T> {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::zero(), |acc, &c| acc * t + c)
    }

    /// Value and first derivative by Horner.
    pub fn eval_with_derivative(&self, t: Complex<T>) -> (Complex<T>, Complex<T>) {
        let mut p = Complex::zero();
        let mut dp = Complex::zero();
        for &c in self.coeffs.iter().rev() {
            dp = dp * t + p;
            p = p * t + c;
        }
        (p, dp)
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * T::from_usize_lossy(k))
            .collect();
        Self::from_coeffs_unchecked(coeffs)
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self::from_coeffs_unchecked(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn max_abs_coeff(&self) -> T {
        self.coeffs
            .iter()
            .map(|&c| modulus(c))
            .fold(T::zero(), T::max)
    }

    /// Drops leading coefficients whose modulus is at most `rel * max|c|`.
    pub fn trim_relative(&self, rel: T) -> Self {
        let bound = rel * self.max_abs_coeff();
        let mut coeffs = self.coeffs.clone();
        while coeffs.last().is_some_and(|&c| modulus(c) <= bound) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// True if every coefficient is at most `rel * reference` in modulus.
    pub fn is_negligible(&self, rel: T, reference: T) -> bool {
        self.coeffs.iter().all(|&c| modulus(c) <= rel * reference)
    }

    /// Coefficients of `h ↦ p(center + h)`.
    pub fn taylor_shift(&self, center: Complex<T>) -> Self {
        let mut a = self.coeffs.clone();
        let n = a.len();
        for i in 0..n {
            for k in (i..n.saturating_sub(1)).rev() {
                let next = a[k + 1];
                a[k] = a[k] + center * next;
            }
        }
        Self::from_coeffs_unchecked(a)
    }

    /// Number of vanishing low-order coefficients below `rel * max|c|`,
    /// i.e. the numerical order of vanishing at `t = 0`.
    pub fn order_at_zero(&self, rel: T) -> usize {
        let bound = rel * self.max_abs_coeff();
        self.coeffs
            .iter()
            .take_while(|&&c| modulus(c) <= bound)
            .count()
    }

    /// Truncates to terms of degree `< n`.
    pub fn truncate(&self, n: usize) -> Self {
        Self::from_coeffs_unchecked(self.coeffs.iter().take(n).copied().collect())
    }
}

impl<T: Real> Add for &Poly1<T> {
    type Output = Poly1<T>;
    fn add(self, rhs: &Poly1<T>) -> Poly1<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly1::from_coeffs_unchecked((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<T: Real> Sub for &Poly1<T> {
    type Output = Poly1<T>;
    fn sub(self, rhs: &Poly1<T>) -> Poly1<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly1::from_coeffs_unchecked((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<T: Real> Neg for &Poly1<T> {
    type Output = Poly1<T>;
    fn neg(self) -> Poly1<T> {
        Poly1::from_coeffs_unchecked(self.coeffs.iter().map(|&c| -c).collect())
    }
}

impl<T: Real> Mul for &Poly1<T> {
    type Output = Poly1<T>;
    fn mul(self, rhs: &Poly1<T>) -> Poly1<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly1::zero();
        }
        let mut out = vec![Complex::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j] + a * b;
            }
        }
        Poly1::from_coeffs_unchecked(out)
    }
}

impl<T: Real> Add for Poly1<T> {
    type Output = Poly1<T>;
    fn add(self, rhs: Poly1<T>) -> Poly1<T> {
        &self + &rhs
    }
}

impl<T: Real> Sub for Poly1<T> {
    type Output = Poly1<T>;
    fn sub(self, rhs: Poly1<T>) -> Poly1<T> {
        &self - &rhs
    }
}

impl<T: Real> Mul for Poly1<T> {
    type Output = Poly1<T>;
    fn mul(self, rhs: Poly1<T>) -> Poly1<T> {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn trailing_zeros_are_trimmed() {
        let p = Poly1::new(vec![c(1.0), c(2.0), c(0.0)]).unwrap();
        assert_eq!(p.degree(), Degree::Finite(1));
        assert_eq!(Poly1::<f64>::zero().degree(), Degree::MinusInfinity);
    }

    #[test]
    fn rejects_non_finite() {
        assert_eq!(
            Poly1::new(vec![Complex64::new(f64::NAN, 0.0)]),
            Err(CpolyError::NonFinite)
        );
    }

    #[test]
    fn taylor_shift_matches_evaluation() {
        let p = Poly1::new(vec![c(1.0), c(-3.0), c(0.5), c(2.0)]).unwrap();
        let center = Complex64::new(0.3, -1.1);
        let shifted = p.taylor_shift(center);
        let h = Complex64::new(-0.2, 0.7);
        assert!((shifted.eval(h) - p.eval(center + h)).norm() < 1e-12);
    }

    #[test]
    fn from_roots_vanishes_at_roots() {
        let roots = [c(1.0), c(2.0), Complex64::new(0.0, 1.0)];
        let p = Poly1::from_roots(c(2.0), &roots);
        for r in roots {
            assert!(p.eval(r).norm() < 1e-12);
        }
        assert_eq!(p.leading(), c(2.0));
    }
}
