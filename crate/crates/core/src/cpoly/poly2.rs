use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use super::{CpolyError, Degree, Poly1};
use crate::scalar::{is_finite, modulus, Real};

/// Bivariate complex polynomial stored sparsely by exponent pair `(i, j)`
/// for the monomial `x^i y^j`.
///
/// Only nonzero coefficients are stored.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Poly2<T: Real> {
    terms: BTreeMap<(u32, u32), Complex<T>>,
}

/// Affine substitution `x ← a0 x + a1 y + a2`, `y ← b0 x + b1 y + b2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffineMap<T: Real> {
    pub x: [Complex<T>; 3],
    pub y: [Complex<T>; 3],
}

impl<T: Real> AffineMap<T> {
    pub fn identity() -> Self {
        let (o, z) = (Complex::one(), Complex::zero());
        Self {
            x: [o, z, z],
            y: [z, o, z],
        }
    }
}

impl<T: Real> Poly2<T> {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Complex<T>) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn x() -> Self {
        Self::monomial(1, 0, Complex::one())
    }

    pub fn y() -> Self {
        Self::monomial(0, 1, Complex::one())
    }

    pub fn monomial(i: u32, j: u32, c: Complex<T>) -> Self {
        let mut p = Self::zero();
        p.add_term(i, j, c);
        p
    }

    /// Builds a polynomial from `(i, j, coefficient)` triples; repeated
    /// exponents are summed.
    pub fn from_terms<I>(terms: I) -> Result<Self, CpolyError>
    where
        I: IntoIterator<Item = (u32, u32, Complex<T>)>,
    {
        let mut p = Self::zero();
        for (i, j, c) in terms {
            if !is_finite(c) {
                return Err(CpolyError::NonFinite);
            }
            p.add_term(i, j, c);
        }
        Ok(p)
    }

    /// Convenience constructor from real `(i, j, re, im)` tuples.
    pub fn from_real_parts(terms: &[(u32, u32, f64, f64)]) -> Result<Self, CpolyError> {
        Self::from_terms(
            terms
                .iter()
                .map(|&(i, j, re, im)| (i, j, Complex::new(T::lit(re), T::lit(im)))),
        )
    }

    pub(crate) fn add_term(&mut self, i: u32, j: u32, c: Complex<T>) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((i, j)).or_insert_with(Complex::zero);
        *entry = *entry + c;
        if entry.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    /// Iterates `((i, j), c)` in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), Complex<T>)> + '_ {
        self.terms.iter().map(|(&k, &c)| (k, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Complex<T> {
        self.terms.get(&(i, j)).copied().unwrap_or_else(Complex::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&(i, j)| i + j == 0)
    }

    pub fn degree(&self) -> Degree {
        self.terms
            .keys()
            .map(|&(i, j)| Degree::Finite(i + j))
            .max()
            .unwrap_or(Degree::MinusInfinity)
    }

    pub fn degree_x(&self) -> Degree {
        self.terms
            .keys()
            .map(|&(i, _)| Degree::Finite(i))
            .max()
            .unwrap_or(Degree::MinusInfinity)
    }

    pub fn degree_y(&self) -> Degree {
        self.terms
            .keys()
            .map(|&(_, j)| Degree::Finite(j))
            .max()
            .unwrap_or(Degree::MinusInfinity)
    }

    /// Largest power of `x` dividing every term (`None` for zero).
    pub fn x_order(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, _)| i).min()
    }

    pub fn max_abs_coeff(&self) -> T {
        self.terms
            .values()
            .map(|&c| modulus(c))
            .fold(T::zero(), T::max)
    }

    pub fn norm1(&self) -> T {
        self.terms
            .values()
            .map(|&c| modulus(c))
            .fold(T::zero(), |a, b| a + b)
    }

    /// Removes coefficients with modulus `<= threshold`.
    pub fn prune(&self, threshold: T) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(_, &c)| modulus(c) > threshold)
                .map(|(&k, &c)| (k, c))
                .collect(),
        }
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        let mut out = Self::zero();
        for (&(i, j), &c) in &self.terms {
            out.add_term(i, j, c * s);
        }
        out
    }

    pub fn homogeneous_part(&self, k: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(&(i, j), _)| i + j == k)
                .map(|(&e, &c)| (e, c))
                .collect(),
        }
    }

    pub fn derivative_x(&self) -> Self {
        let mut out = Self::zero();
        for (&(i, j), &c) in &self.terms {
            if i > 0 {
                out.add_term(i - 1, j, c * T::lit(i as f64));
            }
        }
        out
    }

    pub fn derivative_y(&self) -> Self {
        let mut out = Self::zero();
        for (&(i, j), &c) in &self.terms {
            if j > 0 {
                out.add_term(i, j - 1, c * T::lit(j as f64));
            }
        }
        out
    }

    pub fn eval(&self, x: Complex<T>, y: Complex<T>) -> Complex<T> {
        // Horner in y over per-power x-polynomials.
        let dy = match self.degree_y() {
            Degree::Finite(d) => d as usize,
            Degree::MinusInfinity => return Complex::zero(),
        };
        let mut rows: Vec<Vec<(u32, Complex<T>)>> = vec![Vec::new(); dy + 1];
        for (&(i, j), &c) in &self.terms {
            rows[j as usize].push((i, c));
        }
        let mut acc = Complex::zero();
        for row in rows.iter().rev() {
            let mut px = Complex::zero();
            let mut last = row.last().map_or(0, |&(i, _)| i);
            for &(i, c) in row.iter().rev() {
                px = px * powi(x, last - i) + c;
                last = i;
            }
            px = px * powi(x, last);
            acc = acc * y + px;
        }
        acc
    }

    /// Exchanges the roles of `x` and `y`.
    pub fn swap_vars(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(&(i, j), &c)| ((j, i), c)).collect(),
        }
    }

    /// `y ↦ p(x0, y)`.
    pub fn specialize_x(&self, x0: Complex<T>) -> Poly1<T> {
        let n = match self.degree_y() {
            Degree::Finite(d) => d as usize + 1,
            Degree::MinusInfinity => return Poly1::zero(),
        };
        let mut coeffs = vec![Complex::zero(); n];
        for (&(i, j), &c) in &self.terms {
            coeffs[j as usize] = coeffs[j as usize] + c * powi(x0, i);
        }
        Poly1::from_coeffs_unchecked(coeffs)
    }

    /// `x ↦ p(x, y0)`.
    pub fn specialize_y(&self, y0: Complex<T>) -> Poly1<T> {
        self.swap_vars().specialize_x(y0)
    }

    /// Restriction to the parametrised line `T ↦ (x0 + a T, y0 + b T)`.
    pub fn restrict_to_line(
        &self,
        base: (Complex<T>, Complex<T>),
        dir: (Complex<T>, Complex<T>),
    ) -> Poly1<T> {
        let lx = Poly1::from_coeffs_unchecked(vec![base.0, dir.0]);
        let ly = Poly1::from_coeffs_unchecked(vec![base.1, dir.1]);
        let mut xp = PowCache::new(lx);
        let mut yp = PowCache::new(ly);
        let mut out = Poly1::zero();
        for (&(i, j), &c) in &self.terms {
            let term = (xp.get(i) * yp.get(j)).scale(c);
            out = &out + &term;
        }
        out
    }

    /// Substitutes `x ← a0 x + a1 y + a2`, `y ← b0 x + b1 y + b2`.
    pub fn compose_affine(&self, map: &AffineMap<T>) -> Self {
        let lx = Self::from_terms_unchecked([(1, 0, map.x[0]), (0, 1, map.x[1]), (0, 0, map.x[2])]);
        let ly = Self::from_terms_unchecked([(1, 0, map.y[0]), (0, 1, map.y[1]), (0, 0, map.y[2])]);
        let mut xpows = vec![Self::constant(Complex::one())];
        let mut ypows = vec![Self::constant(Complex::one())];
        let mut out = Self::zero();
        for (&(i, j), &c) in &self.terms {
            while xpows.len() <= i as usize {
                let next = xpows.last().unwrap() * &lx;
                xpows.push(next);
            }
            while ypows.len() <= j as usize {
                let next = ypows.last().unwrap() * &ly;
                ypows.push(next);
            }
            let term = (&xpows[i as usize] * &ypows[j as usize]).scale(c);
            out = &out + &term;
        }
        out
    }

    /// Re-indexes every term with `f(i, j)`; used for chart substitutions
    /// where `x^i y^j` maps to a single monomial.
    pub(crate) fn map_exponents<F>(&self, f: F) -> Self
    where
        F: Fn(u32, u32) -> (u32, u32),
    {
        let mut out = Self::zero();
        for (&(i, j), &c) in &self.terms {
            let (a, b) = f(i, j);
            out.add_term(a, b, c);
        }
        out
    }

    /// Divides by `x^m`; every term must carry at least that power.
    pub(crate) fn div_x_power(&self, m: u32) -> Self {
        self.map_exponents(|i, j| {
            debug_assert!(i >= m);
            (i - m, j)
        })
    }

    fn from_terms_unchecked<const N: usize>(terms: [(u32, u32, Complex<T>); N]) -> Self {
        let mut p = Self::zero();
        for (i, j, c) in terms {
            p.add_term(i, j, c);
        }
        p
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(Complex::one());
        for _ in 0..k {
            out = &out * self;
        }
        out
    }
}

fn powi<T: Real>(z: Complex<T>, k: u32) -> Complex<T> {
    let mut out = Complex::one();
    let mut base = z;
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            out = out * base;
        }
        base = base * base;
        e >>= 1;
    }
    out
}

struct PowCache<T: Real> {
    pows: Vec<Poly1<T>>,
}

impl<T: Real> PowCache<T> {
    fn new(base: Poly1<T>) -> Self {
        Self {
            pows: vec![Poly1::constant(Complex::one()), base],
        }
    }

    fn get(&mut self, k: u32) -> &Poly1<T> {
        while self.pows.len() <= k as usize {
            let next = &self.pows[self.pows.len() - 1] * &self.pows[1];
            self.pows.push(next);
        }
        &self.pows[k as usize]
    }
}

impl<T: Real> Add for &Poly2<T> {
    type Output = Poly2<T>;
    fn add(self, rhs: &Poly2<T>) -> Poly2<T> {
        let mut out = self.clone();
        for (&(i, j), &c) in &rhs.terms {
            out.add_term(i, j, c);
        }
        out
    }
}

impl<T: Real> Sub for &Poly2<T> {
    type Output = Poly2<T>;
    fn sub(self, rhs: &Poly2<T>) -> Poly2<T> {
        let mut out = self.clone();
        for (&(i, j), &c) in &rhs.terms {
            out.add_term(i, j, -c);
        }
        out
    }
}

impl<T: Real> Neg for &Poly2<T> {
    type Output = Poly2<T>;
    fn neg(self) -> Poly2<T> {
        self.scale(-Complex::<T>::one())
    }
}

impl<T: Real> Mul for &Poly2<T> {
    type Output = Poly2<T>;
    fn mul(self, rhs: &Poly2<T>) -> Poly2<T> {
        let mut out = Poly2::zero();
        for (&(i, j), &a) in &self.terms {
            for (&(k, l), &b) in &rhs.terms {
                out.add_term(i + k, j + l, a * b);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<T: Real> $tr for Poly2<T> {
            type Output = Poly2<T>;
            fn $m(self, rhs: Poly2<T>) -> Poly2<T> {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<T: Real> Neg for Poly2<T> {
    type Output = Poly2<T>;
    fn neg(self) -> Poly2<T> {
        -&self
    }
}
