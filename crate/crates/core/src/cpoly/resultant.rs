//! Sylvester resultants of bivariate polynomials by evaluation and
//! interpolation, plus relative primality and common-zero search.

use num_complex::Complex;
use num_traits::{One, Zero};

use super::{roots, CpolyError, Degree, Poly1, Poly2};
use crate::scalar::{modulus, Real};

/// Relative threshold under which a resultant sample counts as zero,
/// measured against the Hadamard bound of its Sylvester matrix.
pub const RESULTANT_ZERO_REL: f64 = 1e-10;

/// Determinant of a dense square complex matrix by Gaussian elimination
/// with partial pivoting. Returns `(det, hadamard_bound)`.
pub fn determinant<T: Real>(mut m: Vec<Vec<Complex<T>>>) -> (Complex<T>, T) {
    let n = m.len();
    let hadamard = m.iter().fold(T::one(), |acc, row| {
        let norm = row
            .iter()
            .fold(T::zero(), |s, &c| s + c.norm_sqr())
            .sqrt();
        acc * norm
    });
    let mut det = Complex::one();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| {
                modulus(m[a][col])
                    .partial_cmp(&modulus(m[b][col]))
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap();
        if m[pivot][col].is_zero() {
            return (Complex::zero(), hadamard);
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col];
        det = det * p;
        for r in (col + 1)..n {
            let f = m[r][col] / p;
            if f.is_zero() {
                continue;
            }
            for k in col..n {
                let v = m[col][k];
                m[r][k] = m[r][k] - f * v;
            }
        }
    }
    (det, hadamard)
}

/// Sylvester matrix of two univariate polynomials with formal degrees
/// `dp`, `dq` (coefficients beyond the stored ones are zero).
fn sylvester<T: Real>(p: &Poly1<T>, dp: usize, q: &Poly1<T>, dq: usize) -> Vec<Vec<Complex<T>>> {
    let n = dp + dq;
    let mut m = vec![vec![Complex::zero(); n]; n];
    for r in 0..dq {
        for k in 0..=dp {
            m[r][r + k] = p.coeff(dp - k);
        }
    }
    for r in 0..dp {
        for k in 0..=dq {
            m[dq + r][r + k] = q.coeff(dq - k);
        }
    }
    m
}

fn formal_deg_y<T: Real>(p: &Poly2<T>) -> usize {
    match p.degree_y() {
        Degree::Finite(d) => d as usize,
        Degree::MinusInfinity => 0,
    }
}

fn total_deg<T: Real>(p: &Poly2<T>) -> usize {
    match p.degree() {
        Degree::Finite(d) => d as usize,
        Degree::MinusInfinity => 0,
    }
}

/// Value of `Res_y(p, q)` at `x = x0`, with its Hadamard bound.
pub fn resultant_y_at<T: Real>(p: &Poly2<T>, q: &Poly2<T>, x0: Complex<T>) -> (Complex<T>, T) {
    let (dp, dq) = (formal_deg_y(p), formal_deg_y(q));
    let m = sylvester(&p.specialize_x(x0), dp, &q.specialize_x(x0), dq);
    if m.is_empty() {
        return (Complex::one(), T::one());
    }
    determinant(m)
}

/// `Res_y(p, q)` as a polynomial in `x`, recovered by discrete Fourier
/// interpolation on a circle of radius `radius`. Returns the polynomial and
/// the largest Hadamard bound seen (the scale for zero tests).
pub fn resultant_y<T: Real>(p: &Poly2<T>, q: &Poly2<T>, radius: T) -> (Poly1<T>, T) {
    let bound = total_deg(p) * total_deg(q) + formal_deg_y(p).max(formal_deg_y(q)) + 1;
    let n = bound + 1;
    let two_pi = T::lit(std::f64::consts::TAU);
    let mut values = Vec::with_capacity(n);
    let mut scale = T::zero();
    for k in 0..n {
        let w = Complex::from_polar(T::one(), two_pi * T::from_usize_lossy(k) / T::from_usize_lossy(n));
        let (v, h) = resultant_y_at(p, q, w * radius);
        scale = scale.max(h);
        values.push(v);
    }
    let mut coeffs = Vec::with_capacity(n);
    let nt = T::from_usize_lossy(n);
    for m in 0..n {
        let mut acc = Complex::zero();
        for (k, &v) in values.iter().enumerate() {
            let ang = -two_pi * T::from_usize_lossy((k * m) % n) / nt;
            acc = acc + v * Complex::from_polar(T::one(), ang);
        }
        coeffs.push(acc / (nt * radius.powi(m as i32)));
    }
    (Poly1::from_coeffs_unchecked(coeffs), scale)
}

fn sample_points<T: Real>() -> [Complex<T>; 3] {
    [
        Complex::new(T::lit(0.618_033_988_7), T::lit(0.271_828_182_8)),
        Complex::new(T::lit(-0.414_213_562_3), T::lit(0.732_050_807_5)),
        Complex::new(T::lit(1.324_717_957_2), T::lit(-0.577_215_664_9)),
    ]
}

/// Whether `Res_y(p, q)` vanishes identically (sampled at generic points
/// against the Hadamard scale).
pub fn resultant_y_vanishes<T: Real>(p: &Poly2<T>, q: &Poly2<T>) -> bool {
    sample_points::<T>().into_iter().all(|x0| {
        let (v, h) = resultant_y_at(p, q, x0);
        modulus(v) <= T::lit(RESULTANT_ZERO_REL) * h
    })
}

/// True iff `p` and `q` have no nonconstant common factor.
///
/// A common factor involving `y` makes `Res_y` vanish identically; one that
/// involves only `x` is invisible to `Res_y` (it is content with respect to
/// `y`) but makes `Res_x` vanish. Both resultants are therefore checked.
pub fn gcd_check<T: Real>(p: &Poly2<T>, q: &Poly2<T>) -> bool {
    match (p.is_zero(), q.is_zero()) {
        (true, true) => return false,
        (true, false) => return q.is_constant(),
        (false, true) => return p.is_constant(),
        _ => {}
    }
    if p.is_constant() || q.is_constant() {
        return true;
    }
    !resultant_y_vanishes(p, q) && !resultant_y_vanishes(&p.swap_vars(), &q.swap_vars())
}

/// Common zeros of `p` and `q` found by eliminating `y` (or `x` when the
/// `y`-resultant degenerates), root finding, back-substitution and a 2D
/// Newton polish. Only points with residual below `residual_tol` relative
/// to the coefficient scale are kept.
pub fn common_zeros<T: Real>(
    p: &Poly2<T>,
    q: &Poly2<T>,
    residual_tol: T,
) -> Result<Vec<(Complex<T>, Complex<T>)>, CpolyError> {
    if !resultant_y_vanishes(p, q) {
        return Ok(common_zeros_eliminating_y(p, q, residual_tol));
    }
    if !resultant_y_vanishes(&p.swap_vars(), &q.swap_vars()) {
        let swapped = common_zeros_eliminating_y(&p.swap_vars(), &q.swap_vars(), residual_tol);
        return Ok(swapped.into_iter().map(|(a, b)| (b, a)).collect());
    }
    Err(CpolyError::ResultantDegenerate)
}

fn common_zeros_eliminating_y<T: Real>(
    p: &Poly2<T>,
    q: &Poly2<T>,
    residual_tol: T,
) -> Vec<(Complex<T>, Complex<T>)> {
    let (res, _) = resultant_y(p, q, T::one());
    let res = res.trim_relative(T::lit(1e-11));
    let mut out: Vec<(Complex<T>, Complex<T>)> = Vec::new();
    if res.degree() <= Degree::Finite(0) {
        return out;
    }
    let xs = match roots::roots(&res, T::lit(1e-8)) {
        Ok(r) => r,
        Err(_) => return out,
    };
    let scale = p.max_abs_coeff().max(q.max_abs_coeff());
    for xr in xs {
        let x0 = xr.value;
        for (a, b) in [(p, q), (q, p)] {
            let py = a.specialize_x(x0).trim_relative(T::lit(1e-12));
            if py.degree() <= Degree::Finite(0) {
                continue;
            }
            let Ok(ys) = roots::roots(&py, T::lit(1e-8)) else {
                continue;
            };
            for yr in ys {
                let (x1, y1) = newton2(p, q, x0, yr.value);
                let _ = b;
                if residual_ok(p, q, x1, y1, scale, residual_tol)
                    && !out
                        .iter()
                        .any(|&(u, v)| modulus(u - x1) + modulus(v - y1) < T::lit(1e-7) * (T::one() + modulus(x1) + modulus(y1)))
                {
                    out.push((x1, y1));
                }
            }
        }
    }
    out
}

pub(crate) fn residual_ok<T: Real>(
    p: &Poly2<T>,
    q: &Poly2<T>,
    x: Complex<T>,
    y: Complex<T>,
    scale: T,
    tol: T,
) -> bool {
    let mag = T::one() + modulus(x).max(modulus(y));
    let dp = match p.degree() {
        Degree::Finite(d) => d as i32,
        _ => 0,
    };
    let dq = match q.degree() {
        Degree::Finite(d) => d as i32,
        _ => 0,
    };
    modulus(p.eval(x, y)) <= tol * scale * mag.powi(dp)
        && modulus(q.eval(x, y)) <= tol * scale * mag.powi(dq)
}

/// Newton's method for the square system `p = q = 0`.
pub fn newton2<T: Real>(
    p: &Poly2<T>,
    q: &Poly2<T>,
    x: Complex<T>,
    y: Complex<T>,
) -> (Complex<T>, Complex<T>) {
    let (px, py) = (p.derivative_x(), p.derivative_y());
    let (qx, qy) = (q.derivative_x(), q.derivative_y());
    let (mut x, mut y) = (x, y);
    let mut best = modulus(p.eval(x, y)) + modulus(q.eval(x, y));
    for _ in 0..20 {
        let (a, b) = (px.eval(x, y), py.eval(x, y));
        let (c, d) = (qx.eval(x, y), qy.eval(x, y));
        let det = a * d - b * c;
        if det.is_zero() {
            break;
        }
        let (f, g) = (p.eval(x, y), q.eval(x, y));
        let dx = (d * f - b * g) / det;
        let dy = (a * g - c * f) / det;
        let (nx, ny) = (x - dx, y - dy);
        let r = modulus(p.eval(nx, ny)) + modulus(q.eval(nx, ny));
        if !(r < best) {
            break;
        }
        best = r;
        x = nx;
        y = ny;
        if modulus(dx) + modulus(dy) <= T::epsilon() * (T::one() + modulus(x) + modulus(y)) {
            break;
        }
    }
    (x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    type P = Poly2<f64>;

    fn p(terms: &[(u32, u32, f64, f64)]) -> P {
        P::from_real_parts(terms).unwrap()
    }

    #[test]
    fn coprime_axes() {
        assert!(gcd_check(&P::x(), &P::y()));
    }

    #[test]
    fn shared_factor_x() {
        let xy = p(&[(1, 1, 1.0, 0.0)]);
        let x2 = p(&[(2, 0, 1.0, 0.0)]);
        assert!(!gcd_check(&xy, &x2));
    }

    #[test]
    fn x_squared_plus_one_and_y_squared() {
        // Res_y(x^2 + 1, y^2) = (x^2 + 1)^2, not identically zero.
        let a = p(&[(2, 0, 1.0, 0.0), (0, 0, 1.0, 0.0)]);
        let b = p(&[(0, 2, 1.0, 0.0)]);
        let (res, _) = resultant_y(&a, &b, 1.0);
        let res = res.trim_relative(1e-12);
        let expected = [1.0, 0.0, 2.0, 0.0, 1.0];
        for (k, e) in expected.iter().enumerate() {
            assert!((res.coeff(k) - Complex64::new(*e, 0.0)).norm() < 1e-10);
        }
        assert!(gcd_check(&a, &b));
    }

    #[test]
    fn common_factor_in_y() {
        let f = p(&[(0, 1, 1.0, 0.0), (1, 0, -2.0, 0.0), (0, 0, 1.0, 0.5)]);
        let a = &f * &p(&[(1, 0, 1.0, 0.0), (0, 2, 3.0, 0.0)]);
        let b = &f * &p(&[(0, 0, 2.0, 0.0), (1, 1, 1.0, -1.0)]);
        assert!(!gcd_check(&a, &b));
    }

    #[test]
    fn zero_and_constant() {
        assert!(gcd_check(&P::zero(), &P::constant(Complex64::new(2.0, 0.0))));
        assert!(!gcd_check(&P::zero(), &P::x()));
    }

    #[test]
    fn common_zeros_of_circle_and_line() {
        // x^2 + y^2 = 1, y = x
        let a = p(&[(2, 0, 1.0, 0.0), (0, 2, 1.0, 0.0), (0, 0, -1.0, 0.0)]);
        let b = p(&[(0, 1, 1.0, 0.0), (1, 0, -1.0, 0.0)]);
        let zs = common_zeros(&a, &b, 1e-9).unwrap();
        assert_eq!(zs.len(), 2);
        let s = 0.5f64.sqrt();
        for (x, y) in zs {
            assert!((x - y).norm() < 1e-12);
            assert!((x.norm() - s).abs() < 1e-12);
        }
    }
}
