use num_complex::{Complex, Complex64};
use num_traits::Zero;

use super::{GermError, Jet, HYPERBOLIC_TOL};
use crate::scalar::{modulus, Real};

/// Formal Koenigs map: `ζ` with `ζ'(0) = 1` and `ζ ∘ f = ν ζ` through the
/// order of `f`.
///
/// Order by order, `ζ_k (ν − ν^k) = Σ_{m<k} ζ_m [z^k] f^m`.
pub fn koenigs_jet<T: Real>(f: &Jet<T>) -> Result<Jet<T>, GermError> {
    if !f.is_hyperbolic(T::lit(HYPERBOLIC_TOL)) {
        return Err(GermError::NotHyperbolic);
    }
    let order = f.order();
    let nu = f.multiplier();
    let pows = f.powers(order);
    let mut zeta: Vec<Complex<T>> = vec![Complex::zero(); order + 1];
    zeta[1] = Complex::new(T::one(), T::zero());
    let mut nu_k = nu;
    for k in 2..=order {
        nu_k = nu_k * nu;
        let mut rhs: Complex<T> = Complex::zero();
        for m in 1..k {
            rhs = rhs + zeta[m] * pows[m][k];
        }
        zeta[k] = rhs / (nu - nu_k);
    }
    Ok(Jet::from_series(&zeta, order))
}

/// A holomorphic germ fixing 0 that can be evaluated on a disk.
pub trait AnalyticGerm {
    fn eval(&self, z: Complex64) -> Complex64;
    /// `f'(0)`.
    fn multiplier(&self) -> Complex64;
    /// Radius of a disk on which `eval` is valid.
    fn radius(&self) -> f64;
}

/// A jet read as the polynomial it truncates to, valid on `|z| < radius`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyGerm {
    pub jet: Jet<f64>,
    pub radius: f64,
}

impl AnalyticGerm for PolyGerm {
    fn eval(&self, z: Complex64) -> Complex64 {
        self.jet.eval(z)
    }
    fn multiplier(&self) -> Complex64 {
        self.jet.multiplier()
    }
    fn radius(&self) -> f64 {
        self.radius
    }
}

/// A germ given by a closure.
pub struct FnGerm<F> {
    pub f: F,
    pub nu: Complex64,
    pub radius: f64,
}

impl<F: Fn(Complex64) -> Complex64> AnalyticGerm for FnGerm<F> {
    fn eval(&self, z: Complex64) -> Complex64 {
        (self.f)(z)
    }
    fn multiplier(&self) -> Complex64 {
        self.nu
    }
    fn radius(&self) -> f64 {
        self.radius
    }
}

/// Local inverse of a polynomial germ, for expanding germs whose Koenigs
/// map is computed through the contracting inverse. Evaluated by Newton's
/// method started from the inverse jet.
#[derive(Debug, Clone, PartialEq)]
pub struct InverseGerm {
    pub jet: Jet<f64>,
    inverse: Jet<f64>,
    derivative: Vec<Complex64>,
    pub radius: f64,
}

impl InverseGerm {
    pub fn new(jet: Jet<f64>, radius: f64) -> Self {
        let derivative = jet.coeffs().iter().enumerate().map(|(k, &c)| c * (k + 1) as f64).collect();
        Self {
            inverse: jet.invert(),
            jet,
            derivative,
            radius,
        }
    }
}

impl AnalyticGerm for InverseGerm {
    fn eval(&self, w: Complex64) -> Complex64 {
        let mut z = self.inverse.eval(w);
        for _ in 0..50 {
            let fp = self.derivative.iter().rev().fold(Complex64::zero(), |acc, &c| acc * z + c);
            let dz = (self.jet.eval(z) - w) / fp;
            z -= dz;
            if dz.norm() <= 1e-17 * (1.0 + z.norm()) {
                break;
            }
        }
        z
    }
    fn multiplier(&self) -> Complex64 {
        self.jet.multiplier().inv()
    }
    fn radius(&self) -> f64 {
        self.radius
    }
}

/// Disk on which `|f(z)| ≤ c |z|` with `c = |ν|^(3/4)`, so that
/// `c² < |ν| < c`, together with `k` such that `|f(z) − νz| ≤ k |z|²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContractionDisk {
    pub r: f64,
    pub c: f64,
    pub k: f64,
}

const CIRCLE_SAMPLES: usize = 256;

fn circle_max(r: f64, g: impl Fn(Complex64) -> f64) -> f64 {
    (0..CIRCLE_SAMPLES)
        .map(|i| g(Complex64::from_polar(r, std::f64::consts::TAU * i as f64 / CIRCLE_SAMPLES as f64)))
        .fold(0.0, f64::max)
}

/// Finds a contraction disk by shrinking from the germ's radius. The
/// maximum over the circle is sampled, with a 2% safety margin on `c`.
pub fn contraction_disk(f: &dyn AnalyticGerm) -> Result<ContractionDisk, GermError> {
    let nu = f.multiplier().norm();
    if !(nu > 0.0 && nu < 1.0) {
        return Err(GermError::NotContracting);
    }
    let c = nu.powf(0.75);
    let mut r = 0.95 * f.radius().min(1.0);
    for _ in 0..200 {
        let ratio = circle_max(r, |z| (f.eval(z) / z).norm());
        if ratio <= c / 1.02 {
            let k = circle_max(r, |z| (f.eval(z) - f.multiplier() * z).norm()) / (r * r);
            return Ok(ContractionDisk { r, c, k: k * 1.02 });
        }
        r *= 0.8;
    }
    Err(GermError::ContractionRadiusNotFound)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KoenigsValue {
    pub value: Complex64,
    pub iterations: usize,
    /// Certified bound on `|ζ(z) − value|` from the geometric tail.
    pub error_bound: f64,
}

/// `ζ(z) = lim fⁿ(z)/νⁿ` for a contracting germ (`|ν| < 1`).
///
/// Iterates until the geometric tail bound `(k r²/|ν|) (c²/|ν|)ⁿ / (1 − c²/|ν|)`
/// (shifted by the iterations needed to enter the contraction disk) drops
/// below `tol`. Points outside the disk are admitted if their orbit enters
/// it within `n_max` steps.
pub fn koenigs_iterative(
    f: &dyn AnalyticGerm,
    z: Complex64,
    n_max: usize,
    tol: f64,
) -> Result<KoenigsValue, GermError> {
    let disk = contraction_disk(f)?;
    let nu = f.multiplier();
    let q = disk.c * disk.c / nu.norm();
    let lead = disk.k * disk.r * disk.r / nu.norm() / (1.0 - q);
    let mut w = z;
    let mut scale = Complex64::new(1.0, 0.0);
    let mut entered: Option<usize> = if z.norm() <= disk.r { Some(0) } else { None };
    for n in 0..n_max {
        if let Some(m) = entered {
            let bound = lead * q.powi((n - m) as i32) / nu.norm().powi(m as i32);
            if bound < tol {
                return Ok(KoenigsValue {
                    value: w / scale,
                    iterations: n,
                    error_bound: bound,
                });
            }
        }
        if modulus(w).is_zero() {
            return Ok(KoenigsValue {
                value: Complex64::zero(),
                iterations: n,
                error_bound: 0.0,
            });
        }
        w = f.eval(w);
        scale *= nu;
        if entered.is_none() && w.norm() <= disk.r {
            entered = Some(n + 1);
        }
    }
    Err(GermError::IterationLimit)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn linear_germ_is_its_own_chart() {
        let zeta = koenigs_jet(&Jet::linear(Complex64::new(0.3, 0.4), 10)).unwrap();
        assert_eq!(zeta, Jet::identity(10));
    }

    #[test]
    fn mobius_geometric_series() {
        // z / (2 − z) = Σ z^k / 2^k; ζ = z / (1 − z).
        let coeffs: Vec<Complex64> = (1..=16).map(|k| c(0.5f64.powi(k))).collect();
        let zeta = koenigs_jet(&Jet::new(coeffs).unwrap()).unwrap();
        for k in 1..=16 {
            assert!((zeta.coeff(k) - 1.0).norm() < 1e-10);
        }
    }

    #[test]
    fn one_step_of_recursion() {
        let f = Jet::new(vec![c(0.5), c(1.0), c(0.0)]).unwrap();
        let zeta = koenigs_jet(&f).unwrap();
        assert_eq!(zeta.coeff(2), c(4.0));
    }

    #[test]
    fn unit_multiplier_is_refused() {
        let f = Jet::linear(Complex64::from_polar(1.0, 0.7), 4);
        assert_eq!(koenigs_jet(&f), Err(GermError::NotHyperbolic));
    }

    #[test]
    fn iterative_linear_and_mobius() {
        let lin = FnGerm { f: |z: Complex64| z / 2.0, nu: c(0.5), radius: 10.0 };
        let v = koenigs_iterative(&lin, c(0.1), 200, 1e-14).unwrap();
        assert_eq!(v.value, c(0.1));
        let mob = FnGerm { f: |z: Complex64| z / (2.0 - z), nu: c(0.5), radius: 1.9 };
        let v = koenigs_iterative(&mob, c(0.3), 500, 1e-13).unwrap();
        assert!((v.value - c(0.3 / 0.7)).norm() < 1e-12, "{v:?}");
    }
}
