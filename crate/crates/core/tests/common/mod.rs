#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use shfc::foliation::sample::random_complex;
use shfc::Jet;

/// Multiplier with modulus uniform in `[0.2, 0.8] ∪ [1.25, 5]` and a
/// uniform argument.
pub fn hyperbolic_multiplier<R: Rng>(rng: &mut R) -> Complex64 {
    let r = if rng.gen_bool(0.5) { rng.gen_range(0.2..=0.8) } else { rng.gen_range(1.25..=5.0) };
    Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
}

/// Jet `νz + Σ c_k z^k` with `c_k` uniform in the square `[-1, 1]²`
/// scaled by `0.25^(k−1)`.
pub fn random_jet<R: Rng>(rng: &mut R, nu: Complex64, order: usize) -> Jet {
    let mut c = vec![nu];
    for k in 2..=order {
        c.push(random_complex(rng) * 0.25f64.powi(k as i32 - 1));
    }
    Jet::new(c).unwrap()
}

pub fn random_point<R: Rng>(rng: &mut R) -> (Complex64, Complex64) {
    (random_complex(rng), random_complex(rng))
}

/// Exact complex dyadic arithmetic for conjugation checks: every `f64` is
/// a dyadic rational, and jets whose linear term is `1` compose and solve
/// without any division, so no rounding happens at all.
pub mod exact {
    use num_complex::Complex64;
    use num_rational::BigRational;
    use num_traits::{ToPrimitive, Zero};

    #[derive(Clone)]
    pub struct Q {
        re: BigRational,
        im: BigRational,
    }

    impl Q {
        pub fn from_c64(z: Complex64) -> Self {
            Self {
                re: BigRational::from_float(z.re).expect("finite"),
                im: BigRational::from_float(z.im).expect("finite"),
            }
        }
        pub fn zero() -> Self {
            Self { re: BigRational::zero(), im: BigRational::zero() }
        }
        pub fn to_c64(&self) -> Complex64 {
            Complex64::new(self.re.to_f64().unwrap(), self.im.to_f64().unwrap())
        }
        pub fn add(&self, o: &Q) -> Q {
            Q { re: &self.re + &o.re, im: &self.im + &o.im }
        }
        pub fn sub(&self, o: &Q) -> Q {
            Q { re: &self.re - &o.re, im: &self.im - &o.im }
        }
        pub fn div(&self, o: &Q) -> Q {
            let d = &o.re * &o.re + &o.im * &o.im;
            Q {
                re: (&self.re * &o.re + &self.im * &o.im) / &d,
                im: (&self.im * &o.re - &self.re * &o.im) / &d,
            }
        }
        pub fn mul(&self, o: &Q) -> Q {
            Q { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
        }
    }

    /// Series `Σ a[k] z^(k+1)`.
    pub type Series = Vec<Q>;

    pub fn from_coeffs(c: &[Complex64]) -> Series {
        c.iter().map(|&z| Q::from_c64(z)).collect()
    }

    fn mul(a: &[Q], b: &[Q], len: usize) -> Vec<Q> {
        // Index = power, both with zero constant term handled by the caller.
        let mut out = vec![Q::zero(); len];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                if i + j < len {
                    out[i + j] = out[i + j].add(&x.mul(y));
                }
            }
        }
        out
    }

    /// `pows[m][k]` = coefficient of `z^k` in `b^m`, powers indexed from 0.
    fn powers(b: &Series, order: usize) -> Vec<Vec<Q>> {
        let mut full = vec![Q::zero(); order + 1];
        for (k, c) in b.iter().enumerate().take(order) {
            full[k + 1] = c.clone();
        }
        let mut pows = vec![{
            let mut one = vec![Q::zero(); order + 1];
            one[0] = Q::from_c64(Complex64::new(1.0, 0.0));
            one
        }];
        for m in 1..=order {
            let next = mul(&pows[m - 1], &full, order + 1);
            pows.push(next);
        }
        pows
    }

    pub fn compose(a: &Series, b: &Series) -> Series {
        let order = a.len();
        let pows = powers(b, order);
        (1..=order)
            .map(|k| (1..=k).fold(Q::zero(), |acc, m| acc.add(&a[m - 1].mul(&pows[m][k]))))
            .collect()
    }

    /// Koenigs series of `f`, solved exactly order by order.
    pub fn koenigs(f: &Series) -> Series {
        let order = f.len();
        let pows = powers(f, order);
        let nu = &f[0];
        let mut nu_k = nu.clone();
        let mut z: Series = vec![Q::from_c64(Complex64::new(1.0, 0.0))];
        for k in 2..=order {
            nu_k = nu_k.mul(nu);
            let mut r = Q::zero();
            for m in 1..k {
                r = r.sub(&z[m - 1].mul(&pows[m][k]));
            }
            z.push(r.div(&nu_k.sub(nu)));
        }
        z
    }

    /// `h` with `h ∘ b = g`, for `b` with linear coefficient exactly `1`.
    pub fn solve_right(b: &Series, g: &Series) -> Series {
        let order = g.len();
        let pows = powers(b, order);
        let mut h: Series = Vec::with_capacity(order);
        for k in 1..=order {
            let mut r = g[k - 1].clone();
            for m in 1..k {
                r = r.sub(&h[m - 1].mul(&pows[m][k]));
            }
            h.push(r);
        }
        h
    }
}
