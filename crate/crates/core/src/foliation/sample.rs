//! Seeded random foliations for experiments and tests.

use num_complex::Complex64;
use rand::Rng;

use super::Foliation;
use crate::Poly2;

/// Complex number with real and imaginary parts uniform in `[-1, 1]`.
pub fn random_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))
}

/// Random polynomial with every monomial of degree `lo..=hi` present.
pub fn random_poly<R: Rng + ?Sized>(rng: &mut R, lo: u32, hi: u32) -> Poly2 {
    let mut terms = Vec::new();
    for d in lo..=hi {
        for i in 0..=d {
            terms.push((i, d - i, random_complex(rng)));
        }
    }
    Poly2::from_terms(terms).expect("finite coefficients")
}

/// Random foliation of affine degree `n`.
///
/// With `infinity_leaf = false` the top parts are forced into the form
/// `P_n = x h`, `Q_n = y h`, so the line at infinity is not invariant and
/// the geometric degree is `n − 1` (requires `n ≥ 1`).
pub fn random_foliation<R: Rng + ?Sized>(rng: &mut R, n: u32, infinity_leaf: bool) -> Foliation {
    assert!(infinity_leaf || n >= 1, "a non-invariant line at infinity needs n >= 1");
    loop {
        let (p, q) = if infinity_leaf || n == 0 {
            (random_poly(rng, 0, n), random_poly(rng, 0, n))
        } else {
            let h = random_poly(rng, n - 1, n - 1);
            let low = n.saturating_sub(1);
            let (pl, ql) = if n >= 1 {
                (random_poly(rng, 0, low), random_poly(rng, 0, low))
            } else {
                (Poly2::zero(), Poly2::zero())
            };
            (&pl + &(&Poly2::x() * &h), &ql + &(&Poly2::y() * &h))
        };
        if let Ok(f) = Foliation::new(p, q) {
            if f.affine_degree() == n && f.infinity_is_leaf() == infinity_leaf {
                return f;
            }
        }
    }
}

/// Random foliation of affine degree `n ≥ 1` with the Petrovskiĭ–Landis
/// property (invariant line at infinity with `n + 1` simple singularities).
pub fn random_pl_foliation<R: Rng + ?Sized>(rng: &mut R, n: u32) -> Foliation {
    loop {
        let f = random_foliation(rng, n, true);
        if f.pl_property() {
            return f;
        }
    }
}
