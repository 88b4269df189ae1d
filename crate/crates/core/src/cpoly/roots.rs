//! Univariate complex root finding: Aberth–Ehrlich simultaneous iteration,
//! Newton polish, then multiplicity clustering.

use num_complex::Complex;
use num_traits::{One, Zero};

use super::{CpolyError, Poly1};
use crate::scalar::{modulus, Real};

/// A root together with its (clustered) multiplicity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Root<T: Real> {
    pub value: Complex<T>,
    pub multiplicity: usize,
}

/// Default distance below which two computed roots are merged.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-8;

const MAX_ABERTH_ITERS: usize = 800;

/// All roots of `p` with multiplicities summing to `deg p`.
///
/// Roots closer than `tol` are merged. Clusters that cannot be told apart
/// from a single multiple root at working precision (their Taylor
/// coefficients at the cluster centre vanish to rounding level) are merged
/// as well; each cluster centre is then refined by Newton's method on the
/// `(m-1)`-th derivative.
pub fn roots<T: Real>(p: &Poly1<T>, tol: T) -> Result<Vec<Root<T>>, CpolyError> {
    if p.is_zero() {
        return Err(CpolyError::ZeroPolynomial);
    }
    let zero_mult = p.coeffs().iter().take_while(|c| c.is_zero()).count();
    let q = Poly1::from_coeffs_unchecked(p.coeffs()[zero_mult..].to_vec());
    let mut out = Vec::new();
    if zero_mult > 0 {
        out.push(Root {
            value: Complex::zero(),
            multiplicity: zero_mult,
        });
    }
    let n = q.coeffs().len() - 1;
    if n == 0 {
        return Ok(out);
    }
    let approx = if n == 1 {
        vec![-q.coeff(0) / q.coeff(1)]
    } else {
        aberth(&q)
    };
    let polished: Vec<_> = approx.into_iter().map(|z| newton_polish(&q, z)).collect();
    out.extend(cluster(&q, polished, tol));
    sort_roots(&mut out);
    Ok(out)
}

/// Roots of `p` required to be simple; returns `None` if any cluster has
/// multiplicity above one.
pub fn simple_roots<T: Real>(p: &Poly1<T>, tol: T) -> Result<Option<Vec<Complex<T>>>, CpolyError> {
    let rs = roots(p, tol)?;
    if rs.iter().any(|r| r.multiplicity > 1) {
        return Ok(None);
    }
    Ok(Some(rs.into_iter().map(|r| r.value).collect()))
}

fn sort_roots<T: Real>(rs: &mut [Root<T>]) {
    rs.sort_by(|a, b| {
        a.value
            .re
            .partial_cmp(&b.value.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(
                a.value
                    .im
                    .partial_cmp(&b.value.im)
                    .unwrap_or(std::cmp::Ordering::Equal),
            )
    });
}

fn aberth<T: Real>(p: &Poly1<T>) -> Vec<Complex<T>> {
    let n = p.coeffs().len() - 1;
    let lead = modulus(p.leading());
    // Geometric-mean radius of the roots as the initial circle.
    let r0 = (modulus(p.coeff(0)) / lead).powf(T::one() / T::from_usize_lossy(n));
    let r0 = if r0.is_finite() && r0 > T::zero() { r0 } else { T::one() };
    let two_pi = T::lit(std::f64::consts::TAU);
    let mut z: Vec<Complex<T>> = (0..n)
        .map(|k| {
            let theta = two_pi * T::from_usize_lossy(k) / T::from_usize_lossy(n) + T::lit(0.4);
            Complex::from_polar(r0, theta)
        })
        .collect();
    let abs_coeffs: Vec<T> = p.coeffs().iter().map(|&c| modulus(c)).collect();
    let eps = T::epsilon();
    let mut done = vec![false; n];
    for _ in 0..MAX_ABERTH_ITERS {
        let mut all_done = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (pv, dpv) = p.eval_with_derivative(z[i]);
            let mag = modulus(z[i]);
            let bound = abs_coeffs
                .iter()
                .rev()
                .fold(T::zero(), |acc, &a| acc * mag + a);
            if modulus(pv) <= T::lit(4.0) * T::from_usize_lossy(n) * eps * bound {
                done[i] = true;
                continue;
            }
            all_done = false;
            let ratio = pv / dpv;
            let mut s: Complex<T> = Complex::zero();
            for j in 0..n {
                if j != i {
                    let d = z[i] - z[j];
                    if !d.is_zero() {
                        s = s + Complex::<T>::one() / d;
                    }
                }
            }
            let denom: Complex<T> = Complex::<T>::one() - ratio * s;
            let step = if denom.is_zero() || !dpv.re.is_finite() || dpv.is_zero() {
                // Nudge off a stationary point of p.
                Complex::new(T::lit(1e-3) * (T::one() + mag), T::lit(1e-3))
            } else {
                ratio / denom
            };
            let next = z[i] - step;
            if next.re.is_finite() && next.im.is_finite() {
                if modulus(step) <= eps * mag {
                    done[i] = true;
                }
                z[i] = next;
            }
        }
        if all_done {
            break;
        }
    }
    z
}

fn newton_polish<T: Real>(p: &Poly1<T>, z: Complex<T>) -> Complex<T> {
    let mut best = z;
    let mut best_val = modulus(p.eval(z));
    for _ in 0..3 {
        let (pv, dpv) = p.eval_with_derivative(best);
        if dpv.is_zero() {
            break;
        }
        let cand = best - pv / dpv;
        let v = modulus(p.eval(cand));
        if v < best_val {
            best = cand;
            best_val = v;
        } else {
            break;
        }
    }
    best
}

fn cluster<T: Real>(p: &Poly1<T>, zs: Vec<Complex<T>>, tol: T) -> Vec<Root<T>> {
    // Single linkage at `tol`.
    let mut groups: Vec<Vec<Complex<T>>> = Vec::new();
    for z in zs {
        let hits: Vec<usize> = groups
            .iter()
            .enumerate()
            .filter(|(_, g)| g.iter().any(|&w| modulus(w - z) < tol))
            .map(|(k, _)| k)
            .collect();
        match hits.as_slice() {
            [] => groups.push(vec![z]),
            [first, rest @ ..] => {
                let first = *first;
                let mut merged = std::mem::take(&mut groups[first]);
                for &k in rest.iter().rev() {
                    merged.extend(groups.remove(k));
                }
                merged.push(z);
                groups[first] = merged;
            }
        }
    }
    // Merge numerically indistinguishable neighbours, closest pair first.
    loop {
        let mut pairs: Vec<(usize, usize, T)> = Vec::new();
        for a in 0..groups.len() {
            for b in (a + 1)..groups.len() {
                pairs.push((a, b, modulus(mean(&groups[a]) - mean(&groups[b]))));
            }
        }
        pairs.sort_by(|x, y| x.2.partial_cmp(&y.2).unwrap_or(std::cmp::Ordering::Equal));
        let hit = pairs.into_iter().find_map(|(a, b, _)| {
            let mut merged = groups[a].clone();
            merged.extend(groups[b].iter().copied());
            is_multiple_root(p, &merged).then_some((a, b, merged))
        });
        match hit {
            Some((a, b, merged)) => {
                groups[a] = merged;
                groups.remove(b);
            }
            None => break,
        }
    }
    groups
        .into_iter()
        .map(|g| {
            let m = g.len();
            let c = mean(&g);
            Root {
                value: if m > 1 { refine_multiple(p, c, m) } else { c },
                multiplicity: m,
            }
        })
        .collect()
}

fn mean<T: Real>(g: &[Complex<T>]) -> Complex<T> {
    let s = g.iter().fold(Complex::zero(), |a, &b| a + b);
    s / T::from_usize_lossy(g.len())
}

/// Whether the points of `group` are consistent with a single root of
/// multiplicity `m = group.len()`.
///
/// A rounding-level perturbation of size `δ` splits an `m`-fold root into a
/// cluster of radius about `r = (δ / |a_m|)^(1/m)`, where `a_k` are the
/// Taylor coefficients at the cluster centre. The group is merged when its
/// spread and the low-order coefficients are both at that scale.
fn is_multiple_root<T: Real>(p: &Poly1<T>, group: &[Complex<T>]) -> bool {
    let m = group.len();
    let c = refine_multiple(p, mean(group), m);
    let spread = group
        .iter()
        .map(|&z| modulus(z - c))
        .fold(T::zero(), T::max);
    let cm = modulus(c);
    let n = p.coeffs().len();
    let delta = T::lit(16.0)
        * T::from_usize_lossy(n)
        * T::epsilon()
        * p.coeffs()
            .iter()
            .rev()
            .fold(T::zero(), |acc, &a| acc * cm + modulus(a));
    let shifted = p.taylor_shift(c);
    let am = modulus(shifted.coeff(m));
    if am.is_zero() {
        return false;
    }
    let r = (delta / am).powf(T::one() / T::from_usize_lossy(m));
    if spread > T::lit(10.0) * r {
        return false;
    }
    let mut binom = T::one();
    (0..m).all(|k| {
        if k > 0 {
            binom = binom * T::from_usize_lossy(m - k + 1) / T::from_usize_lossy(k);
        }
        modulus(shifted.coeff(k)) <= T::lit(10.0) * binom * am * r.powi((m - k) as i32)
    })
}

fn refine_multiple<T: Real>(p: &Poly1<T>, c: Complex<T>, m: usize) -> Complex<T> {
    let mut d = p.clone();
    for _ in 0..(m - 1) {
        d = d.derivative();
    }
    newton_polish(&d, c)
}
