use super::{GermError, Jet, HYPERBOLIC_TOL};
use crate::scalar::Real;

/// `F_n = f₁⁻ⁿ ∘ f ∘ f₁ⁿ`, found by solving `f₁ⁿ ∘ F_n = f ∘ f₁ⁿ` rather
/// than composing with `f₁⁻ⁿ`.
pub fn renormalize<T: Real>(f1: &Jet<T>, f: &Jet<T>, n: usize) -> Result<Jet<T>, GermError> {
    if !f1.is_hyperbolic(T::lit(HYPERBOLIC_TOL)) {
        return Err(GermError::NotHyperbolic);
    }
    let mut pow = Jet::identity(f1.order());
    for _ in 0..n {
        pow = f1.compose(&pow);
    }
    Ok(pow.solve_left(&f.compose(&pow)))
}

/// Coefficients `a_j ν₁^(n(j−1))` predicted for `F_n` in the Koenigs chart
/// of `f₁`, where `a_j` are the coefficients of `f` in that chart.
pub fn predicted_in_koenigs_chart<T: Real>(
    f1: &Jet<T>,
    f: &Jet<T>,
    n: usize,
) -> Result<(Jet<T>, Jet<T>), GermError> {
    let zeta = super::koenigs_jet(f1)?;
    let base = f.conjugate_by(&zeta);
    let nu = f1.multiplier();
    let mut coeffs = base.coeffs().to_vec();
    let step = nu.powu(n as u32);
    let mut factor = num_complex::Complex::new(T::one(), T::zero());
    for c in coeffs.iter_mut() {
        *c = *c * factor;
        factor = factor * step;
    }
    Ok((base, Jet::new(coeffs)?))
}
