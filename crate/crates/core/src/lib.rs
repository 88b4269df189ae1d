//! Computational toolkit for singular holomorphic foliations by curves on
//! the complex projective plane.
//!
//! A foliation is given in the affine chart by the 1-form `P dy - Q dx`.
//! The crate classifies it (affine and geometric degree, behaviour of the
//! line at infinity), locates and analyses singular points, continues
//! leaves numerically to compute monodromy, works with germs of
//! biholomorphisms fixing the origin, and evaluates metric quantities.
//!
//! The polynomial and jet layers are generic over the real scalar type;
//! the numerical pipelines run in `f64`. Aliases for the `f64` instances
//! live at the crate root.

pub mod cpoly;
pub mod foliation;
pub mod germ;
pub mod metric;
pub mod scalar;
pub mod singular;
pub mod transport;

pub use scalar::Real;

/// Double-precision complex number.
pub type C64 = num_complex::Complex<f64>;
/// Bivariate polynomial over `f64` complex coefficients.
pub type Poly2 = cpoly::Poly2<f64>;
/// Univariate polynomial over `f64` complex coefficients.
pub type Poly1 = cpoly::Poly1<f64>;
/// Jet of a germ over `f64` complex coefficients.
pub type Jet = germ::Jet<f64>;
pub use foliation::Foliation;
