//! Germs of biholomorphisms fixing the origin: truncated jets, Koenigs
//! linearisation, renormalisation, pseudo-group orbits and density of
//! additive subgroups of `ℂ`.

pub mod format;
mod group;
mod jet;
mod koenigs;
mod orbit;
mod renormalize;

use thiserror::Error;

pub use group::{additive_group_density, tangent_group_density, DensityClass, DensityConfig, GroupClosure, GroupWitness};
pub use jet::{Jet, DEFAULT_ORDER};
pub use koenigs::{contraction_disk, koenigs_iterative, koenigs_jet, AnalyticGerm, ContractionDisk, FnGerm, InverseGerm, KoenigsValue, PolyGerm};
pub use orbit::{pseudo_orbit, Generator, Letter, OrbitConfig, OrbitPoint, OrbitReport, PseudoWord};
pub use renormalize::{predicted_in_koenigs_chart, renormalize};

/// `||c₁| − 1|` must exceed this for a germ to count as hyperbolic.
pub const HYPERBOLIC_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum GermError {
    #[error("jet has no coefficients")]
    EmptyJet,
    #[error("coefficient is not finite")]
    NonFinite,
    #[error("first coefficient is zero")]
    NotInvertible,
    #[error("germ is not hyperbolic")]
    NotHyperbolic,
    #[error("germ does not contract (|f'(0)| must be below 1)")]
    NotContracting,
    #[error("no contraction radius found")]
    ContractionRadiusNotFound,
    #[error("iteration limit reached before the error bound was met")]
    IterationLimit,
}
