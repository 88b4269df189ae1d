//! Numerical continuation of leaves along paths in complex time: holonomy
//! with variational multipliers, monodromy around the singular points at
//! infinity, leaf tracing and density statistics for transversal hits.

mod continuation;
mod density;
mod monodromy;
mod path;
pub mod rk;
mod trace;

use thiserror::Error;

use crate::singular::SingularError;

pub use continuation::{continue_leaf, HolonomyResult, POLE_FLOOR};
pub use density::{density_statistic, Disk};
pub use monodromy::{holonomy_at_infinity, infinity_monodromy, multiplier_by_integral, InfinityLoops};
pub use path::{PathSpec, Segment, JOIN_TOL};
pub use trace::{trace_leaf, Schedule, Section, TraceBudget, TraceConfig, TracePoint, TraceResult, TraceStatus};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransportError {
    #[error("pole of the leaf equation near {at}")]
    PoleEncountered { at: crate::C64 },
    #[error("step size fell below the floor")]
    StepUnderflow,
    #[error("step limit reached before the tolerance was met")]
    ToleranceNotMet,
    #[error("loop radius reaches another singular point")]
    RadiusTooLarge,
    #[error("path segments do not join, or the path does not start at the given point")]
    InvalidPath,
    #[error("no singular point with that index")]
    IndexOutOfRange,
    #[error("the foliation does not have the Petrovskiĭ–Landis property")]
    NotPl,
    #[error("quadrature did not converge")]
    QuadratureFailed,
    #[error("start point is singular")]
    SingularStart,
    #[error(transparent)]
    Singular(#[from] SingularError),
}
