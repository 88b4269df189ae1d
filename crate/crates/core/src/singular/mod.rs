//! Singular points: the points on the invariant line at infinity with their
//! characteristic numbers, affine singularities with linear classification,
//! and separatrix jets at hyperbolic points.

mod affine;
mod infinity;
mod report;
mod separatrix;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cpoly::CpolyError;

pub use affine::{affine_singularities, AffineClass, AffineSingularity, AffineSearch, SearchBox};
pub use infinity::{infinity_charts, infinity_singularities, residue_identity_defect, InfinityCharts, InfinitySingularity};
pub use report::{hyperbolicity_report, HyperbolicityReport};
pub use separatrix::{separatrix_jets, SeparatrixJet};

/// Below this relative size `Im λ` counts as zero.
pub const REAL_TOL: f64 = 1e-9;
/// Above this relative size `Im λ` counts as nonzero; in between the
/// decision is reported as borderline.
pub const NONREAL_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SingularError {
    #[error("the line at infinity is not invariant")]
    InfinityNotLeaf,
    #[error("R̃(0, v) has a multiple root near {0}")]
    NonSimpleRoot(crate::C64),
    #[error("the foliation does not have the Petrovskiĭ–Landis property")]
    NotPl,
    #[error("resultants vanish identically in both variables")]
    ResultantDegenerate,
    #[error("singular point is not hyperbolic")]
    NotHyperbolic,
    #[error("resonant divisor at order {0}")]
    ResonantDivisor(usize),
    #[error(transparent)]
    Poly(#[from] CpolyError),
}

/// Three-way outcome of a floating-point yes/no test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Yes,
    No,
    Borderline,
}

impl Decision {
    pub fn is_yes(self) -> bool {
        self == Decision::Yes
    }
}

/// Whether `z` is non-real, judged by `|Im z| / max(1, |z|)`.
pub fn nonreal(z: crate::C64) -> Decision {
    let t = z.im.abs() / z.norm().max(1.0);
    if t <= REAL_TOL {
        Decision::No
    } else if t >= NONREAL_TOL {
        Decision::Yes
    } else {
        Decision::Borderline
    }
}
