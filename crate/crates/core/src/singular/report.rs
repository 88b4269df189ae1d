use serde::{Deserialize, Serialize};

use super::{infinity_singularities, Decision, InfinitySingularity};
use crate::germ::{tangent_group_density, DensityConfig, GroupClosure};
use crate::Foliation;

/// The three typicality conditions for density of leaves. Conditions (ii)
/// and (iii) are `None` when (i) fails.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicityReport {
    /// (i) Petrovskiĭ–Landis property.
    pub pl_property: bool,
    /// (ii) every multiplier at infinity lies off the unit circle.
    pub multipliers_off_circle: Option<Decision>,
    /// (iii) density of the group generated by `1, λ₁, …, λₙ`.
    pub tangent_group: Option<GroupClosure>,
}

impl HyperbolicityReport {
    pub fn tangent_group_dense(&self) -> Option<bool> {
        self.tangent_group
            .as_ref()
            .map(|g| g.classification == crate::germ::DensityClass::DenseInC)
    }
}

/// Combines per-point decisions: any `No` wins, then any `Borderline`.
fn all_of(ds: impl Iterator<Item = Decision>) -> Decision {
    ds.fold(Decision::Yes, |acc, d| match (acc, d) {
        (Decision::No, _) | (_, Decision::No) => Decision::No,
        (Decision::Borderline, _) | (_, Decision::Borderline) => Decision::Borderline,
        _ => Decision::Yes,
    })
}

pub fn hyperbolicity_report(f: &Foliation, density: &DensityConfig) -> HyperbolicityReport {
    let sings: Vec<InfinitySingularity> = match f.pl_property() {
        true => infinity_singularities(f).unwrap_or_default(),
        false => Vec::new(),
    };
    if !f.pl_property() || sings.is_empty() {
        return HyperbolicityReport {
            pl_property: f.pl_property(),
            multipliers_off_circle: None,
            tangent_group: None,
        };
    }
    let n = f.affine_degree() as usize;
    let lambdas: Vec<_> = sings.iter().take(n).map(|s| s.lambda).collect();
    HyperbolicityReport {
        pl_property: true,
        multipliers_off_circle: Some(all_of(sings.iter().map(|s| s.hyperbolic))),
        tangent_group: Some(tangent_group_density(&lambdas, density)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germ::DensityClass;
    use crate::Poly2;

    #[test]
    fn saddle_f2() {
        let f = Foliation::new(Poly2::y(), Poly2::x()).unwrap();
        let r = hyperbolicity_report(&f, &DensityConfig::default());
        assert!(r.pl_property);
        assert_eq!(r.multipliers_off_circle, Some(Decision::No));
        let class = r.tangent_group.unwrap().classification;
        assert_ne!(class, DensityClass::DenseInC);
    }

    #[test]
    fn radial_is_not_pl() {
        let f = Foliation::new(Poly2::x(), Poly2::y()).unwrap();
        let r = hyperbolicity_report(&f, &DensityConfig::default());
        assert!(!r.pl_property);
        assert!(r.multipliers_off_circle.is_none() && r.tangent_group.is_none());
    }
}
