use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Closure type of a finitely generated additive subgroup of `ℂ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityClass {
    Trivial,
    DiscreteLattice,
    LineDiscrete,
    LineDense,
    DenseInC,
    Undetermined,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityConfig {
    /// Cell size of the coverage grid on the fundamental window.
    pub eps: f64,
    /// Bound on the integer coefficients searched.
    pub budget: i64,
}

impl Default for DensityConfig {
    fn default() -> Self {
        Self { eps: 0.02, budget: 50 }
    }
}

/// Residual below which an integer relation counts as exact.
const RELATION_TOL: f64 = 1e-9;
/// Residuals between `RELATION_TOL` and this are ambiguous.
const NEAR_TOL: f64 = 1e-6;
const ZERO_REL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupWitness {
    /// Dimension of the real span of the generators.
    pub real_rank: usize,
    /// Indices of the generators used as the real basis.
    pub basis: Vec<usize>,
    /// Integer relations found; each vector pairs with the reduced
    /// coordinates of the remaining generators.
    pub relations: Vec<Vec<i64>>,
    /// Fraction of `eps`-cells of the window hit by combinations.
    pub coverage: f64,
    /// Smallest residual in the ambiguous band, if any.
    pub near_miss: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupClosure {
    pub classification: DensityClass,
    pub witness: GroupWitness,
}

fn frac_dist(x: f64) -> f64 {
    (x - x.round()).abs()
}

fn wrap(x: f64) -> f64 {
    x - x.floor()
}

fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

/// Grid coverage of `[0,1)^dim` by the reduced points.
fn coverage(points: &[Vec<f64>], eps: f64, dim: usize) -> f64 {
    let cells = (1.0 / eps).ceil() as usize;
    let total = cells.pow(dim as u32);
    let mut hit = vec![false; total];
    for p in points {
        let mut idx = 0;
        for &x in p.iter().take(dim) {
            let c = ((wrap(x) * cells as f64) as usize).min(cells - 1);
            idx = idx * cells + c;
        }
        hit[idx] = true;
    }
    hit.iter().filter(|&&h| h).count() as f64 / total as f64
}

/// All combinations `Σ nᵢ vᵢ` with `|nᵢ| ≤ b`, the box shrunk so that at
/// most about a million points are produced.
fn combinations(vs: &[Vec<f64>], budget: i64, dim: usize) -> Vec<Vec<f64>> {
    let mut b = budget;
    while vs.len() > 1 && ((2 * b + 1) as f64).powi(vs.len() as i32) > 1e6 {
        b -= 1;
    }
    let mut pts = vec![vec![0.0; dim]];
    for v in vs {
        let mut next = Vec::with_capacity(pts.len() * (2 * b as usize + 1));
        for p in &pts {
            for n in -b..=b {
                next.push(p.iter().zip(v).map(|(x, y)| wrap(x + n as f64 * y)).collect());
            }
        }
        pts = next;
    }
    pts
}

struct Search {
    relations: Vec<Vec<i64>>,
    near_miss: Option<f64>,
}

/// Integer vectors `q` (up to sign) with `|qⱼ| ≤ budget` and
/// `q · v ∈ ℤ` for every `v`.
fn relation_search(vs: &[Vec<f64>], dim: usize, budget: i64) -> Search {
    let mut s = Search {
        relations: Vec::new(),
        near_miss: None,
    };
    let mut consider = |q: Vec<i64>| {
        let r = vs
            .iter()
            .map(|v| frac_dist(q.iter().zip(v).map(|(&a, &x)| a as f64 * x).sum()))
            .fold(0.0, f64::max);
        if r < RELATION_TOL {
            s.relations.push(q);
        } else if r < NEAR_TOL {
            s.near_miss = Some(s.near_miss.map_or(r, |m: f64| m.min(r)));
        }
    };
    match dim {
        1 => (1..=budget).for_each(|q| consider(vec![q])),
        _ => {
            for q1 in 0..=budget {
                let lo = if q1 == 0 { 1 } else { -budget };
                for q2 in lo..=budget {
                    consider(vec![q1, q2]);
                }
            }
        }
    }
    s
}

fn integer_rank(rel: &[Vec<i64>]) -> usize {
    match rel.len() {
        0 => 0,
        _ => {
            let first = &rel[0];
            let independent = rel
                .iter()
                .any(|q| q.len() == 2 && first.len() == 2 && first[0] * q[1] - first[1] * q[0] != 0);
            1 + usize::from(independent)
        }
    }
}

/// Classifies the closure of `Σ ℤ gᵢ ⊂ ℂ`.
///
/// The real span fixes the ambient dimension. Generators beyond a real
/// basis are reduced to the torus `ℝᵈ/ℤᵈ`, where the closure is decided by
/// the integer relations they satisfy: none means dense, a full set means
/// discrete, one (in the plane) means a discrete family of dense lines. A
/// relation that only nearly holds, or a budget too small to resolve the
/// `eps` grid, gives `Undetermined`.
pub fn additive_group_density(gens: &[Complex64], cfg: &DensityConfig) -> GroupClosure {
    let scale = gens.iter().map(|g| g.norm()).fold(0.0, f64::max);
    let idx: Vec<usize> = (0..gens.len()).filter(|&i| gens[i].norm() > ZERO_REL * scale).collect();
    let mut witness = GroupWitness {
        real_rank: 0,
        basis: Vec::new(),
        relations: Vec::new(),
        coverage: 0.0,
        near_miss: None,
    };
    if idx.is_empty() {
        return GroupClosure {
            classification: DensityClass::Trivial,
            witness,
        };
    }
    // Best-conditioned pair, measured by the normalised area.
    let mut best = (0.0, idx[0], idx[0]);
    for (a, &i) in idx.iter().enumerate() {
        for &j in &idx[a + 1..] {
            let d = cross(gens[i], gens[j]).abs() / (gens[i].norm() * gens[j].norm());
            if d > best.0 {
                best = (d, i, j);
            }
        }
    }
    let (dim, basis) = if best.0 > 1e-9 {
        (2, vec![best.1, best.2])
    } else {
        let i = *idx.iter().max_by(|&&a, &&b| gens[a].norm().total_cmp(&gens[b].norm())).unwrap();
        (1, vec![i])
    };
    witness.real_rank = dim;
    witness.basis = basis.clone();
    let coords = |g: Complex64| -> Vec<f64> {
        if dim == 1 {
            vec![(g / gens[basis[0]]).re]
        } else {
            let (a, b) = (gens[basis[0]], gens[basis[1]]);
            let det = cross(a, b);
            vec![cross(g, b) / det, cross(a, g) / det]
        }
    };
    let rest: Vec<Vec<f64>> = idx
        .iter()
        .filter(|i| !basis.contains(i))
        .map(|&i| coords(gens[i]).into_iter().map(wrap).collect())
        .collect();
    witness.coverage = coverage(&combinations(&rest, cfg.budget, dim), cfg.eps, dim);
    let search = relation_search(&rest, dim, cfg.budget);
    let rank = integer_rank(&search.relations);
    witness.near_miss = search.near_miss;
    witness.relations = search.relations;
    let resolved = cfg.budget as f64 >= 1.0 / (2.0 * cfg.eps);
    let classification = match (dim, rank) {
        (1, 1) | (2, 2) => DensityClass::DiscreteLattice,
        (2, 1) => DensityClass::LineDiscrete,
        _ if !resolved || witness.near_miss.is_some() => DensityClass::Undetermined,
        (1, _) => DensityClass::LineDense,
        _ => DensityClass::DenseInC,
    };
    GroupClosure {
        classification,
        witness,
    }
}

/// Density of the group generated by `1` and the characteristic numbers;
/// its image under `exp(2πi ·)` is the tangent group.
pub fn tangent_group_density(lambdas: &[Complex64], cfg: &DensityConfig) -> GroupClosure {
    let mut gens = vec![Complex64::new(1.0, 0.0)];
    gens.extend_from_slice(lambdas);
    additive_group_density(&gens, cfg)
}
