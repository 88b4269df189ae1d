use std::collections::HashMap;

use num_complex::Complex64;

use super::{GermError, Jet};

/// A generator of a pseudo-group: a polynomial germ valid on `|z| ≤ radius`
/// together with its local inverse.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    pub jet: Jet<f64>,
    pub radius: f64,
    inverse_guess: Jet<f64>,
    /// `M` with `|f(z) − νz| ≤ M|z|²` on `|z| ≤ radius`.
    m: f64,
}

impl Generator {
    pub fn new(jet: Jet<f64>, radius: f64) -> Self {
        let inverse_guess = jet.invert();
        let m = jet.quadratic_bound(radius);
        Self {
            jet,
            radius,
            inverse_guess,
            m,
        }
    }

    pub fn linear(nu: Complex64, radius: f64) -> Result<Self, GermError> {
        Ok(Self::new(Jet::new(vec![nu])?, radius))
    }

    /// Image radius bound for `|z| ≤ r`, or `None` if the letter is not
    /// certified on that disk.
    fn bound(&self, exp: i8, r: f64) -> Option<f64> {
        if r > self.radius {
            return None;
        }
        let nu = self.jet.multiplier().norm();
        if exp > 0 {
            return Some(nu * r + self.m * r * r);
        }
        // |f(w)| ≥ |ν||w| − M|w|², so f⁻¹ maps |z| ≤ r into |w| ≤ s with
        // s the small root of M s² − |ν| s + r = 0.
        if self.m == 0.0 {
            return Some(r / nu);
        }
        let disc = nu * nu - 4.0 * self.m * r;
        if disc < 0.0 {
            return None;
        }
        let s = 2.0 * r / (nu + disc.sqrt());
        (s <= self.radius).then_some(s)
    }

    fn apply(&self, exp: i8, z: Complex64) -> Complex64 {
        if exp > 0 {
            return self.jet.eval(z);
        }
        let mut w = self.inverse_guess.eval(z);
        if self.m == 0.0 {
            return z / self.jet.multiplier();
        }
        let deriv = self.derivative();
        for _ in 0..50 {
            let step = (self.jet.eval(w) - z) / deriv.iter().rev().fold(Complex64::default(), |a, &c| a * w + c);
            w -= step;
            if step.norm() <= 1e-16 * (1.0 + w.norm()) {
                break;
            }
        }
        w
    }

    fn derivative(&self) -> Vec<Complex64> {
        self.jet.coeffs().iter().enumerate().map(|(k, &c)| c * (k + 1) as f64).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub gen: usize,
    /// `+1` or `−1`.
    pub exp: i8,
}

/// A reduced word, applied left to right, with a certified domain.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoWord {
    pub letters: Vec<Letter>,
    /// Every `|z| ≤ domain_radius` keeps all intermediate images inside
    /// the reference disk.
    pub domain_radius: f64,
}

impl PseudoWord {
    /// Evaluates the letters left to right.
    pub fn eval(&self, gens: &[Generator], z: Complex64) -> Complex64 {
        self.letters.iter().fold(z, |w, l| gens[l.gen].apply(l.exp, w))
    }

    /// The jet of the composed germ (the last letter applied outermost).
    pub fn value(&self, gens: &[Generator], order: usize) -> Jet<f64> {
        self.letters.iter().fold(Jet::identity(order), |acc, l| {
            let g = &gens[l.gen];
            let j = if l.exp > 0 { g.jet.with_order(order) } else { g.inverse_guess.with_order(order) };
            j.compose(&acc)
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitPoint {
    pub word: PseudoWord,
    pub z: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitConfig {
    pub max_word_len: usize,
    pub reference_radius: f64,
    pub max_points: usize,
    /// Points closer than this are identified.
    pub dedupe_tol: f64,
}

impl Default for OrbitConfig {
    fn default() -> Self {
        Self {
            max_word_len: 12,
            reference_radius: 1.0,
            max_points: 200_000,
            dedupe_tol: 1e-12,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitReport {
    pub points: Vec<OrbitPoint>,
    /// Extensions rejected because the domain could not be certified.
    pub pruned: usize,
    /// Extensions landing on an already known point.
    pub duplicates: usize,
    /// Whether `max_points` stopped the enumeration.
    pub truncated: bool,
}

/// Largest radius `d ∈ [lo, hi]` for which `word` keeps every image inside
/// `hi`, or `None` if even `lo` fails.
fn domain_radius(gens: &[Generator], letters: &[Letter], lo: f64, hi: f64) -> Option<f64> {
    let ok = |d: f64| {
        let mut r = d;
        for l in letters {
            match gens[l.gen].bound(l.exp, r) {
                Some(next) if next < hi => r = next,
                _ => return false,
            }
        }
        true
    };
    if !ok(lo) {
        return None;
    }
    let (mut a, mut b) = (lo, hi);
    for _ in 0..48 {
        let mid = 0.5 * (a + b);
        if ok(mid) {
            a = mid;
        } else {
            b = mid;
        }
    }
    Some(a)
}

struct PointIndex {
    cell: f64,
    tol: f64,
    map: HashMap<(i64, i64), Vec<Complex64>>,
}

impl PointIndex {
    fn new(tol: f64) -> Self {
        Self {
            cell: (tol * 1e3).max(1e-9),
            tol,
            map: HashMap::new(),
        }
    }

    fn key(&self, z: Complex64) -> (i64, i64) {
        ((z.re / self.cell).floor() as i64, (z.im / self.cell).floor() as i64)
    }

    /// Inserts `z` unless a point within `tol` is already present.
    fn insert(&mut self, z: Complex64) -> bool {
        let (a, b) = self.key(z);
        for da in -1..=1 {
            for db in -1..=1 {
                if let Some(v) = self.map.get(&(a + da, b + db)) {
                    if v.iter().any(|w| (w - z).norm() <= self.tol) {
                        return false;
                    }
                }
            }
        }
        self.map.entry((a, b)).or_default().push(z);
        true
    }
}

/// Breadth-first enumeration of the pseudo-group orbit of `z0` by reduced
/// words of length up to `max_word_len`.
///
/// A word is extended only while the disk bounds `|f(z)| ≤ |ν||z| + M|z|²`
/// (and the matching lower bound for inverse letters) certify that every
/// intermediate image of a disk containing `z0` stays inside the reference
/// disk. Words reaching an already listed point are not extended, so the
/// result lists each orbit point once, with the first word that reached it.
pub fn pseudo_orbit(gens: &[Generator], z0: Complex64, cfg: &OrbitConfig) -> OrbitReport {
    let big_r = cfg.reference_radius;
    let mut index = PointIndex::new(cfg.dedupe_tol);
    let mut report = OrbitReport {
        points: Vec::new(),
        pruned: 0,
        duplicates: 0,
        truncated: false,
    };
    if z0.norm() >= big_r {
        return report;
    }
    let root = OrbitPoint {
        word: PseudoWord {
            letters: Vec::new(),
            domain_radius: big_r,
        },
        z: z0,
    };
    index.insert(z0);
    report.points.push(root);
    let mut frontier = vec![0usize];
    let lo = z0.norm();
    for _len in 0..cfg.max_word_len {
        let mut next = Vec::new();
        for &idx in &frontier {
            let parent = report.points[idx].clone();
            for gen in 0..gens.len() {
                for exp in [1i8, -1] {
                    if parent.word.letters.last() == Some(&Letter { gen, exp: -exp }) {
                        continue;
                    }
                    let mut letters = parent.word.letters.clone();
                    letters.push(Letter { gen, exp });
                    let Some(d) = domain_radius(gens, &letters, lo, big_r) else {
                        report.pruned += 1;
                        continue;
                    };
                    let z = gens[gen].apply(exp, parent.z);
                    if !index.insert(z) {
                        report.duplicates += 1;
                        continue;
                    }
                    if report.points.len() >= cfg.max_points {
                        report.truncated = true;
                        return report;
                    }
                    report.points.push(OrbitPoint {
                        word: PseudoWord { letters, domain_radius: d },
                        z,
                    });
                    next.push(report.points.len() - 1);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    report
}
