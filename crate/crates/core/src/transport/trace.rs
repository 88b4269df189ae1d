use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::continuation::{continue_leaf, POLE_FLOOR};
use super::monodromy::{holonomy_at_infinity, InfinityLoops};
use super::path::PathSpec;
use super::rk::{integrate, RkConfig, RkError};
use super::TransportError;
use crate::foliation::{Chart, ChartForm};
use crate::Foliation;

/// How the trace chooses its complex-time directions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Schedule {
    /// Unit-speed segments in seeded random complex directions.
    RandomSegments,
    /// Each segment heads in the direction of steepest increase of the
    /// affine radius.
    Ascent,
    /// Random words in the standard loops around the singular points at
    /// infinity, applied to the transversal coordinate `u` on the section
    /// `v = const` of `U1`. Images outside `u_min ≤ |u| ≤ u_max` are
    /// rejected, which keeps the orbit from lingering next to the leaf at
    /// infinity.
    HolonomyWords { u_min: f64, u_max: f64 },
}

impl Schedule {
    /// Holonomy words kept in the annulus `0.05 ≤ |u| ≤ 0.5`.
    pub const DEFAULT_WORDS: Schedule = Schedule::HolonomyWords { u_min: 0.05, u_max: 0.5 };
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Section {
    /// `{x = x₀}` in the affine chart; hits are `y` values.
    Vertical { x: Complex64 },
    /// `{v = v₀}` in `U1`; hits are `u` values.
    AtInfinity { v: Complex64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceBudget {
    pub max_steps: usize,
    /// Total arc length in chart coordinates.
    pub max_arc_length: f64,
    /// The trace stops once the affine radius exceeds this.
    pub escape_radius: f64,
}

impl Default for TraceBudget {
    fn default() -> Self {
        Self {
            max_steps: 200_000,
            max_arc_length: 5_000.0,
            escape_radius: 1e3,
        }
    }
}

impl TraceBudget {
    pub fn zero() -> Self {
        Self {
            max_steps: 0,
            max_arc_length: 0.0,
            escape_radius: f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceConfig {
    pub budget: TraceBudget,
    pub schedule: Schedule,
    pub segment_length: f64,
    pub tol: f64,
    pub seed: u64,
    /// Distance to a section at which a hit is captured by a short
    /// continuation onto it.
    pub capture: f64,
}

impl Default for TraceConfig {
    fn default() -> Self {
        Self {
            budget: TraceBudget::default(),
            schedule: Schedule::RandomSegments,
            segment_length: 0.5,
            tol: 1e-9,
            seed: 0,
            capture: 0.05,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceStatus {
    Escaped,
    BudgetExhausted,
    SingularApproach,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub chart: Chart,
    pub z1: Complex64,
    pub z2: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceResult {
    pub points: Vec<TracePoint>,
    pub transversal_hits: Vec<Complex64>,
    /// Largest affine radius `√(|x|² + |y|²)` reached.
    pub escaped_radius: f64,
    /// Running maximum of the affine radius, one entry per segment.
    pub radius_log: Vec<f64>,
    pub status: TraceStatus,
    /// Holonomy letters rejected (pole on the loop or image too large).
    pub rejected: usize,
}

fn homogeneous(chart: Chart, a: Complex64, b: Complex64) -> [Complex64; 3] {
    let one = Complex64::new(1.0, 0.0);
    match chart {
        Chart::U0 => [one, a, b],
        Chart::U1 => [a, one, b],
        Chart::U2 => [a, b, one],
    }
}

fn in_chart(chart: Chart, z: [Complex64; 3]) -> (Complex64, Complex64) {
    match chart {
        Chart::U0 => (z[1] / z[0], z[2] / z[0]),
        Chart::U1 => (z[0] / z[1], z[2] / z[1]),
        Chart::U2 => (z[0] / z[2], z[1] / z[2]),
    }
}

fn chart_index(c: Chart) -> usize {
    match c {
        Chart::U0 => 0,
        Chart::U1 => 1,
        Chart::U2 => 2,
    }
}

const CHARTS: [Chart; 3] = [Chart::U0, Chart::U1, Chart::U2];
/// A chart is left once another homogeneous coordinate is this many times
/// larger than its own.
const HYSTERESIS: f64 = 2.0;
/// Relative field strength below which a segment is cut short. Along a ray
/// of complex time a leaf can fall into a node in finite arc length; the
/// reversed ray leads away from it.
const RETREAT: f64 = 1e-4;

fn affine_radius(chart: Chart, a: Complex64, b: Complex64) -> f64 {
    let z = homogeneous(chart, a, b);
    let num = (z[1].norm_sqr() + z[2].norm_sqr()).sqrt();
    if z[0].norm() == 0.0 {
        f64::INFINITY
    } else {
        num / z[0].norm()
    }
}

struct Field {
    forms: Vec<ChartForm>,
    abs: Vec<Vec<(i32, i32, f64)>>,
}

impl Field {
    fn new(f: &Foliation) -> Self {
        let forms: Vec<ChartForm> = CHARTS.iter().map(|&c| f.chart_form(c)).collect();
        let abs = forms
            .iter()
            .map(|fm| {
                fm.a.terms()
                    .chain(fm.b.terms())
                    .map(|((i, j), c)| (i as i32, j as i32, c.norm()))
                    .collect()
            })
            .collect();
        Self { forms, abs }
    }

    /// Leaf direction and its length relative to the size of the terms.
    fn direction(&self, chart: Chart, a: Complex64, b: Complex64) -> (Complex64, Complex64, f64) {
        let k = chart_index(chart);
        let (da, db) = self.forms[k].direction(a, b);
        let norm = (da.norm_sqr() + db.norm_sqr()).sqrt();
        let (ra, rb) = (a.norm(), b.norm());
        let size: f64 = self.abs[k].iter().map(|&(i, j, c)| c * ra.powi(i) * rb.powi(j)).sum();
        (da / norm, db / norm, norm / (1.0 + size))
    }

    /// Unit direction of the leaf, or `None` near a singular point.
    fn unit(&self, chart: Chart, a: Complex64, b: Complex64) -> Option<(Complex64, Complex64)> {
        let (ua, ub, strength) = self.direction(chart, a, b);
        (strength >= POLE_FLOOR).then_some((ua, ub))
    }

    fn strength(&self, chart: Chart, a: Complex64, b: Complex64) -> f64 {
        self.direction(chart, a, b).2
    }
}

/// Wirtinger gradient of the squared affine radius in chart coordinates.
fn radius_gradient(chart: Chart, a: Complex64, b: Complex64) -> (Complex64, Complex64) {
    match chart {
        Chart::U0 => (a.conj(), b.conj()),
        _ => {
            let a2 = a.norm_sqr();
            (-a.conj() * (1.0 + b.norm_sqr()) / (a2 * a2), b.conj() / a2)
        }
    }
}

/// Continues the leaf through `start` in complex time.
///
/// The trace never ends inside a bounded region with a claim of
/// completion: it stops only when the affine radius passes
/// `escape_radius`, when a singular point is approached, or when the budget
/// runs out, and reports which.
pub fn trace_leaf(
    f: &Foliation,
    start: (Complex64, Complex64),
    cfg: &TraceConfig,
    section: Option<Section>,
) -> Result<TraceResult, TransportError> {
    let mut res = TraceResult {
        points: Vec::new(),
        transversal_hits: Vec::new(),
        escaped_radius: (start.0.norm_sqr() + start.1.norm_sqr()).sqrt(),
        radius_log: Vec::new(),
        status: TraceStatus::BudgetExhausted,
        rejected: 0,
    };
    let field = Field::new(f);
    if field.unit(Chart::U0, start.0, start.1).is_none() {
        return Err(TransportError::SingularStart);
    }
    if cfg.budget.max_steps == 0 || cfg.budget.max_arc_length <= 0.0 {
        return Ok(res);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    match cfg.schedule {
        Schedule::HolonomyWords { u_min, u_max } => holonomy_words(f, start, cfg, section, (u_min, u_max), &mut rng, &mut res)?,
        _ => segments(f, &field, start, cfg, section, &mut rng, &mut res)?,
    }
    Ok(res)
}

fn segments(
    f: &Foliation,
    field: &Field,
    start: (Complex64, Complex64),
    cfg: &TraceConfig,
    section: Option<Section>,
    rng: &mut ChaCha8Rng,
    res: &mut TraceResult,
) -> Result<(), TransportError> {
    let mut chart = Chart::U0;
    let (mut a, mut b) = start;
    let mut steps = 0usize;
    let mut arc = 0.0;
    let mut armed = true;
    // Direction of a segment cut short near a singular point, and whether
    // the last attempt made no progress.
    let mut retreat: Option<f64> = None;
    let mut stalled = false;
    res.points.push(TracePoint { chart, z1: a, z2: b });
    let section_x = match section {
        Some(Section::Vertical { x }) => Some(x),
        _ => None,
    };
    let near_section = |chart: Chart, a: Complex64, armed: bool| -> bool {
        matches!((section_x, chart), (Some(x), Chart::U0) if armed && (a - x).norm() < cfg.capture)
    };
    while steps < cfg.budget.max_steps && arc < cfg.budget.max_arc_length {
        let theta = match (retreat.take(), cfg.schedule) {
            (Some(prev), _) => prev + std::f64::consts::PI,
            (None, Schedule::Ascent) => {
                let (ua, ub) = field.unit(chart, a, b).ok_or(TransportError::SingularStart)?;
                let (ga, gb) = radius_gradient(chart, a, b);
                let w = ga * ua + gb * ub;
                if w.norm() > 0.0 {
                    -w.arg()
                } else {
                    rng.gen::<f64>() * TAU
                }
            }
            (None, _) => rng.gen::<f64>() * TAU,
        };
        let rot = Complex64::from_polar(1.0, theta);
        let length = cfg.segment_length.min(cfg.budget.max_arc_length - arc);
        let rk = RkConfig {
            tol: cfg.tol,
            h_min_rel: 1e-12,
            max_steps: cfg.budget.max_steps - steps,
        };
        let cur = chart;
        let rhs = |_: f64, y: &[Complex64; 2]| {
            let (ua, ub) = field.unit(cur, y[0], y[1])?;
            Some([rot * ua, rot * ub])
        };
        let mut pts = Vec::new();
        let mut max_r: f64 = 0.0;
        let mut weak = false;
        let floor = RETREAT.min(field.strength(cur, a, b));
        let observer = |t: f64, y: &[Complex64; 2]| {
            weak = t > 0.0 && field.strength(cur, y[0], y[1]) < floor;
            pts.push(TracePoint { chart: cur, z1: y[0], z2: y[1] });
            max_r = max_r.max(affine_radius(cur, y[0], y[1]));
            let z = homogeneous(cur, y[0], y[1]);
            let own = z[chart_index(cur)].norm();
            let switch = z.iter().any(|c| c.norm() > HYSTERESIS * own);
            weak || switch || max_r >= cfg.budget.escape_radius || near_section(cur, y[0], armed)
        };
        let outcome = integrate(rhs, 0.0, length, [a, b], &rk, observer);
        res.points.extend(pts.iter().copied());
        res.escaped_radius = res.escaped_radius.max(max_r);
        let out = match outcome {
            Ok(o) => o,
            Err(RkError::MaxSteps { .. }) => {
                res.radius_log.push(res.escaped_radius);
                break;
            }
            Err(_) => {
                res.radius_log.push(res.escaped_radius);
                if stalled {
                    res.status = TraceStatus::SingularApproach;
                    return Ok(());
                }
                stalled = true;
                steps += 1;
                retreat = Some(theta);
                continue;
            }
        };
        stalled = false;
        if weak {
            retreat = Some(theta);
        }
        steps += out.steps;
        arc += out.t;
        a = out.y[0];
        b = out.y[1];
        res.radius_log.push(res.escaped_radius);
        if res.escaped_radius >= cfg.budget.escape_radius {
            res.status = TraceStatus::Escaped;
            return Ok(());
        }
        if let Some(x) = section_x {
            if chart == Chart::U0 {
                if near_section(chart, a, armed) {
                    let path = PathSpec::line(Chart::U0, a, x);
                    if let Ok(h) = continue_leaf(f, (a, b), &path, cfg.tol) {
                        res.transversal_hits.push(h.endpoint);
                        steps += h.steps;
                    }
                    armed = false;
                } else if (a - x).norm() > 2.0 * cfg.capture {
                    armed = true;
                }
            }
        }
        let z = homogeneous(chart, a, b);
        let best = (0..3).max_by(|&i, &j| z[i].norm().total_cmp(&z[j].norm())).unwrap();
        if z[best].norm() > HYSTERESIS * z[chart_index(chart)].norm() {
            chart = CHARTS[best];
            (a, b) = in_chart(chart, z);
            if chart != Chart::U0 {
                armed = true;
            }
        }
    }
    Ok(())
}

fn holonomy_words(
    f: &Foliation,
    start: (Complex64, Complex64),
    cfg: &TraceConfig,
    section: Option<Section>,
    (u_min, u_max): (f64, f64),
    rng: &mut ChaCha8Rng,
    res: &mut TraceResult,
) -> Result<(), TransportError> {
    let loops = InfinityLoops::for_foliation(f)?;
    let base = match section {
        Some(Section::AtInfinity { v }) => v,
        _ => loops.base,
    };
    let loops = InfinityLoops { base, ..loops };
    let paths: Vec<PathSpec> = (0..loops.roots.len())
        .map(|j| loops.loop_path(j, loops.radius))
        .collect::<Result<_, _>>()?;
    if start.0.norm() == 0.0 {
        return Err(TransportError::SingularStart);
    }
    let (u_s, v_s) = (start.0.inv(), start.1 / start.0);
    let mut steps = 0usize;
    let mut arc = 0.0;
    let approach = PathSpec::line(Chart::U1, v_s, base);
    let mut u = holonomy_at_infinity(f, &approach, u_s, cfg.tol)?.endpoint;
    let record = |u: Complex64, res: &mut TraceResult| {
        res.transversal_hits.push(u);
        res.points.push(TracePoint { chart: Chart::U1, z1: u, z2: base });
        res.escaped_radius = res.escaped_radius.max(affine_radius(Chart::U1, u, base));
        res.radius_log.push(res.escaped_radius);
    };
    record(u, res);
    while steps < cfg.budget.max_steps && arc < cfg.budget.max_arc_length {
        let j = rng.gen_range(0..paths.len());
        let forward = rng.gen::<bool>();
        let path = if forward { paths[j].clone() } else { paths[j].reversed() };
        arc += path.length();
        match holonomy_at_infinity(f, &path, u, cfg.tol) {
            Ok(h) if (u_min..=u_max).contains(&h.endpoint.norm()) => {
                steps += h.steps;
                u = h.endpoint;
                record(u, res);
            }
            Ok(h) => {
                steps += h.steps;
                res.rejected += 1;
            }
            Err(_) => {
                steps += 1;
                res.rejected += 1;
            }
        }
    }
    Ok(())
}
