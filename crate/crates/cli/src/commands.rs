use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use shfc::foliation::format::parse_foliation;
use shfc::foliation::sample::random_complex;
use shfc::foliation::{invariant_lines, Pencil};
use shfc::germ::format::{parse_generators, parse_jet, parse_pseudo_group, GermFormatError};
use shfc::germ::{
    additive_group_density, contraction_disk, koenigs_iterative, koenigs_jet, pseudo_orbit, AnalyticGerm, DensityConfig,
    GermError, InverseGerm, DEFAULT_ORDER, OrbitConfig, PolyGerm,
};
use shfc::metric::{curvature_fd_check, leaf_curvature, MetricError};
use shfc::singular::{
    affine_singularities, hyperbolicity_report, infinity_singularities, residue_identity_defect, SearchBox,
    SingularError,
};
use shfc::transport::{
    density_statistic, infinity_monodromy, multiplier_by_integral, trace_leaf, Disk, InfinityLoops, Schedule, Section,
    TraceBudget, TraceConfig, TransportError,
};
use shfc::Foliation;

use crate::report::{Report, Table, Value};
use crate::{CliError, Command, Common, ScheduleArg};

fn read_input(common: &Common) -> Result<String, CliError> {
    let path = common.input.as_ref().ok_or_else(|| CliError::Parse("--input is required".into()))?;
    std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn foliation(common: &Common) -> Result<Foliation, CliError> {
    parse_foliation(&read_input(common)?).map_err(|e| CliError::Parse(e.to_string()))
}

fn germ_parse(e: GermFormatError) -> CliError {
    CliError::Parse(e.to_string())
}

fn from_germ(e: GermError) -> CliError {
    match e {
        GermError::NotHyperbolic | GermError::NotContracting => CliError::Precondition(e.to_string()),
        GermError::EmptyJet | GermError::NonFinite | GermError::NotInvertible => CliError::Parse(e.to_string()),
        GermError::ContractionRadiusNotFound | GermError::IterationLimit => CliError::Numeric(e.to_string()),
    }
}

fn from_singular(e: SingularError) -> CliError {
    match e {
        SingularError::InfinityNotLeaf
        | SingularError::NonSimpleRoot(_)
        | SingularError::NotPl
        | SingularError::NotHyperbolic => CliError::Precondition(e.to_string()),
        SingularError::ResultantDegenerate | SingularError::ResonantDivisor(_) | SingularError::Poly(_) => {
            CliError::Numeric(e.to_string())
        }
    }
}

fn from_transport(e: TransportError) -> CliError {
    match e {
        TransportError::Singular(s) => from_singular(s),
        TransportError::NotPl
        | TransportError::RadiusTooLarge
        | TransportError::IndexOutOfRange
        | TransportError::InvalidPath
        | TransportError::SingularStart => CliError::Precondition(e.to_string()),
        TransportError::PoleEncountered { .. }
        | TransportError::StepUnderflow
        | TransportError::ToleranceNotMet
        | TransportError::QuadratureFailed => CliError::Numeric(e.to_string()),
    }
}

fn from_metric(e: MetricError) -> CliError {
    match e {
        MetricError::SingularPoint => CliError::Precondition(e.to_string()),
        MetricError::Transport(t) => from_transport(t),
    }
}

pub(crate) fn dispatch(common: &Common, command: &Command) -> Result<Report, CliError> {
    match command {
        Command::Classify => classify(&foliation(common)?),
        Command::Sing { half_width, grid, eps, budget } => sing(
            &foliation(common)?,
            SearchBox { lo: -half_width, hi: *half_width },
            *grid,
            &DensityConfig { eps: *eps, budget: *budget },
        ),
        Command::Monodromy { loop_radius } => monodromy(&foliation(common)?, *loop_radius, common.tol),
        Command::Koenigs { jet_order, samples } => koenigs(common, *jet_order, *samples),
        Command::Orbit { word_len, start, eps, window, budget } => {
            let gens = parse_pseudo_group(&read_input(common)?).map_err(germ_parse)?;
            let cfg = OrbitConfig {
                max_word_len: *word_len,
                max_points: *budget,
                ..Default::default()
            };
            let r = pseudo_orbit(&gens, *start, &cfg);
            let pts: Vec<Complex64> = r.points.iter().map(|p| p.z).collect();
            let mut rep = Report::new("orbit");
            rep.field("points", r.points.len());
            rep.field("pruned", r.pruned);
            rep.field("duplicates", r.duplicates);
            rep.field("truncated", r.truncated);
            rep.field("density_statistic", density_statistic(&pts, Disk { center: Complex64::default(), radius: *window }, *eps));
            let mut t = Table::new("orbit", &["word", "z"]);
            for p in &r.points {
                let word: Vec<String> = p
                    .word
                    .letters
                    .iter()
                    .map(|l| if l.exp > 0 { format!("g{}", l.gen) } else { format!("g{}^-1", l.gen) })
                    .collect();
                let word = if word.is_empty() { "e".to_owned() } else { word.join(".") };
                t.push(vec![word.into(), p.z.into()]);
            }
            rep.tables.push(t);
            Ok(rep)
        }
        Command::Density { eps, budget } => {
            let gens = parse_generators(&read_input(common)?).map_err(germ_parse)?;
            if !(*eps > 0.0) || *budget < 1 {
                return Err(CliError::Precondition("eps and budget must be positive".into()));
            }
            let g = additive_group_density(&gens, &DensityConfig { eps: *eps, budget: *budget });
            let mut rep = Report::new("density");
            rep.field("classification", serde_json::to_value(g.classification).ok().and_then(|v| v.as_str().map(str::to_owned)));
            rep.field("real_rank", g.witness.real_rank);
            rep.field("coverage", g.witness.coverage);
            rep.field("near_miss", g.witness.near_miss);
            let mut t = Table::new("relations", &["coefficients"]);
            for r in &g.witness.relations {
                t.push(vec![r.iter().map(i64::to_string).collect::<Vec<_>>().join(" ").into()]);
            }
            rep.tables.push(t);
            Ok(rep)
        }
        Command::Trace { start, budget, arc, schedule, section_x } => {
            trace(common, &foliation(common)?, *start, *budget, *arc, *schedule, *section_x)
        }
        Command::Curvature { half_width, grid, fd_step } => curvature(&foliation(common)?, *half_width, *grid, *fd_step),
    }
}

fn classify(f: &Foliation) -> Result<Report, CliError> {
    let mut rep = Report::new("classify");
    rep.field("name", f.name().map(str::to_owned));
    rep.field("affine_degree", f.affine_degree());
    rep.field("geometric_degree", f.geometric_degree());
    rep.field("infinity_is_leaf", f.infinity_is_leaf());
    rep.field("pl_property", f.pl_property());
    rep.field("global_vector_field", f.is_global_vector_field());
    let (by_geometric, by_affine) = f.moduli_dimensions();
    rep.field("moduli_dimension_geometric", by_geometric);
    rep.field("moduli_dimension_affine", by_affine);
    let lines = invariant_lines(f);
    rep.field(
        "pencil",
        lines.pencil.map(|p| match p {
            Pencil::Point(x, y) => format!("lines through ({}, {})", Value::from(x).text(), Value::from(y).text()),
            Pencil::Direction(a, b) => format!("lines along ({}, {})", Value::from(a).text(), Value::from(b).text()),
        }),
    );
    let mut t = Table::new("invariant_lines", &["alpha", "beta", "gamma"]);
    for l in &lines.lines {
        t.push(vec![l.coeff(1, 0).into(), l.coeff(0, 1).into(), l.coeff(0, 0).into()]);
    }
    rep.tables.push(t);
    Ok(rep)
}

fn sing(f: &Foliation, search: SearchBox, grid: usize, density: &DensityConfig) -> Result<Report, CliError> {
    let mut rep = Report::new("sing");
    rep.field("infinity_is_leaf", f.infinity_is_leaf());
    rep.field("pl_property", f.pl_property());
    if f.infinity_is_leaf() {
        let sings = infinity_singularities(f).map_err(from_singular)?;
        rep.field("points_at_infinity", sings.len());
        let defect = if f.pl_property() { Some(residue_identity_defect(f).map_err(from_singular)?) } else { None };
        rep.field("residue_defect", defect);
        let h = hyperbolicity_report(f, density);
        rep.field("multipliers_off_circle", h.multipliers_off_circle.map(|d| format!("{d:?}").to_lowercase()));
        rep.field(
            "tangent_group",
            h.tangent_group
                .as_ref()
                .and_then(|g| serde_json::to_value(g.classification).ok())
                .and_then(|v| v.as_str().map(str::to_owned)),
        );
        let mut t = Table::new("infinity", &["v", "lambda", "multiplier", "hyperbolic"]);
        for s in &sings {
            t.push(vec![s.a.into(), s.lambda.into(), s.multiplier.into(), format!("{:?}", s.hyperbolic).to_lowercase().into()]);
        }
        rep.tables.push(t);
    }
    let affine = affine_singularities(f, search, grid).map_err(from_singular)?;
    rep.field("affine_points", affine.singularities.len());
    rep.field("bezout_bound", affine.bezout_bound);
    let mut t = Table::new("affine", &["x", "y", "eigenvalue_1", "eigenvalue_2", "class"]);
    for s in &affine.singularities {
        let class = serde_json::to_value(s.classification).ok().and_then(|v| v.as_str().map(str::to_owned));
        t.push(vec![s.location.0.into(), s.location.1.into(), s.eigenvalues.0.into(), s.eigenvalues.1.into(), class.into()]);
    }
    rep.tables.push(t);
    Ok(rep)
}

fn monodromy(f: &Foliation, radius: Option<f64>, tol: f64) -> Result<Report, CliError> {
    let sings = infinity_singularities(f).map_err(from_singular)?;
    let loops = InfinityLoops::for_foliation(f).map_err(from_transport)?;
    let rows: Vec<Result<Vec<Value>, CliError>> = (0..sings.len())
        .into_par_iter()
        .map(|j| {
            let s = &sings[j];
            let var = infinity_monodromy(f, j, radius, tol).map_err(from_transport)?;
            let int = multiplier_by_integral(f, j, radius).map_err(from_transport)?;
            let m = [s.multiplier, var.multiplier_variational, int];
            let spread = (0..3)
                .flat_map(|a| (a + 1..3).map(move |b| (a, b)))
                .map(|(a, b)| (m[a] - m[b]).norm())
                .fold(0.0, f64::max);
            Ok(vec![j.into(), s.a.into(), s.lambda.into(), m[0].into(), m[1].into(), m[2].into(), spread.into(), var.steps.into()])
        })
        .collect();
    let mut rep = Report::new("monodromy");
    rep.field("base_point", loops.base);
    rep.field("loop_radius", radius.unwrap_or(loops.radius));
    let mut t = Table::new(
        "multipliers",
        &["loop", "v", "lambda", "analytic", "variational", "integral", "max_difference", "steps"],
    );
    let mut worst: f64 = 0.0;
    for r in rows {
        let r = r?;
        if let Value::Real(d) = r[6] {
            worst = worst.max(d);
        }
        t.push(r);
    }
    rep.field("max_difference", worst);
    rep.tables.push(t);
    Ok(rep)
}

fn koenigs(common: &Common, order: Option<usize>, samples: usize) -> Result<Report, CliError> {
    let mut jet = parse_jet(&read_input(common)?).map_err(germ_parse)?;
    let order = order.unwrap_or(jet.order().max(DEFAULT_ORDER));
    if order == 0 {
        return Err(CliError::Precondition("--jet-order must be positive".into()));
    }
    jet = jet.with_order(order);
    let zeta = koenigs_jet(&jet).map_err(from_germ)?;
    let conj = jet.conjugate_by(&zeta);
    let residual = (2..=conj.order()).map(|k| conj.coeff(k).norm()).fold(0.0, f64::max);
    let nu = jet.multiplier();
    let germ: Box<dyn AnalyticGerm + Sync> = if nu.norm() < 1.0 {
        Box::new(PolyGerm { jet: jet.clone(), radius: 1.0 })
    } else {
        Box::new(InverseGerm::new(jet.clone(), 1.0))
    };
    let disk = contraction_disk(germ.as_ref()).map_err(from_germ)?;
    let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
    let points: Vec<Complex64> = (0..samples).map(|_| random_complex(&mut rng) * (0.5 * disk.r / 2f64.sqrt())).collect();
    let rows: Vec<Result<Vec<Value>, CliError>> = points
        .par_iter()
        .map(|&z| {
            let it = koenigs_iterative(germ.as_ref(), z, 100_000, 1e-13).map_err(from_germ)?;
            let jv = zeta.eval(z);
            Ok(vec![z.into(), jv.into(), it.value.into(), (jv - it.value).norm().into(), it.error_bound.into()])
        })
        .collect();
    let mut rep = Report::new("koenigs");
    rep.field("multiplier", nu);
    rep.field("order", jet.order());
    rep.field("conjugation_residual", residual);
    rep.field("contraction_radius", disk.r);
    let mut z = Table::new("zeta", &["k", "coefficient"]);
    for k in 1..=zeta.order() {
        z.push(vec![k.into(), zeta.coeff(k).into()]);
    }
    let mut t = Table::new("spot_checks", &["z", "jet", "iterative", "difference", "error_bound"]);
    let mut worst: f64 = 0.0;
    for r in rows {
        let r = r?;
        if let Value::Real(d) = r[3] {
            worst = worst.max(d);
        }
        t.push(r);
    }
    rep.field("max_spot_difference", worst);
    rep.tables.push(z);
    rep.tables.push(t);
    Ok(rep)
}

fn trace(
    common: &Common,
    f: &Foliation,
    start: Option<(Complex64, Complex64)>,
    budget: usize,
    arc: f64,
    schedule: ScheduleArg,
    section_x: Option<Complex64>,
) -> Result<Report, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
    let start = match start {
        Some(p) => p,
        None => loop {
            let p = (random_complex(&mut rng), random_complex(&mut rng));
            let (a, b) = f.field(p.0, p.1);
            if a.norm() + b.norm() > 1e-6 * f.coeff_scale() {
                break p;
            }
        },
    };
    let (schedule, section) = match schedule {
        ScheduleArg::Random => (Schedule::RandomSegments, section_x.map(|x| Section::Vertical { x })),
        ScheduleArg::Ascent => (Schedule::Ascent, section_x.map(|x| Section::Vertical { x })),
        ScheduleArg::Words => (Schedule::DEFAULT_WORDS, None),
    };
    let cfg = TraceConfig {
        budget: TraceBudget { max_steps: budget, max_arc_length: arc, ..Default::default() },
        schedule,
        tol: common.tol,
        seed: common.seed,
        ..Default::default()
    };
    let r = trace_leaf(f, start, &cfg, section).map_err(from_transport)?;
    let mut rep = Report::new("trace");
    rep.field("start_x", start.0);
    rep.field("start_y", start.1);
    rep.field("status", snake(&format!("{:?}", r.status)));
    rep.field("escaped_radius", r.escaped_radius);
    rep.field("segments", r.radius_log.len());
    rep.field("rejected", r.rejected);
    rep.field("hits", r.transversal_hits.len());
    let mut hits = Table::new("hits", &["coordinate"]);
    for &h in &r.transversal_hits {
        hits.push(vec![h.into()]);
    }
    let mut pts = Table::new("points", &["chart", "z1", "z2"]);
    for p in &r.points {
        pts.push(vec![format!("{:?}", p.chart).into(), p.z1.into(), p.z2.into()]);
    }
    rep.tables.push(hits);
    rep.tables.push(pts);
    Ok(rep)
}

fn curvature(f: &Foliation, half_width: f64, grid: usize, fd_step: Option<f64>) -> Result<Report, CliError> {
    if grid == 0 || !(half_width > 0.0) {
        return Err(CliError::Precondition("grid and box must be positive".into()));
    }
    let coord = |i: usize| if grid == 1 { 0.0 } else { -half_width + 2.0 * half_width * i as f64 / (grid - 1) as f64 };
    let cells: Vec<(usize, usize)> = (0..grid).flat_map(|i| (0..grid).map(move |k| (i, k))).collect();
    let rows: Vec<Result<Vec<Value>, CliError>> = cells
        .par_iter()
        .map(|&(i, k)| {
            let p = (Complex64::new(coord(i), 0.0), Complex64::new(coord(k), 0.0));
            let kappa = match leaf_curvature(f, p) {
                Ok(v) => Some(v),
                Err(MetricError::SingularPoint) => None,
                Err(e) => return Err(from_metric(e)),
            };
            let fd = match (kappa, fd_step) {
                (Some(_), Some(h)) => Some(curvature_fd_check(f, p, h).map_err(from_metric)?),
                _ => None,
            };
            Ok(vec![p.0.re.into(), p.1.re.into(), kappa.into(), fd.into()])
        })
        .collect();
    let mut rep = Report::new("curvature");
    rep.field("geometric_degree", f.geometric_degree());
    let mut t = Table::new("curvature", &["x", "y", "kappa", "finite_difference"]);
    for r in rows {
        t.push(r?);
    }
    rep.tables.push(t);
    Ok(rep)
}

fn snake(name: &str) -> String {
    let mut out = String::new();
    for (i, c) in name.chars().enumerate() {
        if c.is_ascii_uppercase() && i > 0 {
            out.push('_');
        }
        out.push(c.to_ascii_lowercase());
    }
    out
}
