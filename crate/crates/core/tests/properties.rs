mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use shfc::cpoly::{poly_divide, roots, Poly1 as GPoly1};
use shfc::foliation::format::{emit_foliation, parse_foliation};
use shfc::foliation::sample::{random_complex, random_foliation, random_pl_foliation};
use shfc::foliation::{invariant_lines, is_algebraic_leaf, tangency_count, Chart, Line};
use shfc::germ::format::{emit_jet, parse_jet};
use shfc::germ::{
    additive_group_density, koenigs_jet, pseudo_orbit, DensityClass, DensityConfig, Generator, OrbitConfig,
};
use shfc::metric::{energy_bound, foliation_metric_norm_sq, leaf_curvature, segment_energy};
use shfc::singular::infinity_singularities;
use shfc::transport::{density_statistic, Disk};
use shfc::{Foliation, Jet, Poly1, Poly2};

use common::{hyperbolic_multiplier, random_jet};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Polynomials with small Gaussian-integer coefficients, on which double
/// arithmetic is exact.
fn int_poly() -> impl Strategy<Value = Poly2> {
    prop::collection::vec((0u32..3, 0u32..3, -4i32..=4, -4i32..=4), 0..6).prop_map(|terms| {
        Poly2::from_terms(terms.into_iter().map(|(i, j, re, im)| (i, j, Complex64::new(re as f64, im as f64)))).unwrap()
    })
}

fn scaled(f: &Foliation, c: Complex64) -> Foliation {
    Foliation::new(f.p().scale(c), f.q().scale(c)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ring_axioms_are_exact(a in int_poly(), b in int_poly(), c in int_poly()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
    }

    #[test]
    fn sum_of_homogeneous_parts(seed: u64, deg in 0u32..=8) {
        let p = shfc::foliation::sample::random_poly(&mut rng(seed), 0, deg);
        let sum = (0..=deg).fold(Poly2::zero(), |acc, k| &acc + &p.homogeneous_part(k));
        prop_assert_eq!(sum, p);
    }

    #[test]
    fn exact_division(a in int_poly(), b in int_poly()) {
        prop_assume!(!b.is_zero() && !a.is_zero());
        let (q, exact) = poly_divide(&(&a * &b), &b, 1e-12);
        prop_assert!(exact);
        prop_assert!((&q - &a).max_abs_coeff() <= 1e-9 * a.max_abs_coeff());
    }

    #[test]
    fn planted_roots_are_recovered(
        planted in prop::collection::vec(((-2.0f64..2.0, -2.0f64..2.0), 1usize..=3), 1..=3),
    ) {
        let centres: Vec<Complex64> = planted.iter().map(|&((re, im), _)| Complex64::new(re, im)).collect();
        for (i, a) in centres.iter().enumerate() {
            for b in &centres[..i] {
                prop_assume!((a - b).norm() > 0.3);
            }
        }
        let all: Vec<Complex64> = planted
            .iter()
            .flat_map(|&((re, im), m)| std::iter::repeat_n(Complex64::new(re, im), m))
            .collect();
        let p: Poly1 = GPoly1::from_roots(Complex64::new(1.0, 0.0), &all);
        let found = roots(&p, 1e-8).unwrap();
        prop_assert_eq!(found.len(), planted.len());
        for &((re, im), m) in &planted {
            let z = Complex64::new(re, im);
            let hit = found.iter().find(|r| (r.value - z).norm() < 1e-9);
            prop_assert!(hit.is_some(), "{z} not recovered from {found:?}");
            prop_assert_eq!(hit.unwrap().multiplicity, m);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tangency_total_is_line_independent(seed: u64, n in 0u32..=4, leaf: bool) {
        let mut r = rng(seed);
        let f = random_foliation(&mut r, if leaf { n } else { n.max(1) }, leaf);
        for _ in 0..5 {
            let line = Line {
                base: (random_complex(&mut r), random_complex(&mut r)),
                dir: (random_complex(&mut r), random_complex(&mut r)),
            };
            prop_assert_eq!(tangency_count(&f, &line).unwrap().total, f.geometric_degree() as usize);
        }
    }

    #[test]
    fn degree_dichotomy(seed: u64, n in 1u32..=4, leaf: bool) {
        let f = random_foliation(&mut rng(seed), n, leaf);
        let drop = f.geometric_degree() + 1 == f.affine_degree();
        prop_assert!(f.infinity_is_leaf() != drop);
    }

    #[test]
    fn charts_agree_on_overlap(seed: u64, n in 1u32..=3, leaf: bool) {
        let mut r = rng(seed);
        let f = random_foliation(&mut r, n, leaf);
        let (u0, u1) = (f.chart_form(Chart::U0), f.chart_form(Chart::U1));
        for _ in 0..20 {
            let (x, y) = (random_complex(&mut r) + 0.5, random_complex(&mut r));
            let (dx, dy) = u0.direction(x, y);
            prop_assume!(dx.norm() + dy.norm() > 1e-6);
            // Push (dx, dy) through (u, v) = (1/x, y/x).
            let du = -dx / (x * x);
            let dv = (dy * x - y * dx) / (x * x);
            let (a, b) = u1.direction(x.inv(), y / x);
            let cross = (du * b - dv * a).norm();
            let scale = du.norm().hypot(dv.norm()) * a.norm().hypot(b.norm());
            prop_assert!(cross <= 1e-9 * scale, "cross {cross} scale {scale}");
        }
    }

    #[test]
    fn emitted_foliations_parse_back_bit_exactly(seed: u64, n in 0u32..=4) {
        let f = random_foliation(&mut rng(seed), n, true);
        let g = parse_foliation(&emit_foliation(&f)).unwrap();
        prop_assert_eq!(f.p(), g.p());
        prop_assert_eq!(f.q(), g.q());
    }

    #[test]
    fn residue_identity_and_multiplier_product(seed: u64, n in 1u32..=4) {
        let f = random_pl_foliation(&mut rng(seed), n);
        let sings = infinity_singularities(&f).unwrap();
        let sum: Complex64 = sings.iter().map(|s| s.lambda).sum();
        let prod: Complex64 = sings.iter().map(|s| s.multiplier).product();
        prop_assert!((sum - 1.0).norm() < 1e-9);
        prop_assert!((prod - 1.0).norm() < 1e-8);
    }

    #[test]
    fn characteristic_numbers_ignore_scaling(seed: u64, n in 1u32..=3, k in -4i32..=4) {
        let f = random_pl_foliation(&mut rng(seed), n);
        let g = scaled(&f, Complex64::new(2f64.powi(k), 0.0));
        let (a, b) = (infinity_singularities(&f).unwrap(), infinity_singularities(&g).unwrap());
        prop_assert_eq!(a.len(), b.len());
        for (s, t) in a.iter().zip(&b) {
            prop_assert_eq!(s.lambda, t.lambda);
        }
    }

    #[test]
    fn hyperbolic_iff_multiplier_off_circle(seed: u64, n in 1u32..=3) {
        for s in infinity_singularities(&random_pl_foliation(&mut rng(seed), n)).unwrap() {
            let off = (s.multiplier.norm() - 1.0).abs();
            match s.hyperbolic {
                shfc::singular::Decision::Yes => prop_assert!(off > 1e-8),
                shfc::singular::Decision::No => prop_assert!(off < 1e-7),
                shfc::singular::Decision::Borderline => {}
            }
        }
    }

    #[test]
    fn invariant_lines_are_leaves(seed: u64, n in 1u32..=3) {
        // Plant two invariant lines: x = 0 and y = 0 are leaves of
        // x A dy − y B dx.
        let mut r = rng(seed);
        let a = shfc::foliation::sample::random_poly(&mut r, 0, n - 1);
        let b = shfc::foliation::sample::random_poly(&mut r, 0, n - 1);
        let Ok(f) = Foliation::new(&Poly2::x() * &a, &Poly2::y() * &b) else { return Ok(()) };
        let lines = invariant_lines(&f);
        prop_assert!(lines.lines.len() >= 2);
        for k in &lines.lines {
            prop_assert!(is_algebraic_leaf(&f, k).unwrap().is_some());
        }
    }
}

fn close_jets(a: &Jet, b: &Jet, tol: f64) -> bool {
    a.max_abs_diff(b) <= tol
}

/// Machine epsilon times a condition factor: the largest coefficient of
/// the jets involved.
fn eps_cond(jets: &[&Jet]) -> f64 {
    let m = jets.iter().flat_map(|j| j.coeffs()).map(|c| c.norm()).fold(1.0, f64::max);
    1e-14 * m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn jet_group_axioms(s1: u64, s2: u64, s3: u64) {
        let jet = |s: u64| {
            let mut r = rng(s);
            let nu = hyperbolic_multiplier(&mut r);
            random_jet(&mut r, nu, 12)
        };
        let (f, g, h) = (jet(s1), jet(s2), jet(s3));
        let (fg, gh) = (f.compose(&g), g.compose(&h));
        let left = fg.compose(&h);
        prop_assert!(close_jets(&left, &f.compose(&gh), eps_cond(&[&fg, &gh, &left])));
        let id = Jet::identity(12);
        let inv = f.invert();
        prop_assert!(close_jets(&f.compose(&inv), &id, eps_cond(&[&inv])));
        prop_assert!(close_jets(&inv.compose(&f), &id, eps_cond(&[&inv])));
    }

    #[test]
    fn solves_invert_composition(s1: u64, s2: u64) {
        let mut r = rng(s1);
        let nu = hyperbolic_multiplier(&mut r);
        let f = random_jet(&mut r, nu, 12);
        let mut r = rng(s2);
        let nu = hyperbolic_multiplier(&mut r);
        let g = random_jet(&mut r, nu, 12);
        let h = f.solve_left(&g);
        prop_assert!(close_jets(&f.compose(&h), &g, eps_cond(&[&h])));
        let k = f.solve_right(&g);
        prop_assert!(close_jets(&k.compose(&f), &g, eps_cond(&[&k])));
    }

    #[test]
    fn koenigs_functional_equation(seed: u64) {
        let mut r = rng(seed);
        let nu = hyperbolic_multiplier(&mut r);
        let f = random_jet(&mut r, nu, 16);
        let zeta = koenigs_jet(&f).unwrap();
        let lhs = zeta.compose(&f);
        for k in 1..=16 {
            prop_assert!((lhs.coeff(k) - nu * zeta.coeff(k)).norm() < 1e-13);
        }
    }

    #[test]
    fn koenigs_unique_up_to_scalar(seed: u64, mu_re in 0.5f64..2.0, mu_im in -1.0f64..1.0) {
        // For h = μz, the Koenigs map of h⁻¹∘f∘h is ζ∘h / μ.
        let mut r = rng(seed);
        let nu = hyperbolic_multiplier(&mut r);
        let f = random_jet(&mut r, nu, 12);
        let mu = Complex64::new(mu_re, mu_im);
        let h = Jet::linear(mu, 12);
        let g = h.solve_left(&f.compose(&h));
        let zeta_f = koenigs_jet(&f).unwrap();
        let zeta_g = koenigs_jet(&g).unwrap();
        let want = Jet::linear(mu.inv(), 12).compose(&zeta_f.compose(&h));
        prop_assert!(close_jets(&zeta_g, &want, 1e-10));
    }

    #[test]
    fn emitted_jets_parse_back_bit_exactly(seed: u64) {
        let mut r = rng(seed);
        let nu = hyperbolic_multiplier(&mut r);
        let f = random_jet(&mut r, nu, 10);
        prop_assert_eq!(parse_jet(&emit_jet(&f)).unwrap(), f);
    }

    #[test]
    fn density_ignores_order_and_rotation(re in -1.0f64..1.0, im in 0.3f64..1.0, t in 0.0f64..6.0) {
        let gens = [Complex64::new(1.0, 0.0), Complex64::new(re, im)];
        let cfg = DensityConfig { eps: 0.05, budget: 20 };
        let base = additive_group_density(&gens, &cfg).classification;
        let swapped = additive_group_density(&[gens[1], gens[0]], &cfg).classification;
        let mu = Complex64::from_polar(1.7, t);
        let rotated = additive_group_density(&[gens[0] * mu, gens[1] * mu], &cfg).classification;
        prop_assert_eq!(base, swapped);
        // Two independent generators always span a lattice.
        prop_assert_eq!(base, DensityClass::DiscreteLattice);
        prop_assert_eq!(rotated, DensityClass::DiscreteLattice);
    }

    #[test]
    fn coverage_grows_with_hits(
        pts in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 0..60),
        extra in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 0..30),
    ) {
        let window = Disk { center: Complex64::new(0.0, 0.0), radius: 0.8 };
        let a: Vec<Complex64> = pts.iter().map(|&(x, y)| Complex64::new(x, y)).collect();
        let mut b = a.clone();
        b.extend(extra.iter().map(|&(x, y)| Complex64::new(x, y)));
        let (ca, cb) = (density_statistic(&a, window, 0.1), density_statistic(&b, window, 0.1));
        prop_assert!((0.0..=1.0).contains(&ca));
        prop_assert!(ca <= cb);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn orbit_points_replay_their_words(a in 0.3f64..0.9, t in 0.0f64..6.3, c2_re in -0.2f64..0.2) {
        let gens = vec![
            Generator::new(Jet::new(vec![Complex64::from_polar(a, t), Complex64::new(c2_re, 0.05)]).unwrap(), 1.0),
            Generator::new(Jet::new(vec![Complex64::from_polar(1.2, 1.0), Complex64::new(0.02, 0.0)]).unwrap(), 1.0),
        ];
        let cfg = OrbitConfig { max_word_len: 6, max_points: 2_000, ..Default::default() };
        let report = pseudo_orbit(&gens, Complex64::new(0.2, 0.1), &cfg);
        for p in &report.points {
            prop_assert!(p.z.norm() <= cfg.reference_radius);
            let replay = p.word.eval(&gens, Complex64::new(0.2, 0.1));
            prop_assert!((replay - p.z).norm() <= 1e-12, "{replay} vs {}", p.z);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn segment_energy_bound(seed: u64) {
        let mut r = rng(seed);
        let mut point = || {
            let rad = 10f64.powf(rand::Rng::gen_range(&mut r, -2.0..=3.0));
            let (a, b) = (random_complex(&mut r), random_complex(&mut r));
            let s = a.norm().hypot(b.norm());
            (a * (rad / s), b * (rad / s))
        };
        let (p0, p1) = (point(), point());
        prop_assert!(segment_energy(p0, p1, 64) <= energy_bound(p0, p1));
    }

    #[test]
    fn curvature_sign_and_scaling(seed: u64, n in 1u32..=3, k in -3i32..=3) {
        let mut r = rng(seed);
        let f = random_foliation(&mut r, n, true);
        let p = (random_complex(&mut r), random_complex(&mut r));
        let Ok(kappa) = leaf_curvature(&f, p) else { return Ok(()) };
        if n == 1 {
            prop_assert_eq!(kappa, 0.0);
        } else {
            prop_assert!(kappa < 0.0);
        }
        let c = 2f64.powi(k);
        let g = scaled(&f, Complex64::new(c, 0.0));
        prop_assert_eq!(leaf_curvature(&g, p).unwrap(), kappa * c * c);
        let t = (random_complex(&mut r), random_complex(&mut r));
        let rho = foliation_metric_norm_sq(&f, p, t).unwrap();
        prop_assert_eq!(foliation_metric_norm_sq(&g, p, t).unwrap(), rho / (c * c));
    }
}
