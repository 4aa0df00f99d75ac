//! Randomized invariants on small instances, with fixed seeds.

use num_complex::Complex64;
use plurilab::asymptotics::{robin_constant, RobinOptions};
use plurilab::extremal::{extremal_value, extremal_value_with, BasisSpec, DEFAULT_ITERATION_LIMIT};
use plurilab::genus0::{DirectionGrid, FamilyKind, GenusZeroFamily, WeightRule, ZeroRule};
use plurilab::lp::{resolve_with_added_constraints, solve, LinearProgram, LpStatus, PivotRule};
use plurilab::point::{LinearForm, Point};
use plurilab::regions::{sample, Density, RegionSpec};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

fn config(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(0x5eed_2024),
        failure_persistence: None,
        ..Config::default()
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// A bounded LP: random rows plus a box.
fn lp_instance() -> impl Strategy<Value = (Vec<f64>, Vec<(Vec<f64>, f64)>)> {
    (2usize..=5).prop_flat_map(|d| {
        (
            prop::collection::vec(-1.0..1.0f64, d),
            prop::collection::vec((prop::collection::vec(-1.0..1.0f64, d), 0.1..2.0f64), 1..4 * d),
        )
            .prop_map(move |(obj, mut rows)| {
                for k in 0..d {
                    let mut e = vec![0.0; d];
                    e[k] = 1.0;
                    rows.push((e.clone(), 5.0));
                    e[k] = -1.0;
                    rows.push((e, 5.0));
                }
                (obj, rows)
            })
    })
}

fn build(obj: &[f64], rows: &[(Vec<f64>, f64)]) -> LinearProgram {
    let mut lp = LinearProgram::maximize(obj.to_vec()).unwrap();
    for (r, b) in rows {
        lp.add_row(r, *b).unwrap();
    }
    lp
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn lp_feasible_and_deterministic((obj, rows) in lp_instance()) {
        let lp = build(&obj, &rows);
        let a = solve(&lp, 10_000);
        prop_assert_eq!(a.status, LpStatus::Optimal);
        prop_assert!(lp.max_violation(&a.point) <= 1e-8);
        prop_assert!((lp.objective_at(&a.point) - a.objective_value).abs() <= 1e-8);
        let b = solve(&lp, 10_000);
        prop_assert_eq!(a.point, b.point);
        let bland = solve(&lp.clone().with_pivot_rule(PivotRule::Bland), 10_000);
        prop_assert!((bland.objective_value - a.objective_value).abs() <= 1e-8);
    }

    #[test]
    fn lp_warm_matches_cold((obj, rows) in lp_instance(), split in 0.2..0.8f64) {
        let cold = solve(&build(&obj, &rows), 10_000);
        // Keep the box in the first batch so the partial program is bounded.
        let d = obj.len();
        let (random, boxed) = rows.split_at(rows.len() - 2 * d);
        let k = (random.len() as f64 * split) as usize;
        let mut first: Vec<_> = boxed.to_vec();
        first.extend_from_slice(&random[..k]);
        let mut lp = build(&obj, &first);
        let partial = solve(&lp, 10_000);
        let warm = resolve_with_added_constraints(&partial, &mut lp, random[k..].iter().cloned(), 10_000).unwrap();
        prop_assert_eq!(warm.status, LpStatus::Optimal);
        prop_assert!((warm.objective_value - cold.objective_value).abs() <= 1e-8);
    }
}

fn off_segment_point() -> impl Strategy<Value = Point> {
    (-3.0..3.0f64, 0.3..2.5f64, any::<bool>())
        .prop_map(|(x, y, up)| Point::one(c(x, if up { y } else { -y })))
}

proptest! {
    #![proptest_config(config(12))]

    #[test]
    fn antitone_in_the_sample_set(z in off_segment_point(), stride in 2usize..5) {
        let full = sample(&RegionSpec::segment(-1.0, 1.0), 1.0, Density::from_total(120)).unwrap();
        let sub = full.retain(|i, _| i % stride != 0).unwrap();
        let basis = BasisSpec::for_region(&full, 6).unwrap();
        let v_full = extremal_value_with(&full, &z, &basis, 32, DEFAULT_ITERATION_LIMIT).unwrap().value;
        let v_sub = extremal_value_with(&sub, &z, &basis, 32, DEFAULT_ITERATION_LIMIT).unwrap().value;
        prop_assert!(v_sub >= v_full - 1e-8, "{} < {}", v_sub, v_full);
    }

    #[test]
    fn powers_are_supermultiplicative(z in off_segment_point()) {
        let region = sample(&RegionSpec::segment(-1.0, 1.0), 1.0, Density::from_total(120)).unwrap();
        let phases = 64;
        // The K-gon relaxation allows |P| up to sec(π/K) on the samples.
        let sec = -(std::f64::consts::PI / phases as f64).cos().ln();
        for (n, k) in [(2, 3), (4, 2)] {
            let vn = extremal_value(&region, &z, n, phases).unwrap().value;
            let vkn = extremal_value(&region, &z, n * k, phases).unwrap().value;
            prop_assert!(vkn >= vn - sec / n as f64 - 1e-8, "({}, {}): {} < {}", n, k, vkn, vn);
        }
    }

    #[test]
    fn scaling_invariance(s in 0.2..5.0f64, x in 1.2..3.0f64, y in -1.0..1.0f64) {
        let base = sample(&RegionSpec::unit_disk(), 1.0, Density::from_total(80)).unwrap();
        let basis = BasisSpec::for_region(&base, 4).unwrap();
        let z = Point::one(c(x, y));
        let v = extremal_value_with(&base, &z, &basis, 32, DEFAULT_ITERATION_LIMIT).unwrap().value;
        let vs = extremal_value_with(&base.scaled(s), &z.scale_real(s), &basis.scaled(s).unwrap(), 32, DEFAULT_ITERATION_LIMIT)
            .unwrap()
            .value;
        prop_assert!((vs - v).abs() <= 1e-6, "{} vs {}", vs, v);
    }

    #[test]
    fn certificate_is_admissible(z in off_segment_point()) {
        let region = sample(&RegionSpec::segment(-1.0, 1.0), 1.0, Density::from_total(100)).unwrap();
        let est = extremal_value(&region, &z, 6, 32).unwrap();
        let bound = 1.0 / (std::f64::consts::PI / 32.0).cos() + 1e-7;
        for p in region.points() {
            prop_assert!(est.eval_certificate(p).norm() <= bound);
        }
        let at = est.eval_certificate(&z);
        prop_assert!((at.re.ln() / 6.0 - est.raw_value).abs() <= 1e-6);
    }

    #[test]
    fn profile_is_monotone_on_nested_truncations(x in 0.3..3.0f64) {
        let line = sample(&RegionSpec::positive_axis(), 16.0, Density::from_total(400)).unwrap();
        let z = Point::real1(-x);
        let mut last = f64::NEG_INFINITY;
        for r in [16.0, 8.0, 4.0, 2.0] {
            let trunc = line.retain(|_, p| p.norm() <= r).unwrap();
            let v = extremal_value(&trunc, &z, 6, 32).unwrap().value;
            prop_assert!(v >= last - 1e-8, "R = {}: {} < {}", r, v, last);
            last = v;
        }
    }
}

proptest! {
    #![proptest_config(config(6))]

    #[test]
    fn capacity_is_monotone(r1 in 0.2..1.0f64, grow in 1.1..3.0f64) {
        let opts = RobinOptions { degree: 8, trend: false, density: Density::from_total(160), ..RobinOptions::default() };
        let small = robin_constant(&RegionSpec::disk(c(0.0, 0.0), r1), None, &opts).unwrap().capacity;
        let large = robin_constant(&RegionSpec::disk(c(0.0, 0.0), r1 * grow), None, &opts).unwrap().capacity;
        let seg = robin_constant(&RegionSpec::segment(-r1, r1), None, &opts).unwrap().capacity;
        prop_assert!(seg <= small + 1e-6 && small <= large + 1e-6, "{} {} {}", seg, small, large);
    }
}

fn region_spec() -> impl Strategy<Value = RegionSpec> {
    prop_oneof![
        (-1.0..1.0f64, -1.0..1.0f64, 0.1..3.0f64).prop_map(|(x, y, r)| RegionSpec::disk(c(x, y), r)),
        (-3.0..0.0f64, 0.1..3.0f64).prop_map(|(a, w)| RegionSpec::segment(a, a + w)),
        (0.2..2.0f64).prop_map(RegionSpec::ball),
        (0.2..2.0f64, 0.2..2.0f64).prop_map(|(a, b)| RegionSpec::polydisk(a, b)),
        (0.5..2.0f64).prop_map(|h| RegionSpec::slab(LinearForm::coordinate(2, 0), -h, h)),
        (0.0..0.9f64).prop_map(|a| RegionSpec::cone(LinearForm::coordinate(2, 1), a)),
        Just(RegionSpec::positive_axis()),
        Just(RegionSpec::Example1),
        (0.05..0.5f64).prop_map(|e| RegionSpec::segment(-1.0, 1.0).fatten(e).unwrap()),
    ]
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn samples_are_members_within_radius(spec in region_spec(), r in 1.5..6.0f64, total in 40usize..400) {
        let s = sample(&spec, r, Density::from_total(total)).unwrap();
        for p in s.points() {
            prop_assert!(p.norm() <= r * (1.0 + 1e-12));
            prop_assert!(spec.contains(p), "{:?} not in {:?}", p, spec);
        }
        prop_assert!(2 * s.density().boundary >= s.len());
        let again = sample(&spec, r, Density::from_total(total)).unwrap();
        prop_assert_eq!(s.points(), again.points());
    }

    #[test]
    fn fattening_contains_the_base(spec in region_spec(), eps in 0.01..0.5f64) {
        let fat = spec.clone().fatten(eps).unwrap();
        let s = sample(&spec, 3.0, Density::from_total(100)).unwrap();
        for p in s.points() {
            prop_assert!(fat.contains(p));
        }
    }

    #[test]
    fn grid_weights_are_normalized(size in 1usize..6000) {
        let g = DirectionGrid::projective_line(size).unwrap();
        let total: f64 = g.weights.iter().sum();
        prop_assert!((total - 1.0).abs() <= 1e-12);
        for d in &g.directions {
            prop_assert!((d.norm() - 1.0).abs() <= 1e-12);
        }
    }
}

fn zero_list() -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec(
        (0.05..5.0f64, 0.0..std::f64::consts::TAU)
            .prop_filter("away from the unit circle", |(r, _)| (r - 1.0).abs() > 0.1)
            .prop_map(|(r, t)| Complex64::from_polar(r, t)),
        0..12,
    )
}

fn fixed_family(zeros: Vec<Complex64>, form: LinearForm) -> GenusZeroFamily {
    GenusZeroFamily::new(
        FamilyKind::LinearFormProduct {
            form,
            zeros: ZeroRule::Fixed { values: zeros },
        },
        WeightRule::Constant { value: 1.0 },
    )
    .unwrap()
}

proptest! {
    #![proptest_config(config(128))]

    #[test]
    fn counting_is_monotone(zeros in zero_list(), t1 in 0.01..6.0f64, dt in 0.0..3.0f64) {
        let fam = fixed_family(zeros, LinearForm::coordinate(1, 0));
        let one = Point::real1(1.0);
        prop_assert!(fam.counting(1, t1, &one).unwrap() <= fam.counting(1, t1 + dt, &one).unwrap());
        let p = GenusZeroFamily::arithmetic_product(LinearForm::coordinate(1, 0), 0.7);
        let n = 1 + (t1 * 5.0) as usize;
        prop_assert!(p.counting(n, t1, &one).unwrap() <= p.counting(n + 1, t1, &one).unwrap());
    }

    #[test]
    fn tail_sums_telescope(zeros in zero_list(), r1 in 0.05..3.0f64, dr in 0.0..3.0f64) {
        let fam = fixed_family(zeros.clone(), LinearForm::coordinate(1, 0));
        let one = Point::real1(1.0);
        let r2 = r1 + dr;
        let diff = fam.tail_sum(1, &one, r1).unwrap().value - fam.tail_sum(1, &one, r2).unwrap().value;
        let direct: Complex64 = zeros.iter().filter(|w| w.norm() >= r1 && w.norm() < r2).map(|w| 1.0 / w).sum();
        prop_assert!((diff - direct).norm() <= 1e-12 * (1.0 + direct.norm()));
    }

    #[test]
    fn slices_agree_with_direct_evaluation(
        zeros in zero_list(),
        a in (-1.0..1.0f64, -1.0..1.0f64),
        theta in 0.0..std::f64::consts::FRAC_PI_2,
        phi in 0.0..std::f64::consts::TAU,
        w in (-2.0..2.0f64, -2.0..2.0f64),
    ) {
        let form = LinearForm::new(vec![c(1.0, 0.0), c(a.0, a.1)]);
        let fam = fixed_family(zeros, form);
        let lambda = Point::two(c(theta.cos(), 0.0), Complex64::from_polar(theta.sin(), phi));
        let w = c(w.0, w.1);
        let slice = fam.slice(1, &lambda).unwrap();
        let direct = fam.evaluate(1, &lambda.scale(w), None).unwrap();
        prop_assume!(direct.log_abs.is_finite());
        prop_assert!((direct.log_abs - slice.log_abs(w)).abs() <= 1e-9);
    }

    #[test]
    fn circle_average_matches_jensen(zeros in zero_list(), lead in 0.1..10.0f64, order in 0u32..3) {
        let fam = GenusZeroFamily::single(c(lead, 0.0), order, zeros);
        let one = Point::real1(1.0);
        let slice = fam.slice(1, &one).unwrap();
        let avg = fam.circle_average(1, &one, 4096).unwrap();
        prop_assert!((avg.value - slice.jensen_mean()).abs() <= 1e-6);
    }
}
