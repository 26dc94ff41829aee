use hemifill::areas::{random_symmetric_polygon, SymmetricPolygon};
use hemifill::embedding::iota;
use hemifill::extension::*;
use hemifill::measure::DiscreteMeasure;
use hemifill::sphere::SpherePoint;
use hemifill::transport::solve_transport;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{PI, TAU};

fn targets(rng: &mut ChaCha8Rng) -> Vec<NormedTarget<f64>> {
    let poly: SymmetricPolygon<f64> = random_symmetric_polygon(rng, 6);
    vec![
        NormedTarget::l1(3),
        NormedTarget::euclidean(3),
        NormedTarget::linf(3),
        NormedTarget::new(2, TargetNorm::Polygon(poly)).unwrap(),
    ]
}

fn random_discrete(rng: &mut ChaCha8Rng, dim: usize) -> DiscreteMeasure<Vec<f64>, f64> {
    let n = rng.gen_range(1..=32);
    let points = (0..n).map(|_| (0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect()).collect();
    let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    DiscreteMeasure::new(points, raw.iter().map(|w| w / total).collect()).unwrap()
}

fn random_fourier(rng: &mut ChaCha8Rng, target: NormedTarget<f64>, harmonics: usize) -> LipschitzCurve<f64> {
    let coords = (0..target.dim)
        .map(|_| {
            (0..=harmonics)
                .map(|k| {
                    let s = 1.0 / (1.0 + k as f64);
                    [rng.gen_range(-s..s), if k == 0 { 0.0 } else { rng.gen_range(-s..s) }]
                })
                .collect()
        })
        .collect();
    LipschitzCurve::new(target, CurveForm::Fourier(coords)).unwrap()
}

#[test]
fn barycenter_examples() {
    let x = vec![1.5, -2.0];
    assert_eq!(barycenter(&DiscreteMeasure::dirac(x.clone())), x);
    let mid = barycenter(&DiscreteMeasure::new(vec![vec![0.0, 2.0], vec![4.0, -2.0]], vec![0.5, 0.5]).unwrap());
    assert_eq!(mid, vec![2.0, 0.0]);
    let square = DiscreteMeasure::new(
        vec![vec![1.0f64, 1.0], vec![-1.0, 1.0], vec![-1.0, -1.0], vec![1.0, -1.0]],
        vec![0.25; 4],
    )
    .unwrap();
    assert!(barycenter(&square).iter().all(|v| v.abs() < 1e-15));
}

#[test]
fn barycenter_contracts_transport_distance() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for round in 0..40 {
        for target in targets(&mut rng) {
            let mu = random_discrete(&mut rng, target.dim);
            let nu = random_discrete(&mut rng, target.dim);
            let plan = solve_transport(&mu.weights, &nu.weights, |i, j| target.distance(&mu.points[i], &nu.points[j]))
                .unwrap();
            let gap = target.distance(&barycenter(&mu), &barycenter(&nu));
            assert!(gap <= plan.cost + 1e-9, "round {round}: {gap} > {}", plan.cost);
        }
    }
}

#[test]
fn bicombing_is_conical() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let (x, y) = (vec![1.0, 2.0], vec![-3.0, 0.5]);
    assert_eq!(bicombing(&x, &y, 0.0), x);
    assert_eq!(bicombing(&x, &y, 1.0), y);
    assert_eq!(bicombing(&x, &y, 0.5), vec![-1.0, 1.25]);
    for _ in 0..250 {
        for target in targets(&mut rng) {
            let mut pt = || (0..target.dim).map(|_| rng.gen_range(-3.0..3.0)).collect::<Vec<f64>>();
            let (x, y, x2, y2) = (pt(), pt(), pt(), pt());
            let t = rng.gen_range(0.0..=1.0);
            let lhs = target.distance(&bicombing(&x, &y, t), &bicombing(&x2, &y2, t));
            let rhs = (1.0 - t) * target.distance(&x, &x2) + t * target.distance(&y, &y2);
            assert!(lhs <= rhs + 1e-12, "{lhs} > {rhs}");
        }
    }
}

#[test]
fn extension_is_the_barycenter_of_the_pushforward() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let curve = random_fourier(&mut rng, NormedTarget::euclidean(3), 5);
    let map = extend(&curve, 512).unwrap();
    for _ in 0..10 {
        let p: SpherePoint<f64> = random_hemisphere_point(&mut rng);
        let e = iota(&p, 512).unwrap();
        let f = map.eval(&p);
        for i in 0..3 {
            let direct = e.measure.integrate_against(|t| curve.eval(t)[i], 1e-12).unwrap();
            assert!((direct - f[i]).abs() < 1e-9, "coordinate {i}: {direct} vs {}", f[i]);
        }
    }
}

#[test]
fn boundary_restriction_and_special_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let curves = [
        random_fourier(&mut rng, NormedTarget::linf(2), 5),
        LipschitzCurve::kuratowski(8).unwrap(),
    ];
    for curve in &curves {
        let map = extend(curve, 2048).unwrap();
        for j in 0..256 {
            let t = TAU * j as f64 / 256.0;
            let f = map.eval(&SpherePoint::boundary(t));
            let eta = curve.eval(t);
            let err = f.iter().zip(&eta).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            assert!(err <= 1e-9, "t = {t}: {err}");
        }
        let pole = map.eval(&SpherePoint::pole());
        for (a, b) in pole.iter().zip(curve.mean()) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    let circle = extend(&LipschitzCurve::circle(NormedTarget::<f64>::euclidean(2)).unwrap(), 2048).unwrap();
    assert!(circle.eval(&SpherePoint::pole()).iter().all(|v| v.abs() < 1e-12));

    let x0 = [0.25, -1.0, 3.0];
    let constant = extend(&LipschitzCurve::constant(NormedTarget::euclidean(3), &x0).unwrap(), 256).unwrap();
    for _ in 0..100 {
        let p: SpherePoint<f64> = random_hemisphere_point(&mut rng);
        let f = constant.eval(&p);
        assert!(f.iter().zip(&x0).all(|(a, b)| (a - b).abs() < 1e-12));
    }
    let cert = certify_lipschitz(&constant, 200, 1);
    assert!(cert.max_ratio < 1e-9);
}

#[test]
fn extension_is_linear_and_rotation_equivariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let curve = random_fourier(&mut rng, NormedTarget::euclidean(2), 4);
    let map = extend(&curve, 1024).unwrap();
    let doubled = extend(&curve.scaled(2.0).unwrap(), 1024).unwrap();
    let angle = 1.234;
    let turned = extend(&curve.rotated(angle).unwrap(), 1024).unwrap();
    for _ in 0..200 {
        let p: SpherePoint<f64> = random_hemisphere_point(&mut rng);
        let f = map.eval(&p);
        let g = doubled.eval(&p);
        assert!(f.iter().zip(&g).all(|(a, b)| (2.0 * a - b).abs() < 1e-12));
        let h = turned.eval(&p.rotated(angle));
        assert!(f.iter().zip(&h).all(|(a, b)| (a - b).abs() < 1e-9), "{f:?} vs {h:?}");
    }
}

#[test]
fn circle_extension_is_one_lipschitz_up_to_grid_slack() {
    let curve = LipschitzCurve::circle(NormedTarget::<f64>::euclidean(2)).unwrap();
    assert!((curve.lipschitz() - 1.0).abs() < 1e-9);
    let map = extend(&curve, 2048).unwrap();
    let cert = certify_lipschitz(&map, 5000, 5);
    assert_eq!(cert.pairs, 5000);
    assert!(cert.min_separation < 2e-3);
    assert!(cert.max_ratio <= 1.0 + 5e-3, "{}", cert.max_ratio);
}

#[test]
fn lipschitz_ratio_settles_under_refinement() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let curve = random_fourier(&mut rng, NormedTarget::linf(2), 5);
    let ratios: Vec<f64> = [128, 512, 2048, 8192]
        .iter()
        .map(|&n| certify_lipschitz(&extend(&curve, n).unwrap(), 1000, 3).max_ratio / curve.lipschitz())
        .collect();
    assert!(ratios.iter().all(|r| *r <= 1.0 + 5e-3), "{ratios:?}");
    let steps: Vec<f64> = ratios.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    for w in steps.windows(2) {
        assert!(w[1] <= w[0], "{ratios:?}");
    }
}

#[test]
fn curve_json() {
    let c: LipschitzCurve<f64> = serde_json::from_str(
        r#"{"target": {"dim": 2, "norm": "l2"}, "form": {"fourier": [[[0, 0], [1, 0]], [[0, 0], [0, 1]]]}}"#,
    )
    .unwrap();
    assert!((c.length().unwrap() - TAU).abs() < 1e-9);
    let c: LipschitzCurve<f64> = serde_json::from_str(
        r#"{"target": {"dim": 2, "norm": {"polygon": [[1, 0], [0, 1], [-1, 0], [0, -1]]}},
            "form": {"samples": [[0, 1, 0], [1.5707963267948966, 0, 1], [3.141592653589793, -1, 0], [4.71238898038469, 0, -1]]}}"#,
    )
    .unwrap();
    assert!((c.length().unwrap() - 8.0).abs() < 1e-12);
    assert!((c.lipschitz() - 2.0 / PI * 2.0).abs() < 1e-9);
    let c: LipschitzCurve<f64> = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
    assert!((c.length().unwrap() - 8.0).abs() < 1e-12);

    for bad in [
        r#"{"target": {"dim": 3, "norm": "l2"}, "form": {"fourier": [[[0, 0]]]}}"#,
        r#"{"target": {"dim": 1, "norm": "l2"}, "form": {"samples": [[1, 0], [0, 1]]}}"#,
        r#"{"target": {"dim": 1, "norm": "l2"}, "form": {"samples": [[0, 0], [7, 1]]}}"#,
        r#"{"target": {"dim": 0, "norm": "l2"}, "form": {"fourier": []}}"#,
        r#"{"target": {"dim": 3, "norm": {"polygon": [[1, 0], [0, 1], [-1, 0], [0, -1]]}}, "form": {"fourier": [[], [], []]}}"#,
        r#"{"target": {"dim": 1, "norm": "l2"}, "form": {"fourier": [[[0, 0]]]}, "extra": 1}"#,
    ] {
        assert!(serde_json::from_str::<LipschitzCurve<f64>>(bad).is_err(), "{bad}");
    }
}

#[test]
fn constant_speed_reparametrization_preserves_length() {
    let c = LipschitzCurve::ellipse(NormedTarget::<f64>::euclidean(2), 2.0, 1.0).unwrap();
    let r = c.constant_speed(4096).unwrap();
    let (l0, l1) = (c.length().unwrap(), r.length().unwrap());
    assert!((l0 - l1).abs() / l0 < 1e-6, "{l0} vs {l1}");
    assert!(r.has_constant_speed(1e-3));
    assert!((r.lipschitz() - l0 / TAU).abs() / l0 < 1e-3);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn sampled_curves_are_lipschitz_on_samples(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(3..40);
        let mut ts: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..TAU)).collect();
        ts.sort_by(f64::total_cmp);
        ts.dedup();
        let rows = ts.iter().map(|t| vec![*t, rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]).collect();
        let target = NormedTarget::linf(2);
        let c = LipschitzCurve::new(target.clone(), CurveForm::Samples(rows)).unwrap();
        for _ in 0..50 {
            let (s, t) = (rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU));
            let d = (s - t).abs().min(TAU - (s - t).abs());
            prop_assert!(target.distance(&c.eval(s), &c.eval(t)) <= c.lipschitz() * d + 1e-12);
        }
    }
}
