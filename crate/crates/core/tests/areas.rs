use hemifill::areas::norm::Vec2;
use hemifill::areas::*;
use hemifill::extension::{LipschitzCurve, NormedTarget, TargetNorm};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

fn random_matrix(rng: &mut ChaCha8Rng) -> [[f64; 2]; 2] {
    loop {
        let m: [[f64; 2]; 2] = [[rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)], [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)]];
        if (m[0][0] * m[1][1] - m[0][1] * m[1][0]).abs() > 0.1 {
            return m;
        }
    }
}

fn det(m: [[f64; 2]; 2]) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

#[test]
fn jacobian_examples() {
    let e = jacobians(&PlanarNorm::<f64>::Euclidean).unwrap();
    assert_eq!(e, [1.0, 1.0, 1.0]);
    let linf = jacobians(&PlanarNorm::<f64>::Linf).unwrap();
    assert!(close(linf[0], FRAC_PI_4, 1e-15) && close(linf[1], 2.0 / PI, 1e-15) && linf[2] == 1.0);
    let l1 = jacobians(&PlanarNorm::<f64>::L1).unwrap();
    assert!(close(l1[0], FRAC_PI_2, 1e-15) && close(l1[1], 4.0 / PI, 1e-15) && l1[2] == 2.0);

    // the same norms given by vertex lists go through shoelace, polar and the ellipse solver
    for (tag, verts) in [
        (PlanarNorm::Linf, vec![[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]]),
        (PlanarNorm::L1, vec![[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]]),
    ] {
        let closed = jacobians(&tag).unwrap();
        let poly = jacobians(&PlanarNorm::polygon(verts).unwrap()).unwrap();
        for (a, b) in closed.iter().zip(&poly) {
            assert!(close(*a, *b, 1e-12), "{tag:?}: {closed:?} vs {poly:?}");
        }
    }

    let g = [[2.0, 0.5], [0.5, 1.0]];
    let j = jacobians(&PlanarNorm::ellipse(g).unwrap()).unwrap();
    assert!(j.iter().all(|v| close(*v, det(g).sqrt(), 1e-14)));
    assert_eq!(jacobians(&PlanarNorm::<f64>::Degenerate).unwrap(), [0.0; 3]);
}

#[test]
fn transformation_law() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..300 {
        let poly: SymmetricPolygon<f64> = random_symmetric_polygon(&mut rng, 8);
        let t = random_matrix(&mut rng);
        for s in [PlanarNorm::Polygon(poly.clone()), PlanarNorm::Euclidean, PlanarNorm::Linf] {
            let before = jacobians(&s).unwrap();
            let after = jacobians(&s.compose_linear(t)).unwrap();
            let d = det(t).abs();
            assert!(close(after[0], d * before[0], 1e-12), "b: {} vs {}", after[0], d * before[0]);
            assert!(close(after[1], d * before[1], 1e-12), "ht: {} vs {}", after[1], d * before[1]);
            assert!(close(after[2], d * before[2], 1e-9), "ir: {} vs {}", after[2], d * before[2]);
        }
    }
}

#[test]
fn monotone_on_nested_balls() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..300 {
        let inner: SymmetricPolygon<f64> = random_symmetric_polygon(&mut rng, 6);
        let mut pts: Vec<Vec2<f64>> = inner.vertices().to_vec();
        for _ in 0..rng.gen_range(1..4) {
            pts.push([rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)]);
        }
        let outer = SymmetricPolygon::hull_of(&pts).unwrap();
        // a smaller ball means a larger norm
        let big = jacobians(&PlanarNorm::Polygon(inner)).unwrap();
        let small = jacobians(&PlanarNorm::Polygon(outer)).unwrap();
        for i in 0..3 {
            assert!(big[i] >= small[i] * (1.0 - 1e-12), "{i}: {big:?} vs {small:?}");
        }
    }
}

#[test]
fn jacobian_ordering() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..1000 {
        let [b, ht, ir] = jacobians(&PlanarNorm::Polygon(random_symmetric_polygon::<f64, _>(&mut rng, 10))).unwrap();
        assert!(ht <= b * (1.0 + 1e-12), "ht {ht} > b {b}");
        assert!(b <= ir * (1.0 + 1e-9), "b {b} > ir {ir}");
        assert!(ht <= ir * (1.0 + 1e-9));
    }
}

#[test]
fn john_ellipse_matches_khachiyan_and_is_inscribed() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for _ in 0..200 {
        let poly: SymmetricPolygon<f64> = random_symmetric_polygon(&mut rng, 8);
        let a = john_ellipse(&poly).unwrap();
        let half = &poly.dual_vertices()[..poly.dual_vertices().len() / 2];
        let k = khachiyan_centered(half, 1e-7).unwrap();
        let m = min_enclosing_centered(half).unwrap();
        // Khachiyan's ellipse encloses the points and is within its gap of optimal
        assert!(det(k) <= det(m) * (1.0 + 1e-9));
        assert!(det(k) >= det(m) * (1.0 - 1e-5), "{} vs {}", det(k), det(m));
        // support of the ellipse in each facet normal is at most one
        let inv = [[a[1][1] / det(a), -a[0][1] / det(a)], [-a[1][0] / det(a), a[0][0] / det(a)]];
        for u in poly.dual_vertices() {
            let h2 = inv[0][0] * u[0] * u[0] + 2.0 * inv[0][1] * u[0] * u[1] + inv[1][1] * u[1] * u[1];
            assert!(h2 <= 1.0 + 1e-9);
        }
    }
}

#[test]
fn ratio_constants() {
    let sweep = jacobian_ratio_sweep::<f64>(2000, 6, 5).unwrap();
    let (q_htb, q_bir, q_htir) = (8.0 / (PI * PI), FRAC_PI_4, 2.0 / PI);
    assert!(sweep.min_ht_over_b.0 >= q_htb * (1.0 - 1e-6));
    assert!(sweep.min_b_over_ir.0 >= q_bir * (1.0 - 1e-6));
    assert!(sweep.min_ht_over_ir.0 >= q_htir * (1.0 - 1e-6));
    assert!(sweep.min_ht_over_b.0 <= q_htb + 2e-2);
    assert!(sweep.min_b_over_ir.0 <= q_bir + 2e-2);
    assert!(sweep.min_ht_over_ir.0 <= q_htir + 2e-2);
    for s in &sweep.samples {
        assert!(s.ht_over_b >= q_htb * (1.0 - 1e-6) && s.b_over_ir >= q_bir * (1.0 - 1e-6));
    }
    let again = jacobian_ratio_sweep::<f64>(2000, 6, 5).unwrap();
    assert_eq!(serde_json::to_string(&sweep).unwrap(), serde_json::to_string(&again).unwrap());

    let sq = jacobians(&PlanarNorm::polygon(vec![[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]]).unwrap()).unwrap();
    assert!((sq[0] / sq[2] - FRAC_PI_4).abs() <= 1e-9);
    assert!((sq[1] / sq[2] - 2.0 / PI).abs() <= 1e-9);
}

#[test]
fn differentials_of_linear_maps() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    for _ in 0..20 {
        let t = random_matrix(&mut rng);
        let map = AffineMap {
            rows: vec![t[0], t[1]],
            offset: vec![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)],
            target: NormedTarget::euclidean(2),
        };
        let p = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let md = metric_differential(&map, p, 1e-2, 32);
        assert!(!md.flagged);
        for k in 0..32 {
            let (s, c) = (TAU * k as f64 / 32.0).sin_cos();
            let tv = [t[0][0] * c + t[0][1] * s, t[1][0] * c + t[1][1] * s];
            assert!((md.samples[k] - tv[0].hypot(tv[1])).abs() <= 1e-6);
        }
        let lin = linearized_differential(&map, p, 1e-2);
        for _ in 0..20 {
            let v = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let tv = [t[0][0] * v[0] + t[0][1] * v[1], t[1][0] * v[0] + t[1][1] * v[1]];
            assert!((lin.norm.eval(v) - tv[0].hypot(tv[1])).abs() <= 1e-9);
        }
    }

    let constant = FnMap {
        f: |_: Vec2<f64>| vec![1.0, 2.0],
        target: NormedTarget::euclidean(2),
        margin: None,
    };
    let md = metric_differential(&constant, [0.3, 0.1], 1e-2, 32);
    assert!(md.norm.is_degenerate());
    let r = area(&constant, &Domain::disc(1.0), &JacobianKind::ALL, 8, 1e-2, 32).unwrap();
    assert_eq!(r.values, vec![0.0; 3]);
}

#[test]
fn hemisphere_chart_differentials() {
    let at_pole = metric_differential(&HemisphereIdentity, [0.0f64, 0.0], 1e-3, 32);
    assert!(at_pole.samples.iter().all(|s| (s - 1.0).abs() < 1e-6), "{:?}", at_pole.samples);
    // away from the pole the chart stretches the angular direction by r / sin r
    let r: f64 = 1.0;
    let md = metric_differential(&HemisphereIdentity, [r, 0.0], 1e-3, 32);
    assert!((md.samples[0] - 1.0).abs() < 1e-5);
    assert!((md.samples[8] - r.sin() / r).abs() < 1e-5, "{}", md.samples[8]);
}

#[test]
fn affine_square_into_linf() {
    let square = Domain::Rect { x0: 0.0, x1: 1.0, y0: 0.0, y1: 1.0 };
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    let linearized = AreaConfig { quad: 8, step: 1e-2, method: DifferentialMethod::Linearized };
    for _ in 0..10 {
        let t = random_matrix(&mut rng);
        let map = AffineMap { rows: vec![t[0], t[1]], offset: vec![0.5, -0.5], target: NormedTarget::linf(2) };
        let r = area_normed(&map, &square, &[JacobianKind::B], &linearized).unwrap();
        assert!((r.values[0] - det(t).abs() * FRAC_PI_4).abs() <= 1e-6);
    }
    // a rotated square ball with its vertices on sampled directions
    let (s, c) = (TAU * 3.0 / 32.0).sin_cos();
    let t = [[1.5 * c, -1.5 * s], [1.5 * s, 1.5 * c]];
    let map = AffineMap { rows: vec![t[0], t[1]], offset: vec![0.0, 0.0], target: NormedTarget::linf(2) };
    let r = area(&map, &square, &[JacobianKind::B], 8, 1e-2, 32).unwrap();
    assert!((r.values[0] - 2.25 * FRAC_PI_4).abs() <= 1e-6, "{}", r.values[0]);
}

#[test]
fn area_is_additive() {
    let map = FnMap {
        f: |p: Vec2<f64>| vec![p[0] + 0.3 * p[1] * p[1], p[1] + 0.2 * p[0].sin(), 0.1 * p[0] * p[1]],
        target: NormedTarget::euclidean(3),
        margin: None,
    };
    let kinds = [JacobianKind::B, JacobianKind::Ht];
    let whole = area(&map, &Domain::disc(1.0), &kinds, 48, 1e-3, 32).unwrap();
    let inner = area(&map, &Domain::disc(0.5), &kinds, 24, 1e-3, 32).unwrap();
    let ring = area(&map, &Domain::Annulus { inner: 0.5, outer: 1.0 }, &kinds, 24, 1e-3, 32).unwrap();
    for i in 0..2 {
        let sum = inner.values[i] + ring.values[i];
        assert!((whole.values[i] - sum).abs() <= 1e-3 * whole.values[i], "{} vs {sum}", whole.values[i]);
    }
}

#[test]
fn hemisphere_identity_area() {
    let r = area(&HemisphereIdentity, &Domain::<f64>::hemisphere(), &[JacobianKind::B], 32, 1e-2, 32).unwrap();
    assert!((r.values[0] / TAU - 1.0).abs() <= 1e-2, "{}", r.values[0]);
    assert_eq!(r.flagged, 0);
}

#[test]
fn small_filling_bounds() {
    let cfg = AreaConfig { quad: 12, step: 1e-2, method: DifferentialMethod::Linearized };
    let circle = LipschitzCurve::circle(NormedTarget::<f64>::euclidean(2)).unwrap();
    let r = filling_area_bound(&circle, &JacobianKind::ALL, 256, &cfg, 2e-2).unwrap();
    assert!((r.bound - TAU).abs() < 1e-9);
    assert!(r.all_satisfied());
    let constant = LipschitzCurve::constant(NormedTarget::<f64>::linf(3), &[1.0, 2.0, 3.0]).unwrap();
    let r = filling_area_bound(&constant, &JacobianKind::ALL, 256, &cfg, 2e-2).unwrap();
    assert_eq!(r.bound, 0.0);
    assert!(r.area.values.iter().all(|v| *v == 0.0), "{:?}", r.area.values);
    assert!(r.all_satisfied());
}

#[test]
fn norm_json() {
    let n: PlanarNorm<f64> = serde_json::from_str(r#"{"polygon": [[1, 0], [0, 1], [-1, 0], [0, -1]]}"#).unwrap();
    assert!(close(jacobian_busemann(&n), FRAC_PI_2, 1e-15));
    let n: PlanarNorm<f64> = serde_json::from_str(r#""linf""#).unwrap();
    assert_eq!(n, PlanarNorm::Linf);
    for bad in [
        r#"{"polygon": [[1, 0], [0, 1], [-1, 0]]}"#,
        r#"{"polygon": [[1, 0], [0, 1], [-1, 0], [0, -2]]}"#,
        r#"{"polygon": [[1, 0], [0, -1], [-1, 0], [0, 1]]}"#,
        r#""l3""#,
    ] {
        assert!(serde_json::from_str::<PlanarNorm<f64>>(bad).is_err(), "{bad}");
    }
    let t: NormedTarget<f64> = serde_json::from_str(r#"{"dim": 2, "norm": {"polygon": [[2, 0], [0, 1], [-2, 0], [0, -1]]}}"#).unwrap();
    assert!(matches!(t.norm, TargetNorm::Polygon(_)));
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn polar_is_an_involution(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p: SymmetricPolygon<f64> = random_symmetric_polygon(&mut rng, 9);
        let back = p.polar().polar();
        prop_assert_eq!(back.vertices().len(), p.vertices().len());
        prop_assert!((back.area() - p.area()).abs() <= 1e-12 * p.area());
        prop_assert!((p.area() * p.dual_area() - p.polar().area() * p.polar().dual_area()).abs() <= 1e-12);
        prop_assert!(p.area() * p.dual_area() >= 8.0 * (1.0 - 1e-12));
    }

    #[test]
    fn gauge_is_a_norm(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p: SymmetricPolygon<f64> = random_symmetric_polygon(&mut rng, 9);
        let mut v = || [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
        let (a, b) = (v(), v());
        prop_assert!(p.gauge([a[0] + b[0], a[1] + b[1]]) <= p.gauge(a) + p.gauge(b) + 1e-12);
        prop_assert!((p.gauge([-2.5 * a[0], -2.5 * a[1]]) - 2.5 * p.gauge(a)).abs() <= 1e-12 * p.gauge(a).max(1.0));
        for q in p.vertices() {
            prop_assert!((p.gauge(*q) - 1.0).abs() <= 1e-12);
        }
    }
}
