use std::f64::consts::{FRAC_PI_4, PI, TAU};
use std::path::Path;

use hemifill::areas::{
    area, filling_area_bound, jacobian_ratio_sweep, jacobians, AreaConfig, Domain, HemisphereIdentity, JacobianKind,
    PlanarNorm,
};
use hemifill::embedding::{half_circle_defect, iota, residue, verify_dirac_distances, verify_isometry};
use hemifill::extension::{
    certify_lipschitz, extend, random_hemisphere_point, CurveForm, LipschitzCurve, NormedTarget,
};
use hemifill::measure::{Atom, CircularMeasure};
use hemifill::real::circle_distance;
use hemifill::sphere::{g_monotonicity_sweep, sphere_distance, SpherePoint};
use hemifill::transport::{lp_oracle, w1_cdf_shift, w1_circle};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::input::read_json;
use crate::report::{num, Outcome, Table};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub value: f64,
    /// `value ≤ limit` passes, or `value ≥ limit` when `lower` is set.
    pub limit: f64,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub lower: bool,
    pub passed: bool,
}

impl Check {
    fn at_most(suite: &'static str, name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self { suite, name: name.into(), value, limit, lower: false, passed: value <= limit }
    }

    fn at_least(suite: &'static str, name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self { suite, name: name.into(), value, limit, lower: true, passed: value >= limit }
    }
}

pub fn outcome(checks: Vec<Check>) -> Outcome {
    let passed = checks.iter().all(|c| c.passed);
    let mut table = Table::new(["suite", "check", "value", "limit", "passed"]);
    for c in &checks {
        let limit = if c.lower { format!(">={}", num(c.limit)) } else { num(c.limit) };
        table.push(vec![c.suite.into(), c.name.clone(), num(c.value), limit, c.passed.to_string()]);
    }
    Outcome::json(&serde_json::json!({ "checks": checks })).with_table(table).with_verdict(passed)
}

/// One `check:` line per check, for CSV headers.
pub fn notes(checks: &[Check]) -> Vec<String> {
    checks
        .iter()
        .map(|c| {
            let op = if c.lower { ">=" } else { "<=" };
            format!("check: {}: {} = {} {op} {} {}", c.suite, c.name, num(c.value), num(c.limit), if c.passed { "PASS" } else { "FAIL" })
        })
        .collect()
}

fn worst(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn random_atomic(rng: &mut ChaCha8Rng, n: usize) -> CircularMeasure<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let atoms = raw.into_iter().map(|m| Atom { pos: rng.gen_range(0.0..TAU), mass: m / total }).collect();
    CircularMeasure::from_atoms(atoms).expect("valid atoms")
}

/// A random curve with five harmonics per coordinate, decaying like `1/k`.
pub fn five_harmonic(target: NormedTarget<f64>, seed: u64) -> LipschitzCurve<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coords = (0..target.dim)
        .map(|_| {
            (0..=5)
                .map(|k| {
                    let s = 1.0 / (1.0 + k as f64);
                    [rng.gen_range(-s..s), if k == 0 { 0.0 } else { rng.gen_range(-s..s) }]
                })
                .collect()
        })
        .collect();
    LipschitzCurve::new(target, CurveForm::Fourier(coords)).expect("finite coefficients")
}

pub fn transport(pairs: usize, cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let sample: Vec<_> = (0..pairs)
        .map(|_| {
            let (a, b) = (rng.gen_range(1..=64), rng.gen_range(1..=64));
            (random_atomic(&mut rng, a), random_atomic(&mut rng, b))
        })
        .collect();
    let errs = sample
        .par_iter()
        .map(|(mu, nu)| {
            let (lp, _) = lp_oracle(mu, nu)?;
            Ok(((w1_circle(mu, nu).distance - lp).abs(), (w1_cdf_shift(mu, nu) - lp).abs()))
        })
        .collect::<hemifill::Result<Vec<(f64, f64)>>>()?;
    let dirac = worst((0..1000).map(|_| {
        let (x, y) = (rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU));
        w1_circle(&CircularMeasure::dirac(x), &CircularMeasure::dirac(y)).distance - circle_distance(x, y)
    }));
    let tol = cfg.tol("transport");
    Ok(vec![
        Check::at_most("transport", format!("cut vs lp over {pairs} pairs"), worst(errs.iter().map(|e| e.0)), tol),
        Check::at_most("transport", format!("cdf shift vs lp over {pairs} pairs"), worst(errs.iter().map(|e| e.1)), tol),
        Check::at_most("transport", "dirac pairs vs arc distance", dirac, 1e-12),
    ])
}

/// Embedding checks, plus a table of per-pair isometry errors.
pub fn embedding(pairs: usize, cfg: &RunConfig) -> Result<(Vec<Check>, Table), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let sample: Vec<(SpherePoint<f64>, SpherePoint<f64>)> = (0..pairs)
        .map(|_| (random_hemisphere_point(&mut rng), random_hemisphere_point(&mut rng)))
        .collect();
    let errors = verify_isometry(&sample, cfg.grid_size)?;
    let mut table = Table::new(["pair", "p_azimuth", "p_colatitude", "q_azimuth", "q_colatitude", "distance", "w1", "error"]);
    for (i, ((p, q), e)) in sample.iter().zip(&errors).enumerate() {
        let d = sphere_distance(p, q);
        table.push(vec![
            i.to_string(),
            num(p.azimuth()),
            num(p.colatitude()),
            num(q.azimuth()),
            num(q.colatitude()),
            num(d),
            num(d + e),
            num(*e),
        ]);
    }
    let isometry = worst(errors);
    let points: Vec<&SpherePoint<f64>> = sample.iter().map(|p| &p.0).filter(|p| !p.is_boundary()).take(50).collect();
    let per_point = points
        .par_iter()
        .map(|p| {
            let e = iota(p, cfg.grid_size)?;
            Ok((half_circle_defect(&e), verify_dirac_distances(&e, 64), residue(&e)?.antipodal_defect()))
        })
        .collect::<hemifill::Result<Vec<_>>>()?;
    let n = points.len();
    let checks = vec![
        Check::at_most("embedding", format!("isometry over {pairs} pairs"), isometry, cfg.tol("isometry")),
        Check::at_most("embedding", format!("half-circle masses over {n} points"), worst(per_point.iter().map(|l| l.0)), cfg.tol("half_circle")),
        Check::at_most("embedding", format!("dirac distances over {n} points"), worst(per_point.iter().map(|l| l.1)), cfg.tol("dirac")),
        Check::at_most("embedding", format!("residue antipodal defect over {n} points"), worst(per_point.iter().map(|l| l.2)), cfg.tol("residue")),
    ];
    Ok((checks, table))
}

fn default_curves(seed: u64) -> Vec<(String, LipschitzCurve<f64>)> {
    vec![
        ("circle".into(), LipschitzCurve::circle(NormedTarget::euclidean(2)).expect("circle")),
        ("linf circle".into(), LipschitzCurve::circle(NormedTarget::linf(2)).expect("circle")),
        ("ellipse".into(), LipschitzCurve::ellipse(NormedTarget::euclidean(2), 2.0, 1.0).expect("ellipse")),
        ("5-harmonic".into(), five_harmonic(NormedTarget::linf(2), seed)),
        ("linf8 circle".into(), LipschitzCurve::kuratowski(8).expect("kuratowski")),
    ]
}

fn curves_from(curve: Option<&Path>, defaults: Vec<(String, LipschitzCurve<f64>)>) -> Result<Vec<(String, LipschitzCurve<f64>)>, CliError> {
    Ok(match curve {
        Some(path) => vec![(path.display().to_string(), read_json(path)?)],
        None => defaults,
    })
}

pub fn lipschitz(curve: Option<&Path>, pairs: usize, cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    let defaults = default_curves(cfg.seed).into_iter().filter(|(n, _)| n == "circle" || n == "5-harmonic").collect();
    let mut out = Vec::new();
    for (name, c) in curves_from(curve, defaults)? {
        let cert = certify_lipschitz(&extend(&c, cfg.grid_size)?, pairs, cfg.seed);
        out.push(Check::at_most(
            "lipschitz",
            format!("{name}: max ratio over {pairs} pairs"),
            cert.max_ratio,
            c.lipschitz() * (1.0 + cfg.tol("lipschitz")),
        ));
    }
    Ok(out)
}

pub fn monotonicity() -> Vec<Check> {
    let r = g_monotonicity_sweep::<f64>(100, 100, 20);
    vec![
        Check::at_most("monotonicity", format!("sign violations over {} nodes", r.nodes), r.violations as f64, 0.0),
    ]
}

pub fn jacobian_constants(samples: usize, cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    let sweep = jacobian_ratio_sweep::<f64>(samples, 8, cfg.seed)?;
    let (below, above) = (cfg.tol("ratio_below"), cfg.tol("ratio_above"));
    let mut out = Vec::new();
    for (name, m, q) in [
        ("ht/b", sweep.min_ht_over_b.0, 8.0 / (PI * PI)),
        ("b/ir", sweep.min_b_over_ir.0, FRAC_PI_4),
        ("ht/ir", sweep.min_ht_over_ir.0, 2.0 / PI),
    ] {
        out.push(Check::at_least("jacobians", format!("min {name} over {samples} norms"), m, q - below));
        out.push(Check::at_most("jacobians", format!("min {name} over {samples} norms"), m, q + above));
    }
    let sq: [f64; 3] = jacobians(&PlanarNorm::<f64>::Linf.as_polygon().map(PlanarNorm::Polygon).expect("square"))?;
    out.push(Check::at_most("jacobians", "square b/ir − π/4", (sq[0] / sq[2] - FRAC_PI_4).abs(), 1e-9));
    out.push(Check::at_most("jacobians", "square ht/ir − 2/π", (sq[1] / sq[2] - 2.0 / PI).abs(), 1e-9));
    Ok(out)
}

pub fn fill(curve: Option<&Path>, area_cfg: &AreaConfig, cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    let mut out = Vec::new();
    let slack = cfg.tol("slack");
    for (name, c) in curves_from(curve, default_curves(cfg.seed))? {
        let r = filling_area_bound(&c, &JacobianKind::ALL, cfg.grid_size, area_cfg, slack)?;
        for (k, a) in r.area.kinds.iter().zip(&r.area.values) {
            out.push(Check::at_most("fill", format!("{name}: area {}", k.name()), *a, r.bound * (1.0 + slack)));
        }
    }
    if curve.is_none() {
        let id = area(&HemisphereIdentity, &Domain::hemisphere(), &[JacobianKind::B], area_cfg.quad, area_cfg.step, 32)?;
        out.push(Check::at_most("fill", "identity: |area b / 2π − 1|", (id.values[0] / TAU - 1.0).abs(), cfg.tol("identity")));
    }
    Ok(out)
}
