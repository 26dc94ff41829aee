use hemifill::areas::jacobian_ratio_sweep;
use hemifill::embedding::{iota, verify_isometry};
use hemifill::extension::random_hemisphere_point;
use hemifill::sphere::SpherePoint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::commands::measure_table;
use crate::config::RunConfig;
use crate::error::CliError;
use crate::input::parse_point;
use crate::report::{num, Outcome, Table};

pub fn mahler(samples: usize, max_pairs: usize, cfg: &RunConfig) -> Result<Outcome, CliError> {
    if max_pairs < 2 {
        return Err(CliError::Usage("--max-pairs must be at least 2".into()));
    }
    let sweep = jacobian_ratio_sweep::<f64>(samples, max_pairs, cfg.seed)?;
    let mut table = Table::new(["index", "vertices", "ht_over_b", "b_over_ir", "ht_over_ir"]);
    for s in &sweep.samples {
        table.push(vec![
            s.index.to_string(),
            s.vertices.to_string(),
            num(s.ht_over_b),
            num(s.b_over_ir),
            num(s.ht_over_ir),
        ]);
    }
    Ok(Outcome::json(&sweep).with_table(table))
}

pub fn convergence(pairs: usize, grids: &[usize], cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let sample: Vec<(SpherePoint<f64>, SpherePoint<f64>)> = (0..pairs)
        .map(|_| (random_hemisphere_point(&mut rng), random_hemisphere_point(&mut rng)))
        .collect();
    let mut table = Table::new(["grid", "max_error", "mean_abs_error", "rms_error"]);
    let mut rows = Vec::new();
    for &n in grids {
        let errs = verify_isometry(&sample, n)?;
        let m = errs.len().max(1) as f64;
        let max = errs.iter().fold(0.0f64, |a, e| a.max(e.abs()));
        let mean = errs.iter().map(|e| e.abs()).sum::<f64>() / m;
        let rms = (errs.iter().map(|e| e * e).sum::<f64>() / m).sqrt();
        table.push(vec![n.to_string(), num(max), num(mean), num(rms)]);
        rows.push(json!({ "grid": n, "max_error": max, "mean_abs_error": mean, "rms_error": rms }));
    }
    Ok(Outcome::json(&json!({ "pairs": pairs, "grids": rows })).with_table(table))
}

pub fn density(points: &[String], cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut table = Table::new(["point", "kind", "angle", "width", "mass", "density"]);
    let mut embedded = Vec::with_capacity(points.len());
    for (i, s) in points.iter().enumerate() {
        let p = parse_point(s)?;
        let e = iota(&p, cfg.grid_size)?;
        for mut row in measure_table(&e).rows {
            row.insert(0, i.to_string());
            table.push(row);
        }
        embedded.push(json!({ "point": p, "k": e.k, "measure": e.measure }));
    }
    Ok(Outcome::json(&json!({ "points": embedded })).with_table(table))
}
