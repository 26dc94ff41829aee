use std::path::Path;

use hemifill::areas::{
    filling_area_bound, jacobian, AreaConfig, DifferentialMethod, FillingReport, JacobianKind, PlanarNorm,
};
use hemifill::embedding::{half_circle_defect, iota, EmbeddedPoint};
use hemifill::extension::{certify_lipschitz, extend, LipschitzCurve};
use hemifill::measure::CircularMeasure;
use hemifill::transport::{lp_oracle, w1_cdf_shift, w1_circle, LP_MAX_ATOMS};
use serde_json::json;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::input::{parse_point, read_json};
use crate::report::{num, Outcome, Table};

pub fn w1(mu: &Path, nu: &Path, method: &str) -> Result<Outcome, CliError> {
    let a: CircularMeasure<f64> = read_json(mu)?;
    let b: CircularMeasure<f64> = read_json(nu)?;
    let t = w1_circle(&a, &b);
    let distance = match method {
        "cut" => t.distance,
        "cdf" => w1_cdf_shift(&a, &b),
        "lp" => {
            if !a.is_atomic() || !b.is_atomic() || a.atoms().len().max(b.atoms().len()) > LP_MAX_ATOMS {
                return Err(CliError::Usage(format!(
                    "--method lp needs purely atomic measures with at most {LP_MAX_ATOMS} atoms"
                )));
            }
            lp_oracle(&a, &b)?.0
        }
        other => return Err(CliError::Usage(format!("unknown method `{other}` (expected cut, cdf or lp)"))),
    };
    let result = json!({
        "method": method,
        "distance": distance,
        "cut": t.cut.cut,
        "level": t.cut.level,
        "validated": t.cut.validated,
        "certificate_gap": t.certificate_gap,
    });
    let mut table = Table::new(["quantity", "value"]);
    table.push(vec!["distance".into(), num(distance)]);
    table.push(vec!["cut".into(), num(t.cut.cut)]);
    table.push(vec!["certificate_gap".into(), num(t.certificate_gap)]);
    Ok(Outcome::json(&result).with_table(table))
}

pub fn measure_table(e: &EmbeddedPoint<f64>) -> Table {
    let m = &e.measure;
    let mut table = Table::new(["kind", "angle", "width", "mass", "density"]);
    for i in 0..m.grid_size() {
        let w = m.cell_width();
        table.push(vec!["cell".into(), num(m.cell_start(i)), num(w), num(m.cell_mass(i)), num(m.density()[i])]);
    }
    for a in m.atoms() {
        table.push(vec!["atom".into(), num(a.pos), "0".into(), num(a.mass), String::new()]);
    }
    table
}

pub fn embed(point: &str, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p = parse_point(point)?;
    let e = iota(&p, cfg.grid_size)?;
    let result = json!({
        "point": p,
        "k": e.k,
        "base": e.base.value(),
        "half_circle_defect": half_circle_defect(&e),
        "measure": e.measure,
    });
    Ok(Outcome::json(&result).with_table(measure_table(&e)))
}

pub fn extend_cmd(curve: &Path, points: &[String], certify: usize, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let c: LipschitzCurve<f64> = read_json(curve)?;
    let map = extend(&c, cfg.grid_size)?;
    let mut header = vec!["azimuth".to_string(), "colatitude".to_string()];
    header.extend((1..=c.dim()).map(|i| format!("x{i}")));
    let mut table = Table::new(header);
    let mut values = Vec::with_capacity(points.len());
    for s in points {
        let p = parse_point(s)?;
        let v = map.eval(&p);
        let mut row = vec![num(p.azimuth()), num(p.colatitude())];
        row.extend(v.iter().map(|x| num(*x)));
        table.push(row);
        values.push(json!({ "point": p, "value": v }));
    }
    let mut result = json!({
        "length": c.length()?,
        "lipschitz": c.lipschitz(),
        "mean": c.mean(),
        "values": values,
    });
    let mut outcome_pass = None;
    if certify > 0 {
        let cert = certify_lipschitz(&map, certify, cfg.seed);
        let limit = c.lipschitz() * (1.0 + cfg.tol("lipschitz"));
        outcome_pass = Some(cert.max_ratio <= limit);
        result["certificate"] = json!({
            "pairs": cert.pairs,
            "max_ratio": cert.max_ratio,
            "limit": limit,
            "worst": cert.worst,
            "min_separation": cert.min_separation,
        });
    }
    let out = Outcome::json(&result).with_table(table);
    Ok(match outcome_pass {
        Some(p) => out.with_verdict(p),
        None => out,
    })
}

pub fn jacobian_cmd(norm: &Path, kinds: &[JacobianKind]) -> Result<Outcome, CliError> {
    let s: PlanarNorm<f64> = read_json(norm)?;
    let s = s.validated()?;
    let kinds = if kinds.is_empty() { JacobianKind::ALL.to_vec() } else { kinds.to_vec() };
    let mut result = serde_json::Map::new();
    let mut table = Table::new(["kind", "value"]);
    for k in kinds {
        let v = jacobian(&s, k)?;
        result.insert(k.name().into(), json!(v));
        table.push(vec![k.name().into(), num(v)]);
    }
    Ok(Outcome::json(&json!({ "norm": s, "jacobians": result })).with_table(table))
}

pub fn filling_table(r: &FillingReport<f64>) -> Table {
    let mut table = Table::new(["jacobian", "area", "bound", "limit", "ratio", "error_indicator", "satisfied"]);
    let limit = r.bound * (1.0 + r.slack);
    for (i, k) in r.area.kinds.iter().enumerate() {
        let a = r.area.values[i];
        let ratio = if r.bound > 0.0 { a / r.bound } else { f64::NAN };
        table.push(vec![
            k.name().into(),
            num(a),
            num(r.bound),
            num(limit),
            num(ratio),
            num(r.area.error_indicator[i]),
            r.satisfied[i].to_string(),
        ]);
    }
    table
}

pub fn method(name: &str, directions: usize) -> Result<DifferentialMethod, CliError> {
    match name {
        "sampled" => Ok(DifferentialMethod::Sampled { directions }),
        "linearized" => Ok(DifferentialMethod::Linearized),
        other => Err(CliError::Usage(format!("unknown method `{other}` (expected sampled or linearized)"))),
    }
}

pub fn fill_area(
    curve: &Path,
    kinds: &[JacobianKind],
    area: AreaConfig,
    cfg: &RunConfig,
) -> Result<Outcome, CliError> {
    let c: LipschitzCurve<f64> = read_json(curve)?;
    let kinds = if kinds.is_empty() { JacobianKind::ALL.to_vec() } else { kinds.to_vec() };
    let r = filling_area_bound(&c, &kinds, cfg.grid_size, &area, cfg.tol("slack"))?;
    let passed = r.all_satisfied();
    let result = json!({ "report": r, "area_config": area });
    Ok(Outcome::json(&result).with_table(filling_table(&r)).with_verdict(passed))
}
