//! Area functionals by quadrature of Jacobians of metric differentials.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::extension::{extend, LipschitzCurve};
use crate::real::Real;

use super::differential::{
    linearized_differential, metric_differential, ChartMap, DifferentialMethod, ExtensionChart,
    MetricDifferential, NormedChartMap, DEFAULT_STEP,
};
use super::jacobian::{jacobian, JacobianKind};
use super::norm::Vec2;

/// Default quadrature resolution.
pub const DEFAULT_QUAD: usize = 32;
/// Default relative slack for the isoperimetric comparison.
pub const DEFAULT_SLACK: f64 = 2e-2;
/// Samples used for the constant-speed reparametrization.
pub const REPARAM_SAMPLES: usize = 4096;

/// A planar parameter domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Domain<T> {
    /// `r₀ ≤ |p| ≤ r₁`; a disc when `r₀ = 0`.
    Annulus { inner: T, outer: T },
    Rect { x0: T, x1: T, y0: T, y1: T },
}

impl<T: Real> Domain<T> {
    pub fn disc(radius: T) -> Self {
        Domain::Annulus {
            inner: T::zero(),
            outer: radius,
        }
    }

    /// The chart domain of the hemisphere.
    pub fn hemisphere() -> Self {
        Self::disc(T::FRAC_PI_2())
    }

    /// Midpoint-rule nodes and weights. Annuli use `q` radial and `4q`
    /// angular cells; rectangles a `q × q` grid.
    pub fn nodes(&self, q: usize) -> Vec<(Vec2<T>, T)> {
        let q = q.max(1);
        let qf = T::from_usize_lossy(q);
        let half = T::lit(0.5);
        match *self {
            Domain::Annulus { inner, outer } => {
                let dr = (outer - inner) / qf;
                let na = 4 * q;
                let da = T::two_pi() / T::from_usize_lossy(na);
                let mut out = Vec::with_capacity(q * na);
                for i in 0..q {
                    let r = inner + dr * (T::from_usize_lossy(i) + half);
                    for j in 0..na {
                        let (s, c) = (da * (T::from_usize_lossy(j) + half)).sin_cos();
                        out.push(([r * c, r * s], r * dr * da));
                    }
                }
                out
            }
            Domain::Rect { x0, x1, y0, y1 } => {
                let (dx, dy) = ((x1 - x0) / qf, (y1 - y0) / qf);
                let mut out = Vec::with_capacity(q * q);
                for i in 0..q {
                    for j in 0..q {
                        let x = x0 + dx * (T::from_usize_lossy(i) + half);
                        let y = y0 + dy * (T::from_usize_lossy(j) + half);
                        out.push(([x, y], dx * dy));
                    }
                }
                out
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AreaConfig {
    pub quad: usize,
    pub step: f64,
    pub method: DifferentialMethod,
}

impl Default for AreaConfig {
    fn default() -> Self {
        Self {
            quad: DEFAULT_QUAD,
            step: DEFAULT_STEP,
            method: DifferentialMethod::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(bound = "T: Real")]
pub struct AreaReport<T> {
    pub kinds: Vec<JacobianKind>,
    pub values: Vec<T>,
    /// `|A_Q − A_{Q/2}|` per Jacobian.
    pub error_indicator: Vec<T>,
    pub nodes: usize,
    /// Nodes whose differential failed the subadditivity check.
    pub flagged: usize,
    pub max_subadditivity_defect: T,
}

impl<T: Real> AreaReport<T> {
    pub fn value(&self, kind: JacobianKind) -> Option<T> {
        self.kinds.iter().position(|k| *k == kind).map(|i| self.values[i])
    }
}

struct Pass<T> {
    values: Vec<T>,
    flagged: usize,
    defect: T,
}

fn integrate_pass<T: Real, F>(domain: &Domain<T>, q: usize, kinds: &[JacobianKind], md: &F) -> Result<Pass<T>>
where
    F: Fn(Vec2<T>) -> MetricDifferential<T> + Sync,
{
    let nodes = domain.nodes(q);
    let per_node: Vec<Result<(Vec<T>, bool, T)>> = nodes
        .par_iter()
        .map(|(p, w)| {
            let d = md(*p);
            let js = kinds
                .iter()
                .map(|k| jacobian(&d.norm, *k).map(|j| j * *w))
                .collect::<Result<Vec<T>>>()?;
            Ok((js, d.flagged, d.subadditivity_defect))
        })
        .collect();
    let mut values = vec![T::zero(); kinds.len()];
    let mut flagged = 0;
    let mut defect = T::zero();
    for r in per_node {
        let (js, f, d) = r?;
        for (v, j) in values.iter_mut().zip(js) {
            *v += j;
        }
        flagged += usize::from(f);
        defect = defect.max(d);
    }
    Ok(Pass { values, flagged, defect })
}

/// `∫_E J(md_p f) dp` for each requested Jacobian, with metric differentials
/// supplied by `md`.
pub fn area_with<T: Real, F>(domain: &Domain<T>, quad: usize, kinds: &[JacobianKind], md: F) -> Result<AreaReport<T>>
where
    F: Fn(Vec2<T>) -> MetricDifferential<T> + Sync,
{
    let fine = integrate_pass(domain, quad, kinds, &md)?;
    let coarse = integrate_pass(domain, (quad / 2).max(1), kinds, &md)?;
    let nodes = domain.nodes(quad).len();
    Ok(AreaReport {
        kinds: kinds.to_vec(),
        error_indicator: fine.values.iter().zip(&coarse.values).map(|(a, b)| (*a - *b).abs()).collect(),
        values: fine.values,
        nodes,
        flagged: fine.flagged,
        max_subadditivity_defect: fine.defect,
    })
}

/// Area of a map into a metric space, with sampled metric differentials.
pub fn area<T: Real, M: ChartMap<T>>(
    map: &M,
    domain: &Domain<T>,
    kinds: &[JacobianKind],
    quad: usize,
    step: T,
    directions: usize,
) -> Result<AreaReport<T>> {
    area_with(domain, quad, kinds, |p| metric_differential(map, p, step, directions))
}

/// Area of a map into a normed space, with the configured differential.
pub fn area_normed<T: Real, M: NormedChartMap<T>>(
    map: &M,
    domain: &Domain<T>,
    kinds: &[JacobianKind],
    config: &AreaConfig,
) -> Result<AreaReport<T>> {
    let h = T::lit(config.step);
    match config.method {
        DifferentialMethod::Sampled { directions } => area(map, domain, kinds, config.quad, h, directions),
        DifferentialMethod::Linearized => area_with(domain, config.quad, kinds, |p| linearized_differential(map, p, h)),
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(bound = "T: Real")]
pub struct FillingReport<T> {
    pub length: T,
    /// `L² / 2π`.
    pub bound: T,
    pub slack: T,
    /// Lipschitz constant of the constant-speed reparametrization.
    pub speed: T,
    pub grid_size: usize,
    pub area: AreaReport<T>,
    /// `area ≤ bound·(1 + slack)` per Jacobian.
    pub satisfied: Vec<bool>,
}

impl<T: Real> FillingReport<T> {
    pub fn all_satisfied(&self) -> bool {
        self.satisfied.iter().all(|s| *s)
    }
}

/// Extends the constant-speed reparametrization of `curve` to the hemisphere
/// and compares its area with `L² / 2π`.
pub fn filling_area_bound<T: Real>(
    curve: &LipschitzCurve<T>,
    kinds: &[JacobianKind],
    grid_size: usize,
    config: &AreaConfig,
    slack: T,
) -> Result<FillingReport<T>> {
    if !(slack >= T::zero()) {
        return Err(Error::Domain(format!("slack {slack} must be nonnegative")));
    }
    let length = curve.length()?;
    let bound = length * length / T::two_pi();
    let unit = curve.constant_speed(REPARAM_SAMPLES)?;
    let map = extend(&unit, grid_size)?;
    let chart = ExtensionChart { map: &map };
    let area = area_normed(&chart, &Domain::hemisphere(), kinds, config)?;
    let limit = bound * (T::one() + slack);
    let satisfied = area.values.iter().map(|a| *a <= limit).collect();
    Ok(FillingReport {
        length,
        bound,
        slack,
        speed: unit.lipschitz(),
        grid_size,
        area,
        satisfied,
    })
}
