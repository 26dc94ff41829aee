//! Metric differentials of maps from planar domains.

use serde::Serialize;

use crate::extension::{HemisphereMap, NormedTarget};
use crate::real::Real;
use crate::sphere::{sphere_distance, SpherePoint};

use super::norm::{PlanarNorm, SymmetricPolygon, Vec2};

/// Default number of sampled directions.
pub const DEFAULT_DIRECTIONS: usize = 32;
/// Default finite-difference step.
pub const DEFAULT_STEP: f64 = 1e-2;
/// Relative subadditivity defect beyond which a differential is flagged.
pub const SUBADDITIVITY_TOL: f64 = 1e-3;

/// A map from a planar parameter domain into a metric space.
pub trait ChartMap<T: Real>: Sync {
    type Value: Send;
    fn eval(&self, p: Vec2<T>) -> Self::Value;
    fn distance(&self, a: &Self::Value, b: &Self::Value) -> T;
    /// Distance from `p` to the edge of the domain of definition.
    fn margin(&self, _p: Vec2<T>) -> T {
        T::infinity()
    }
    /// Distances from `a` at or below this are rounding noise.
    fn resolution(&self, _a: &Self::Value) -> T {
        T::zero()
    }
}

fn normed_resolution<T: Real>(target: &NormedTarget<T>, a: &[T]) -> T {
    T::lit(256.0) * T::epsilon() * target.norm(a)
}

/// A chart map into a finite-dimensional normed space.
pub trait NormedChartMap<T: Real>: ChartMap<T, Value = Vec<T>> {
    fn target(&self) -> &NormedTarget<T>;
}

/// How metric differentials are estimated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DifferentialMethod {
    /// Distances sampled along `directions` rays, symmetrized and
    /// Richardson-extrapolated; unit ball = hull of the sampled points.
    Sampled { directions: usize },
    /// Finite-difference Jacobian pulled back through the target norm.
    Linearized,
}

impl Default for DifferentialMethod {
    fn default() -> Self {
        DifferentialMethod::Sampled {
            directions: DEFAULT_DIRECTIONS,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(bound = "T: Real")]
pub struct MetricDifferential<T> {
    pub point: Vec2<T>,
    pub norm: PlanarNorm<T>,
    /// Sampled values `s(vₖ)` for `vₖ` at angles `2πk/K` (empty when
    /// linearized).
    pub samples: Vec<T>,
    /// Largest `s(vₖ) − (s(vₖ₋₁) + s(vₖ₊₁)) / (2 cos(2π/K))`, relative to
    /// `max s`.
    pub subadditivity_defect: T,
    pub flagged: bool,
}

fn usable_step<T: Real>(h: T, margin: T) -> T {
    h.min(margin * T::lit(0.9))
}

/// Sampled metric differential at `p` with step `h`.
pub fn metric_differential<T: Real, M: ChartMap<T> + ?Sized>(
    map: &M,
    p: Vec2<T>,
    h: T,
    directions: usize,
) -> MetricDifferential<T> {
    let k = directions.max(4) & !1;
    let h = usable_step(h, map.margin(p));
    let f0 = map.eval(p);
    let dirs: Vec<Vec2<T>> = (0..k)
        .map(|i| {
            let (s, c) = (T::two_pi() * T::from_usize_lossy(i) / T::from_usize_lossy(k)).sin_cos();
            [c, s]
        })
        .collect();
    let quotient = |v: Vec2<T>, step: T| {
        let q = map.eval([p[0] + step * v[0], p[1] + step * v[1]]);
        let d = map.distance(&q, &f0);
        if d <= map.resolution(&f0) {
            T::zero()
        } else {
            d / step
        }
    };
    let raw: Vec<T> = dirs
        .iter()
        .map(|v| {
            let coarse = quotient(*v, h);
            let fine = quotient(*v, h * T::lit(0.5));
            (T::lit(2.0) * fine - coarse).max(T::zero())
        })
        .collect();
    let half = k / 2;
    let samples: Vec<T> = (0..k).map(|i| (raw[i] + raw[(i + half) % k]) * T::lit(0.5)).collect();
    from_samples(p, &dirs, samples)
}

fn from_samples<T: Real>(p: Vec2<T>, dirs: &[Vec2<T>], samples: Vec<T>) -> MetricDifferential<T> {
    let k = samples.len();
    let smax = samples.iter().copied().fold(T::zero(), T::max);
    let smin = samples.iter().copied().fold(T::infinity(), T::min);
    let alpha = T::one() / (T::lit(2.0) * (T::two_pi() / T::from_usize_lossy(k)).cos());
    let mut defect = T::zero();
    if smax > T::zero() {
        for i in 0..k {
            let bound = alpha * (samples[(i + k - 1) % k] + samples[(i + 1) % k]);
            defect = defect.max((samples[i] - bound) / smax);
        }
    }
    let norm = if !(smax > T::zero()) || smin <= T::lit(1e-9) * smax {
        PlanarNorm::Degenerate
    } else {
        let pts: Vec<Vec2<T>> = dirs[..k / 2]
            .iter()
            .zip(&samples)
            .map(|(v, s)| [v[0] / *s, v[1] / *s])
            .collect();
        SymmetricPolygon::hull_of(&pts)
            .map(PlanarNorm::Polygon)
            .unwrap_or(PlanarNorm::Degenerate)
    };
    MetricDifferential {
        point: p,
        norm,
        samples,
        subadditivity_defect: defect,
        flagged: defect > T::lit(SUBADDITIVITY_TOL),
    }
}

/// Metric differential from a Richardson-extrapolated central-difference
/// Jacobian, pulled back through the target norm.
pub fn linearized_differential<T: Real, M: NormedChartMap<T> + ?Sized>(
    map: &M,
    p: Vec2<T>,
    h: T,
) -> MetricDifferential<T> {
    let h = usable_step(h, map.margin(p));
    let central = |axis: usize, step: T| {
        let mut a = p;
        let mut b = p;
        a[axis] += step;
        b[axis] -= step;
        let (fa, fb) = (map.eval(a), map.eval(b));
        if map.distance(&fa, &fb) <= map.resolution(&fa).max(map.resolution(&fb)) {
            return vec![T::zero(); fa.len()];
        }
        fa.iter().zip(&fb).map(|(x, y)| (*x - *y) / (step + step)).collect::<Vec<T>>()
    };
    let mut cols = [Vec::new(), Vec::new()];
    for (axis, col) in cols.iter_mut().enumerate() {
        let coarse = central(axis, h);
        let fine = central(axis, h * T::lit(0.5));
        *col = fine
            .iter()
            .zip(&coarse)
            .map(|(f, c)| (T::lit(4.0) * *f - *c) / T::lit(3.0))
            .collect();
    }
    let rows: Vec<Vec2<T>> = (0..cols[0].len()).map(|i| [cols[0][i], cols[1][i]]).collect();
    MetricDifferential {
        point: p,
        norm: map.target().pullback(&rows),
        samples: Vec::new(),
        subadditivity_defect: T::zero(),
        flagged: false,
    }
}

/// Equidistant azimuthal chart of the hemisphere: radius = colatitude,
/// angle = azimuth, on the disc of radius `π/2`.
pub fn hemisphere_chart<T: Real>(p: Vec2<T>) -> SpherePoint<T> {
    let r = p[0].hypot(p[1]).min(T::FRAC_PI_2());
    let az = if r > T::zero() { p[1].atan2(p[0]) } else { T::zero() };
    SpherePoint::new(az, r).expect("chart point in range")
}

fn chart_margin<T: Real>(p: Vec2<T>) -> T {
    (T::FRAC_PI_2() - p[0].hypot(p[1])).max(T::zero())
}

/// `f ∘ φ` for an extension `f` and the azimuthal chart `φ`.
pub struct ExtensionChart<'a, T> {
    pub map: &'a HemisphereMap<T>,
}

impl<T: Real> ChartMap<T> for ExtensionChart<'_, T> {
    type Value = Vec<T>;
    fn eval(&self, p: Vec2<T>) -> Vec<T> {
        self.map.eval(&hemisphere_chart(p))
    }
    fn distance(&self, a: &Vec<T>, b: &Vec<T>) -> T {
        self.map.target().distance(a, b)
    }
    fn margin(&self, p: Vec2<T>) -> T {
        chart_margin(p)
    }
    fn resolution(&self, a: &Vec<T>) -> T {
        normed_resolution(self.map.target(), a)
    }
}

impl<T: Real> NormedChartMap<T> for ExtensionChart<'_, T> {
    fn target(&self) -> &NormedTarget<T> {
        self.map.target()
    }
}

/// The chart `φ` itself, into the hemisphere with its round metric.
pub struct HemisphereIdentity;

impl<T: Real> ChartMap<T> for HemisphereIdentity {
    type Value = SpherePoint<T>;
    fn eval(&self, p: Vec2<T>) -> SpherePoint<T> {
        hemisphere_chart(p)
    }
    fn distance(&self, a: &SpherePoint<T>, b: &SpherePoint<T>) -> T {
        sphere_distance(a, b)
    }
    fn margin(&self, p: Vec2<T>) -> T {
        chart_margin(p)
    }
}

/// `p ↦ A p + c` into a normed space, `A` given by rows.
pub struct AffineMap<T> {
    pub rows: Vec<Vec2<T>>,
    pub offset: Vec<T>,
    pub target: NormedTarget<T>,
}

impl<T: Real> ChartMap<T> for AffineMap<T> {
    type Value = Vec<T>;
    fn eval(&self, p: Vec2<T>) -> Vec<T> {
        self.rows
            .iter()
            .zip(&self.offset)
            .map(|(r, c)| r[0] * p[0] + r[1] * p[1] + *c)
            .collect()
    }
    fn distance(&self, a: &Vec<T>, b: &Vec<T>) -> T {
        self.target.distance(a, b)
    }
    fn resolution(&self, a: &Vec<T>) -> T {
        normed_resolution(&self.target, a)
    }
}

impl<T: Real> NormedChartMap<T> for AffineMap<T> {
    fn target(&self) -> &NormedTarget<T> {
        &self.target
    }
}

/// An arbitrary closure into a normed space, with an optional domain margin.
pub struct FnMap<T, F> {
    pub f: F,
    pub target: NormedTarget<T>,
    pub margin: Option<fn(Vec2<T>) -> T>,
}

impl<T: Real, F: Fn(Vec2<T>) -> Vec<T> + Sync> ChartMap<T> for FnMap<T, F> {
    type Value = Vec<T>;
    fn eval(&self, p: Vec2<T>) -> Vec<T> {
        (self.f)(p)
    }
    fn distance(&self, a: &Vec<T>, b: &Vec<T>) -> T {
        self.target.distance(a, b)
    }
    fn margin(&self, p: Vec2<T>) -> T {
        self.margin.map_or(T::infinity(), |m| m(p))
    }
    fn resolution(&self, a: &Vec<T>) -> T {
        normed_resolution(&self.target, a)
    }
}

impl<T: Real, F: Fn(Vec2<T>) -> Vec<T> + Sync> NormedChartMap<T> for FnMap<T, F> {
    fn target(&self) -> &NormedTarget<T> {
        &self.target
    }
}
