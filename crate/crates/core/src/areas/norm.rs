//! Norms and seminorms on the plane.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::Real;

pub type Vec2<T> = [T; 2];

#[inline]
fn cross<T: Real>(a: Vec2<T>, b: Vec2<T>) -> T {
    a[0] * b[1] - a[1] * b[0]
}

/// Shoelace area of a polygon given counterclockwise.
pub fn shoelace<T: Real>(vertices: &[Vec2<T>]) -> T {
    let n = vertices.len();
    let twice: T = (0..n).map(|i| cross(vertices[i], vertices[(i + 1) % n])).sum();
    twice * T::lit(0.5)
}

/// Convex hull (counterclockwise, collinear points dropped), by monotone chain.
pub fn convex_hull<T: Real>(points: &[Vec2<T>]) -> Vec<Vec2<T>> {
    let mut pts: Vec<Vec2<T>> = points.iter().copied().filter(|p| p[0].is_finite() && p[1].is_finite()).collect();
    pts.sort_by(|a, b| {
        a[0].partial_cmp(&b[0])
            .expect("finite")
            .then(a[1].partial_cmp(&b[1]).expect("finite"))
    });
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let scale = pts.iter().fold(T::zero(), |m, p| m.max(p[0].abs()).max(p[1].abs()));
    let eps = T::epsilon() * T::lit(16.0) * scale * scale;
    let turn = |o: Vec2<T>, a: Vec2<T>, b: Vec2<T>| cross([a[0] - o[0], a[1] - o[1]], [b[0] - o[0], b[1] - o[1]]);
    let mut hull: Vec<Vec2<T>> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Vec2<T>>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= eps {
                hull.pop();
            }
            hull.push(p);
        }
        // each chain's last point starts the other chain
        hull.pop();
    }
    hull
}

/// An origin-symmetric convex polygon, stored with its polar dual.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real", try_from = "Vec<Vec2<T>>", into = "Vec<Vec2<T>>")]
pub struct SymmetricPolygon<T> {
    vertices: Vec<Vec2<T>>,
    dual: Vec<Vec2<T>>,
}

impl<T: Real> TryFrom<Vec<Vec2<T>>> for SymmetricPolygon<T> {
    type Error = Error;
    fn try_from(v: Vec<Vec2<T>>) -> Result<Self> {
        Self::new(v)
    }
}

impl<T: Real> From<SymmetricPolygon<T>> for Vec<Vec2<T>> {
    fn from(p: SymmetricPolygon<T>) -> Self {
        p.vertices
    }
}

impl<T: Real> SymmetricPolygon<T> {
    /// Validates a counterclockwise, convex, origin-symmetric vertex list.
    pub fn new(vertices: Vec<Vec2<T>>) -> Result<Self> {
        let n = vertices.len();
        if n < 4 || n % 2 != 0 {
            return Err(Error::InvalidNorm(format!(
                "a symmetric polygon needs an even number ≥ 4 of vertices, got {n}"
            )));
        }
        if vertices.iter().any(|v| !v[0].is_finite() || !v[1].is_finite()) {
            return Err(Error::InvalidNorm("non-finite vertex".into()));
        }
        let scale = vertices.iter().fold(T::zero(), |m, p| m.max(p[0].abs()).max(p[1].abs()));
        let tol = T::lit(1e-9) * scale.max(T::one());
        let h = n / 2;
        for i in 0..h {
            let (a, b) = (vertices[i], vertices[i + h]);
            if (a[0] + b[0]).abs() > tol || (a[1] + b[1]).abs() > tol {
                return Err(Error::InvalidNorm(format!(
                    "vertex {i} and vertex {} are not opposite",
                    i + h
                )));
            }
        }
        for i in 0..n {
            let (a, b, c) = (vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n]);
            let t = cross([b[0] - a[0], b[1] - a[1]], [c[0] - b[0], c[1] - b[1]]);
            if !(t > T::zero()) {
                return Err(Error::InvalidNorm(format!(
                    "polygon is not strictly convex and counterclockwise at vertex {}",
                    (i + 1) % n
                )));
            }
        }
        if !(shoelace(&vertices) > T::zero()) {
            return Err(Error::InvalidNorm("polygon has no area".into()));
        }
        let dual = polar_vertices(&vertices);
        Ok(Self { vertices, dual })
    }

    /// The symmetric convex hull of `points ∪ −points`.
    pub fn hull_of(points: &[Vec2<T>]) -> Result<Self> {
        let mut all: Vec<Vec2<T>> = points.to_vec();
        all.extend(points.iter().map(|p| [-p[0], -p[1]]));
        let hull = convex_hull(&all);
        Self::new(hull)
    }

    pub fn vertices(&self) -> &[Vec2<T>] {
        &self.vertices
    }

    /// Vertices of the polar body `{w : ⟨w, v⟩ ≤ 1 for all v in the polygon}`.
    pub fn dual_vertices(&self) -> &[Vec2<T>] {
        &self.dual
    }

    /// Gauge of the polygon: `max_w ⟨w, v⟩` over dual vertices.
    pub fn gauge(&self, v: Vec2<T>) -> T {
        self.dual
            .iter()
            .map(|w| w[0] * v[0] + w[1] * v[1])
            .fold(T::zero(), T::max)
    }

    pub fn area(&self) -> T {
        shoelace(&self.vertices)
    }

    pub fn dual_area(&self) -> T {
        shoelace(&self.dual)
    }

    pub fn polar(&self) -> Self {
        Self {
            vertices: self.dual.clone(),
            dual: self.vertices.clone(),
        }
    }

    /// The unit ball of `v ↦ ‖Mv‖` for invertible `M`, i.e. `M⁻¹(B)`.
    pub fn preimage(&self, m: [[T; 2]; 2]) -> Result<Self> {
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if !(det.abs() > T::zero()) {
            return Err(Error::InvalidNorm("singular linear map".into()));
        }
        let inv = [[m[1][1] / det, -m[0][1] / det], [-m[1][0] / det, m[0][0] / det]];
        let mut vs: Vec<Vec2<T>> = self
            .vertices
            .iter()
            .map(|v| [inv[0][0] * v[0] + inv[0][1] * v[1], inv[1][0] * v[0] + inv[1][1] * v[1]])
            .collect();
        if det < T::zero() {
            vs.reverse();
        }
        Self::new(vs)
    }
}

fn polar_vertices<T: Real>(vs: &[Vec2<T>]) -> Vec<Vec2<T>> {
    let n = vs.len();
    (0..n)
        .map(|i| {
            let (a, b) = (vs[i], vs[(i + 1) % n]);
            let c = cross(a, b);
            [(b[1] - a[1]) / c, (a[0] - b[0]) / c]
        })
        .collect()
}

/// A norm or seminorm on `ℝ²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real", rename_all = "lowercase")]
pub enum PlanarNorm<T> {
    #[serde(alias = "l2")]
    Euclidean,
    L1,
    Linf,
    /// `‖v‖ = √(vᵀ G v)` for a positive definite Gram matrix `G`.
    Ellipse([[T; 2]; 2]),
    Polygon(SymmetricPolygon<T>),
    /// A seminorm with nontrivial kernel; all Jacobians vanish.
    Degenerate,
}

impl<T: Real> PlanarNorm<T> {
    pub fn ellipse(gram: [[T; 2]; 2]) -> Result<Self> {
        let det = gram[0][0] * gram[1][1] - gram[0][1] * gram[1][0];
        if (gram[0][1] - gram[1][0]).abs() > T::lit(1e-12) * (gram[0][0].abs() + gram[1][1].abs()) {
            return Err(Error::InvalidNorm("Gram matrix is not symmetric".into()));
        }
        if !(gram[0][0] > T::zero()) || !(det > T::zero()) {
            return Err(Error::InvalidNorm("Gram matrix is not positive definite".into()));
        }
        Ok(PlanarNorm::Ellipse(gram))
    }

    pub fn polygon(vertices: Vec<Vec2<T>>) -> Result<Self> {
        Ok(PlanarNorm::Polygon(SymmetricPolygon::new(vertices)?))
    }

    /// Re-validates a deserialized value.
    pub fn validated(self) -> Result<Self> {
        match self {
            PlanarNorm::Ellipse(g) => Self::ellipse(g),
            other => Ok(other),
        }
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self, PlanarNorm::Degenerate)
    }

    pub fn eval(&self, v: Vec2<T>) -> T {
        match self {
            PlanarNorm::Euclidean => v[0].hypot(v[1]),
            PlanarNorm::L1 => v[0].abs() + v[1].abs(),
            PlanarNorm::Linf => v[0].abs().max(v[1].abs()),
            PlanarNorm::Ellipse(g) => {
                let q = g[0][0] * v[0] * v[0] + (g[0][1] + g[1][0]) * v[0] * v[1] + g[1][1] * v[1] * v[1];
                q.max(T::zero()).sqrt()
            }
            PlanarNorm::Polygon(p) => p.gauge(v),
            PlanarNorm::Degenerate => T::nan(),
        }
    }

    /// Area of the unit ball (infinite for degenerate seminorms).
    pub fn ball_area(&self) -> T {
        match self {
            PlanarNorm::Euclidean => T::PI(),
            PlanarNorm::L1 => T::lit(2.0),
            PlanarNorm::Linf => T::lit(4.0),
            PlanarNorm::Ellipse(g) => T::PI() / gram_det(g).sqrt(),
            PlanarNorm::Polygon(p) => p.area(),
            PlanarNorm::Degenerate => T::infinity(),
        }
    }

    /// Area of the dual unit ball (zero for degenerate seminorms).
    pub fn dual_ball_area(&self) -> T {
        match self {
            PlanarNorm::Euclidean => T::PI(),
            PlanarNorm::L1 => T::lit(4.0),
            PlanarNorm::Linf => T::lit(2.0),
            PlanarNorm::Ellipse(g) => T::PI() * gram_det(g).sqrt(),
            PlanarNorm::Polygon(p) => p.dual_area(),
            PlanarNorm::Degenerate => T::zero(),
        }
    }

    /// The dual norm.
    pub fn dual(&self) -> Self {
        match self {
            PlanarNorm::Euclidean => PlanarNorm::Euclidean,
            PlanarNorm::L1 => PlanarNorm::Linf,
            PlanarNorm::Linf => PlanarNorm::L1,
            PlanarNorm::Ellipse(g) => {
                let d = gram_det(g);
                PlanarNorm::Ellipse([[g[1][1] / d, -g[0][1] / d], [-g[1][0] / d, g[0][0] / d]])
            }
            PlanarNorm::Polygon(p) => PlanarNorm::Polygon(p.polar()),
            PlanarNorm::Degenerate => PlanarNorm::Degenerate,
        }
    }

    /// The unit ball as a polygon, where it is one.
    pub fn as_polygon(&self) -> Option<SymmetricPolygon<T>> {
        let o = T::one();
        let z = T::zero();
        match self {
            PlanarNorm::L1 => SymmetricPolygon::new(vec![[o, z], [z, o], [-o, z], [z, -o]]).ok(),
            PlanarNorm::Linf => SymmetricPolygon::new(vec![[o, o], [-o, o], [-o, -o], [o, -o]]).ok(),
            PlanarNorm::Polygon(p) => Some(p.clone()),
            _ => None,
        }
    }

    /// The norm `v ↦ ‖Mv‖`; degenerate when `M` is singular.
    pub fn compose_linear(&self, m: [[T; 2]; 2]) -> Self {
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if det == T::zero() || self.is_degenerate() {
            return PlanarNorm::Degenerate;
        }
        match self {
            PlanarNorm::Euclidean => PlanarNorm::Ellipse(mtm(m, [[T::one(), T::zero()], [T::zero(), T::one()]])),
            PlanarNorm::Ellipse(g) => PlanarNorm::Ellipse(mtm(m, *g)),
            _ => {
                let p = self.as_polygon().expect("polygonal");
                p.preimage(m).map(PlanarNorm::Polygon).unwrap_or(PlanarNorm::Degenerate)
            }
        }
    }
}

#[inline]
pub(crate) fn gram_det<T: Real>(g: &[[T; 2]; 2]) -> T {
    g[0][0] * g[1][1] - g[0][1] * g[1][0]
}

/// `Mᵀ G M`.
fn mtm<T: Real>(m: [[T; 2]; 2], g: [[T; 2]; 2]) -> [[T; 2]; 2] {
    let mut gm = [[T::zero(); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            gm[i][j] = g[i][0] * m[0][j] + g[i][1] * m[1][j];
        }
    }
    let mut out = [[T::zero(); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = m[0][i] * gm[0][j] + m[1][i] * gm[1][j];
        }
    }
    out[0][1] = (out[0][1] + out[1][0]) * T::lit(0.5);
    out[1][0] = out[0][1];
    out
}
