//! Finite-dimensional normed target spaces.

use serde::{Deserialize, Serialize};

use crate::areas::norm::{convex_hull, PlanarNorm, SymmetricPolygon, Vec2};
use crate::error::{Error, Result};
use crate::real::Real;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real", rename_all = "lowercase")]
pub enum TargetNorm<T> {
    L1,
    L2,
    Linf,
    /// Planar norm whose unit ball is the given symmetric polygon.
    Polygon(SymmetricPolygon<T>),
    /// Planar norm `√(xᵀ G x)`.
    Ellipse([[T; 2]; 2]),
}

/// `(ℝⁿ, ‖·‖)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real", try_from = "TargetRecord<T>")]
pub struct NormedTarget<T> {
    pub dim: usize,
    pub norm: TargetNorm<T>,
}

#[derive(Deserialize)]
#[serde(bound = "T: Real", deny_unknown_fields)]
struct TargetRecord<T> {
    dim: usize,
    norm: TargetNorm<T>,
}

impl<T: Real> TryFrom<TargetRecord<T>> for NormedTarget<T> {
    type Error = Error;
    fn try_from(r: TargetRecord<T>) -> Result<Self> {
        Self::new(r.dim, r.norm)
    }
}

impl<T: Real> NormedTarget<T> {
    pub fn new(dim: usize, norm: TargetNorm<T>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidNorm("dimension must be positive".into()));
        }
        match &norm {
            TargetNorm::Polygon(_) | TargetNorm::Ellipse(_) if dim != 2 => {
                return Err(Error::InvalidNorm(format!(
                    "polygon and ellipse norms are planar, but dim = {dim}"
                )))
            }
            TargetNorm::Ellipse(g) => {
                PlanarNorm::ellipse(*g)?;
            }
            _ => {}
        }
        Ok(Self { dim, norm })
    }

    pub fn euclidean(dim: usize) -> Self {
        Self {
            dim,
            norm: TargetNorm::L2,
        }
    }

    pub fn linf(dim: usize) -> Self {
        Self {
            dim,
            norm: TargetNorm::Linf,
        }
    }

    pub fn l1(dim: usize) -> Self {
        Self {
            dim,
            norm: TargetNorm::L1,
        }
    }

    pub fn norm(&self, x: &[T]) -> T {
        match &self.norm {
            TargetNorm::L1 => x.iter().map(|v| v.abs()).sum(),
            TargetNorm::L2 => x.iter().map(|v| *v * *v).sum::<T>().sqrt(),
            TargetNorm::Linf => x.iter().fold(T::zero(), |m, v| m.max(v.abs())),
            TargetNorm::Polygon(p) => p.gauge([x[0], x[1]]),
            TargetNorm::Ellipse(g) => PlanarNorm::Ellipse(*g).eval([x[0], x[1]]),
        }
    }

    pub fn distance(&self, a: &[T], b: &[T]) -> T {
        match &self.norm {
            TargetNorm::L1 => a.iter().zip(b).map(|(x, y)| (*x - *y).abs()).sum(),
            TargetNorm::L2 => a.iter().zip(b).map(|(x, y)| (*x - *y) * (*x - *y)).sum::<T>().sqrt(),
            TargetNorm::Linf => a.iter().zip(b).fold(T::zero(), |m, (x, y)| m.max((*x - *y).abs())),
            _ => self.norm(&[a[0] - b[0], a[1] - b[1]]),
        }
    }

    /// The seminorm `v ↦ ‖A v‖` for a linear map `A: ℝ² → ℝⁿ` given by its
    /// rows `aᵢ = (∂ᵢ/∂x, ∂ᵢ/∂y)`.
    pub fn pullback(&self, rows: &[Vec2<T>]) -> PlanarNorm<T> {
        let scale = rows.iter().fold(T::zero(), |m, r| m.max(r[0].abs()).max(r[1].abs()));
        if !(scale > T::zero()) {
            return PlanarNorm::Degenerate;
        }
        let rank_tol = T::lit(1e-10) * scale * scale;
        match &self.norm {
            TargetNorm::L2 => {
                let mut g = [[T::zero(); 2]; 2];
                for r in rows {
                    g[0][0] += r[0] * r[0];
                    g[0][1] += r[0] * r[1];
                    g[1][1] += r[1] * r[1];
                }
                g[1][0] = g[0][1];
                PlanarNorm::ellipse(g)
                    .ok()
                    .filter(|_| g[0][0] * g[1][1] - g[0][1] * g[0][1] > rank_tol * rank_tol)
                    .unwrap_or(PlanarNorm::Degenerate)
            }
            TargetNorm::Linf => {
                // the dual ball is the symmetric hull of the rows
                SymmetricPolygon::hull_of(rows)
                    .ok()
                    .filter(|p| p.area() > rank_tol)
                    .map(|p| PlanarNorm::Polygon(p.polar()))
                    .unwrap_or(PlanarNorm::Degenerate)
            }
            TargetNorm::L1 => {
                // the dual ball is the zonotope Σ [−aᵢ, aᵢ]
                zonotope(rows)
                    .filter(|p| p.area() > rank_tol)
                    .map(|p| PlanarNorm::Polygon(p.polar()))
                    .unwrap_or(PlanarNorm::Degenerate)
            }
            TargetNorm::Polygon(_) | TargetNorm::Ellipse(_) => {
                let m = [[rows[0][0], rows[0][1]], [rows[1][0], rows[1][1]]];
                let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
                if det.abs() <= rank_tol {
                    return PlanarNorm::Degenerate;
                }
                let planar = match &self.norm {
                    TargetNorm::Polygon(p) => PlanarNorm::Polygon(p.clone()),
                    TargetNorm::Ellipse(g) => PlanarNorm::Ellipse(*g),
                    _ => unreachable!(),
                };
                planar.compose_linear(m)
            }
        }
    }
}

/// `Σ [−gᵢ, gᵢ]` as a symmetric polygon.
fn zonotope<T: Real>(gens: &[Vec2<T>]) -> Option<SymmetricPolygon<T>> {
    let mut g: Vec<Vec2<T>> = gens
        .iter()
        .filter(|v| v[0] != T::zero() || v[1] != T::zero())
        .map(|v| if v[1] < T::zero() || (v[1] == T::zero() && v[0] < T::zero()) { [-v[0], -v[1]] } else { *v })
        .collect();
    g.sort_by(|a, b| a[1].atan2(a[0]).partial_cmp(&b[1].atan2(b[0])).expect("finite"));
    let mut p = [T::zero(); 2];
    for v in &g {
        p[0] -= v[0];
        p[1] -= v[1];
    }
    let mut pts = vec![p];
    for v in &g {
        p[0] += v[0] + v[0];
        p[1] += v[1] + v[1];
        pts.push(p);
    }
    let mirrored: Vec<Vec2<T>> = pts.iter().map(|q| [-q[0], -q[1]]).collect();
    pts.extend(mirrored);
    SymmetricPolygon::new(convex_hull(&pts)).ok()
}
