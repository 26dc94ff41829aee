//! Origin-centred minimum-area enclosing ellipses and John ellipses.

use crate::error::{Error, Result};
use crate::real::Real;

use super::norm::{gram_det, SymmetricPolygon, Vec2};

/// Default tolerance on the Khachiyan optimality gap.
pub const ELLIPSE_TOL: f64 = 1e-9;

const MAX_ITER: usize = 200_000;

/// The smallest ellipse `{y : yᵀ M y ≤ 1}` containing every `±p`, returned as
/// `M`.
///
/// In the plane the optimum touches two or three of the point pairs, so it
/// is found exactly among the ellipses through every pair and triple.
pub fn min_enclosing_centered<T: Real>(points: &[Vec2<T>]) -> Result<[[T; 2]; 2]> {
    let n = points.len();
    let scale = points.iter().fold(T::zero(), |m, p| m.max(p[0].abs()).max(p[1].abs()));
    if !(scale > T::zero()) {
        return Err(Error::InvalidNorm("points do not span the plane".into()));
    }
    let quad = |m: &[[T; 2]; 2], p: &Vec2<T>| m[0][0] * p[0] * p[0] + T::lit(2.0) * m[0][1] * p[0] * p[1] + m[1][1] * p[1] * p[1];
    let mut best: Option<([[T; 2]; 2], T)> = None;
    // each candidate is shrunk until it encloses every point
    let mut consider = |m: [[T; 2]; 2]| {
        if !(m[0][0] > T::zero()) || !(gram_det(&m) > T::zero()) {
            return;
        }
        let v = points.iter().fold(T::zero(), |v, p| v.max(quad(&m, p)));
        if !(v > T::zero()) {
            return;
        }
        let m = [[m[0][0] / v, m[0][1] / v], [m[1][0] / v, m[1][1] / v]];
        let det = gram_det(&m);
        if best.map_or(true, |(_, d)| det > d) {
            best = Some((m, det));
        }
    };
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (points[i], points[j]);
            let c = a[0] * b[1] - a[1] * b[0];
            if c.abs() > T::epsilon() * scale * scale {
                // P⁻ᵀP⁻¹ for P = [a b] passes through ±a and ±b
                let r1 = [b[1] / c, -b[0] / c];
                let r2 = [-a[1] / c, a[0] / c];
                let off = r1[0] * r1[1] + r2[0] * r2[1];
                consider([[r1[0] * r1[0] + r2[0] * r2[0], off], [off, r1[1] * r1[1] + r2[1] * r2[1]]]);
            }
            for l in j + 1..n {
                let c = points[l];
                let rows = [a, b, c].map(|p| [p[0] * p[0], T::lit(2.0) * p[0] * p[1], p[1] * p[1]]);
                if let Some(sol) = solve3(rows, [T::one(); 3]) {
                    consider([[sol[0], sol[1]], [sol[1], sol[2]]]);
                }
            }
        }
    }
    best.map(|(m, _)| m)
        .ok_or_else(|| Error::InvalidNorm("points do not span the plane".into()))
}

fn solve3<T: Real>(a: [[T; 3]; 3], b: [T; 3]) -> Option<[T; 3]> {
    let det = |m: &[[T; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(&a);
    let norm = a.iter().flatten().fold(T::zero(), |m, x| m.max(x.abs()));
    if !(d.abs() > T::epsilon() * T::lit(64.0) * norm * norm * norm) {
        return None;
    }
    let mut out = [T::zero(); 3];
    for (c, o) in out.iter_mut().enumerate() {
        let mut m = a;
        for r in 0..3 {
            m[r][c] = b[r];
        }
        *o = det(&m) / d;
    }
    Some(out)
}

/// Khachiyan's algorithm for the same problem, with Wolfe–Atwood away steps;
/// stops when `max_i pᵢᵀ X⁻¹ pᵢ ≤ 2(1 + tol)`.
pub fn khachiyan_centered<T: Real>(points: &[Vec2<T>], tol: T) -> Result<[[T; 2]; 2]> {
    let n = points.len();
    if n < 2 {
        return Err(Error::InvalidNorm("need at least two directions".into()));
    }
    let d = T::lit(2.0);
    let mut u = vec![T::one() / T::from_usize_lossy(n); n];
    let mut gap = T::infinity();
    for _ in 0..MAX_ITER {
        let mut x = [[T::zero(); 2]; 2];
        for (p, w) in points.iter().zip(&u) {
            x[0][0] += *w * p[0] * p[0];
            x[0][1] += *w * p[0] * p[1];
            x[1][1] += *w * p[1] * p[1];
        }
        x[1][0] = x[0][1];
        let det = gram_det(&x);
        if !(det > T::zero()) {
            return Err(Error::InvalidNorm("points do not span the plane".into()));
        }
        let inv = [[x[1][1] / det, -x[0][1] / det], [-x[1][0] / det, x[0][0] / det]];
        let g = |p: &Vec2<T>| {
            inv[0][0] * p[0] * p[0] + (inv[0][1] + inv[1][0]) * p[0] * p[1] + inv[1][1] * p[1] * p[1]
        };
        let (mut jmax, mut gmax) = (0, T::neg_infinity());
        let (mut jmin, mut gmin) = (usize::MAX, T::infinity());
        for (j, p) in points.iter().enumerate() {
            let gj = g(p);
            if gj > gmax {
                gmax = gj;
                jmax = j;
            }
            if u[j] > T::zero() && gj < gmin {
                gmin = gj;
                jmin = j;
            }
        }
        gap = gmax / d - T::one();
        if gap <= tol {
            // scaled so every point is enclosed
            let s = d * (T::one() + gap.max(T::zero()));
            return Ok([[inv[0][0] / s, inv[0][1] / s], [inv[1][0] / s, inv[1][1] / s]]);
        }
        if jmin != usize::MAX && d - gmin > gmax - d && gmin > T::one() {
            // away step, clipped so the weight stays nonnegative
            let alpha = (gmin - d) / (d * (gmin - T::one()));
            let floor = -u[jmin] / (T::one() - u[jmin]);
            let alpha = alpha.max(floor);
            for w in u.iter_mut() {
                *w *= T::one() - alpha;
            }
            u[jmin] += alpha;
            if u[jmin] < T::zero() {
                u[jmin] = T::zero();
            }
        } else {
            let alpha = (gmax - d) / (d * (gmax - T::one()));
            for w in u.iter_mut() {
                *w *= T::one() - alpha;
            }
            u[jmax] += alpha;
        }
    }
    Err(Error::EllipseNonConvergence {
        iterations: MAX_ITER,
        gap: gap.to_f64_lossy(),
    })
}

/// The John ellipse `{x : xᵀ A x ≤ 1}` of a symmetric polygon, returned as `A`.
///
/// The polar of the maximal inscribed ellipse is the minimal ellipse
/// enclosing the polar polygon, so `A` is the inverse of that ellipse's matrix.
pub fn john_ellipse<T: Real>(poly: &SymmetricPolygon<T>) -> Result<[[T; 2]; 2]> {
    let dual = poly.dual_vertices();
    let half = &dual[..dual.len() / 2];
    let m = min_enclosing_centered(half)?;
    let det = gram_det(&m);
    Ok([[m[1][1] / det, -m[0][1] / det], [-m[1][0] / det, m[0][0] / det]])
}
