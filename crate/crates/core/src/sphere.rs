//! Closed-form spherical calculus on the closed upper hemisphere.
//!
//! Points are stored as `(azimuth, colatitude)`; the boundary circle is the
//! equator `colatitude = π/2`. The nearest boundary point to an interior point
//! `P` is the equator point `B` with the same azimuth, at distance
//! `π/2 − colatitude`, so `k_P = cos d(P, B) = sin(colatitude)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::{circle_distance, wrap_angle, Real};

/// A point of the closed hemisphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct SpherePoint<T> {
    azimuth: T,
    colatitude: T,
}

impl<T: Real> SpherePoint<T> {
    /// Builds a point, wrapping the azimuth into `[0, 2π)`.
    ///
    /// Colatitudes within `1e-12` outside `[0, π/2]` are clamped; anything
    /// further out is rejected.
    pub fn new(azimuth: T, colatitude: T) -> Result<Self> {
        if !azimuth.is_finite() || !colatitude.is_finite() {
            return Err(Error::InvalidPoint("non-finite coordinate".into()));
        }
        let half = T::FRAC_PI_2();
        let tol = T::seam_tol();
        if colatitude < -tol || colatitude > half + tol {
            return Err(Error::InvalidPoint(format!(
                "colatitude {colatitude} outside [0, π/2]"
            )));
        }
        let colatitude = colatitude.max(T::zero()).min(half);
        let azimuth = if colatitude == T::zero() {
            T::zero()
        } else {
            wrap_angle(azimuth)
        };
        Ok(Self {
            azimuth,
            colatitude,
        })
    }

    pub fn pole() -> Self {
        Self {
            azimuth: T::zero(),
            colatitude: T::zero(),
        }
    }

    /// The boundary point at the given azimuth.
    pub fn boundary(azimuth: T) -> Self {
        Self {
            azimuth: wrap_angle(azimuth),
            colatitude: T::FRAC_PI_2(),
        }
    }

    #[inline]
    pub fn azimuth(&self) -> T {
        self.azimuth
    }

    #[inline]
    pub fn colatitude(&self) -> T {
        self.colatitude
    }

    #[inline]
    pub fn is_boundary(&self) -> bool {
        self.colatitude == T::FRAC_PI_2()
    }

    /// `k_P = cos d(P, B)`, the cosine of the distance to the nearest
    /// boundary point.
    #[inline]
    pub fn k(&self) -> T {
        if self.is_boundary() {
            T::one()
        } else {
            self.colatitude.sin()
        }
    }

    /// True when the closed-form derivative formulas are too ill-conditioned
    /// and the point must be treated as lying on the boundary.
    #[inline]
    pub fn is_effectively_boundary(&self) -> bool {
        self.is_boundary() || self.k() > T::one() - degeneracy_margin::<T>()
    }

    /// Nearest boundary point `B` as a circle coordinate.
    #[inline]
    pub fn base(&self) -> BoundaryParam<T> {
        BoundaryParam::new(self.azimuth)
    }

    pub fn to_unit_vector(&self) -> [T; 3] {
        let (sc, cc) = self.colatitude.sin_cos();
        let (sa, ca) = self.azimuth.sin_cos();
        [sc * ca, sc * sa, cc]
    }

    /// Inverse of [`to_unit_vector`](Self::to_unit_vector); the vector need
    /// not be normalized. Points slightly below the equator are clamped onto
    /// it.
    pub fn from_vector(v: [T; 3]) -> Result<Self> {
        let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if !(r > T::zero()) || !r.is_finite() {
            return Err(Error::InvalidPoint("zero or non-finite vector".into()));
        }
        let z = v[2] / r;
        let rho = (v[0] * v[0] + v[1] * v[1]).sqrt() / r;
        let colat = rho.atan2(z.max(T::zero()));
        Self::new(v[1].atan2(v[0]), colat)
    }

    /// Applies the hemisphere isometry that rotates the boundary by `angle`.
    pub fn rotated(&self, angle: T) -> Self {
        if self.colatitude == T::zero() {
            *self
        } else {
            Self {
                azimuth: wrap_angle(self.azimuth + angle),
                colatitude: self.colatitude,
            }
        }
    }

    /// Applies the reflection `azimuth ↦ −azimuth`.
    pub fn reflected(&self) -> Self {
        if self.colatitude == T::zero() {
            *self
        } else {
            Self {
                azimuth: wrap_angle(-self.azimuth),
                colatitude: self.colatitude,
            }
        }
    }
}

fn degeneracy_margin<T: Real>() -> T {
    T::lit(1e-9).max(T::epsilon() * T::lit(4.0))
}

/// Great-circle distance on the unit sphere, in `[0, π]`.
pub fn sphere_distance<T: Real>(p: &SpherePoint<T>, q: &SpherePoint<T>) -> T {
    let a = p.to_unit_vector();
    let b = q.to_unit_vector();
    let cross = [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ];
    let sin = (cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]).sqrt();
    let cos = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    sin.atan2(cos)
}

/// Oriented unit-speed coordinate on the boundary circle.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent, bound = "T: Real")]
pub struct BoundaryParam<T>(T);

impl<T: Real> BoundaryParam<T> {
    pub fn new(t: T) -> Self {
        Self(wrap_angle(t))
    }

    #[inline]
    pub fn value(&self) -> T {
        self.0
    }

    pub fn distance(&self, other: &Self) -> T {
        circle_distance(self.0, other.0)
    }

    /// The boundary point as a point of the hemisphere.
    pub fn to_point(&self) -> SpherePoint<T> {
        SpherePoint::boundary(self.0)
    }

    /// Signed offset of `self` relative to `origin`, in `(−π, π]`.
    pub fn relative_to(&self, origin: &Self) -> T {
        let d = wrap_angle(self.0 - origin.0);
        if d > T::PI() {
            d - T::two_pi()
        } else {
            d
        }
    }
}

impl<T: Real> std::ops::Add<T> for BoundaryParam<T> {
    type Output = Self;

    fn add(self, rhs: T) -> Self {
        Self::new(self.0 + rhs)
    }
}

/// `d_P(t)` and its first three derivatives, `t` measured from `B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryDerivatives<T> {
    pub value: T,
    pub d1: T,
    pub d2: T,
    pub d3: T,
}

/// The boundary-distance function `t ↦ arccos(k cos t)` of an interior point
/// with `k = k_P ∈ [0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceProfile<T> {
    k: T,
}

impl<T: Real> DistanceProfile<T> {
    pub fn new(k: T) -> Result<Self> {
        if !(k >= T::zero()) || k > T::one() {
            return Err(Error::Domain(format!("k_P = {k} outside [0, 1)")));
        }
        if k > T::one() - degeneracy_margin::<T>() {
            return Err(Error::BoundaryDegeneracy {
                k: k.to_f64_lossy(),
            });
        }
        Ok(Self { k })
    }

    pub fn of_point(p: &SpherePoint<T>) -> Result<Self> {
        if p.is_effectively_boundary() {
            return Err(Error::BoundaryDegeneracy {
                k: p.k().to_f64_lossy(),
            });
        }
        Ok(Self { k: p.k() })
    }

    #[inline]
    pub fn k(&self) -> T {
        self.k
    }

    #[inline]
    pub fn value(&self, t: T) -> T {
        (self.k * t.cos()).max(-T::one()).min(T::one()).acos()
    }

    #[inline]
    fn w(&self, cos_t: T) -> T {
        T::one() - self.k * self.k * cos_t * cos_t
    }

    /// `d_P'(t) = k sin t / √(1 − k² cos² t)`.
    #[inline]
    pub fn d1(&self, t: T) -> T {
        let (s, c) = t.sin_cos();
        self.k * s / self.w(c).sqrt()
    }

    /// `d_P''(t) = (k − k³) cos t / (1 − k² cos² t)^{3/2}`.
    #[inline]
    pub fn d2(&self, t: T) -> T {
        let c = t.cos();
        let w = self.w(c);
        (self.k - self.k.powi(3)) * c / (w * w.sqrt())
    }

    /// `d_P'''(t) = (k − k³)(−1 − 2k² cos² t) sin t / (1 − k² cos² t)^{5/2}`.
    #[inline]
    pub fn d3(&self, t: T) -> T {
        let (s, c) = t.sin_cos();
        let w = self.w(c);
        let two = T::lit(2.0);
        (self.k - self.k.powi(3)) * (-T::one() - two * self.k * self.k * c * c) * s
            / (w * w * w.sqrt())
    }

    pub fn derivatives(&self, t: T) -> BoundaryDerivatives<T> {
        BoundaryDerivatives {
            value: self.value(t),
            d1: self.d1(t),
            d2: self.d2(t),
            d3: self.d3(t),
        }
    }
}

/// `d_P` and its derivatives at the circle coordinate `t`, measured from the
/// nearest boundary point `B` of `p`.
pub fn boundary_distance<T: Real>(p: &SpherePoint<T>, t: T) -> Result<BoundaryDerivatives<T>> {
    Ok(DistanceProfile::of_point(p)?.derivatives(t))
}

/// Angle data of the foot construction along a geodesic leaving the boundary
/// at `C` with angle `γ`: `A_a` is where the geodesic meets the meridian
/// through `B_a = C + a`, `c_a = d(A_a, B_a)`, and `γ_{a,t}` is the angle at
/// `C + t` of the geodesic from `C + t` to `A_a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FootAngles<T> {
    pub cos_c: T,
    pub cos_gamma_t: T,
    /// `K(a) = √(sin² a + cot² γ)`.
    pub k_norm: T,
    /// `N(a, t) = √(sin² a + cot² γ sin²(a − t))`.
    pub n_norm: T,
}

fn check_foot_domain<T: Real>(a: T, t: T, gamma: T) -> Result<()> {
    let pi = T::PI();
    if !(gamma > T::zero() && gamma < pi) {
        return Err(Error::Domain(format!("γ = {gamma} outside (0, π)")));
    }
    if (gamma - T::FRAC_PI_2()).abs() <= T::seam_tol() {
        return Err(Error::RightAngle);
    }
    if !(a > T::zero() && a <= T::FRAC_PI_2() + T::seam_tol()) {
        return Err(Error::Domain(format!("a = {a} outside (0, π/2]")));
    }
    if !(t >= -pi - T::seam_tol() && t <= pi + T::seam_tol()) {
        return Err(Error::Domain(format!("t = {t} outside [−π, π]")));
    }
    Ok(())
}

/// `cos c_a = cot γ / K` and `cos γ_{a,t} = sin(a − t) cot γ / N`.
pub fn orthogonal_foot_angles<T: Real>(a: T, t: T, gamma: T) -> Result<FootAngles<T>> {
    check_foot_domain(a, t, gamma)?;
    let cot = gamma.tan().recip();
    let sa = a.sin();
    let sat = (a - t).sin();
    let k_norm = (sa * sa + cot * cot).sqrt();
    let n_norm = (sa * sa + cot * cot * sat * sat).sqrt();
    Ok(FootAngles {
        cos_c: cot / k_norm,
        cos_gamma_t: sat * cot / n_norm,
        k_norm,
        n_norm,
    })
}

/// `g(a, t) = cos γ_{a,t} + t cos(c_a) / π` together with `∂g/∂a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GValue<T> {
    pub g: T,
    pub dg_da: T,
}

pub fn g_function<T: Real>(a: T, t: T, gamma: T) -> Result<GValue<T>> {
    let f = orthogonal_foot_angles(a, t, gamma)?;
    let pi = T::PI();
    let cot = gamma.tan().recip();
    let (sa, ca) = a.sin_cos();
    let dg_da = cot
        * sa
        * (t.sin() / f.n_norm.powi(3) - t * ca / (pi * f.k_norm.powi(3)));
    Ok(GValue {
        g: f.cos_gamma_t + t * f.cos_c / pi,
        dg_da,
    })
}

/// Result of sweeping the sign of `∂g/∂a` over the monotonicity domains.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonicityReport {
    pub nodes: usize,
    pub violations: usize,
    /// Most negative `∂g/∂a` where it must be `≥ 0`, most positive where it
    /// must be `≤ 0` (signed so that a violation is negative).
    pub worst_margin: f64,
}

/// Checks the sign of `∂g/∂a` on an `n_a × n_t × n_gamma` grid:
/// for `t ∈ [0, π]` it must be `≥ 0` on `a ∈ [max(0, t − π/2), π/2]`, and for
/// `t ∈ [−π/2, 0)` it must be `≤ 0` on `a ∈ (0, π/2]`. Angles `γ` are taken
/// strictly inside `(0, π/2)`, and `a = 0` is excluded (`g` is defined for
/// `a > 0`).
pub fn g_monotonicity_sweep<T: Real>(n_a: usize, n_t: usize, n_gamma: usize) -> MonotonicityReport {
    let pi = T::PI();
    let half = T::FRAC_PI_2();
    let mut nodes = 0;
    let mut violations = 0;
    let mut worst = f64::INFINITY;
    for ig in 0..n_gamma {
        let gamma = half * T::from_usize_lossy(ig + 1) / T::from_usize_lossy(n_gamma + 1);
        for it in 0..n_t {
            let t = if n_t == 1 {
                T::zero()
            } else {
                -half + (pi + half) * T::from_usize_lossy(it) / T::from_usize_lossy(n_t - 1)
            };
            let nonneg = t >= T::zero();
            let lo = if nonneg { (t - half).max(T::zero()) } else { T::zero() };
            for ia in 0..n_a {
                // Nodes lo + (hi − lo)·(i+1)/n_a: excludes a = 0, includes π/2.
                let a = lo + (half - lo) * T::from_usize_lossy(ia + 1) / T::from_usize_lossy(n_a);
                let dg = match g_function(a, t, gamma) {
                    Ok(v) => v.dg_da,
                    Err(_) => continue,
                };
                nodes += 1;
                let margin = if nonneg { dg } else { -dg };
                let m = margin.to_f64_lossy();
                if m < worst {
                    worst = m;
                }
                if m < 0.0 {
                    violations += 1;
                }
            }
        }
    }
    MonotonicityReport {
        nodes,
        violations,
        worst_margin: worst,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn central<F: Fn(f64) -> f64>(f: F, t: f64, h: f64) -> f64 {
        (f(t + h) - f(t - h)) / (2.0 * h)
    }

    #[test]
    fn distances_basic_cases() {
        let p = SpherePoint::new(0.7, 0.4).unwrap();
        assert_eq!(sphere_distance(&p, &p), 0.0);
        let pole = SpherePoint::<f64>::pole();
        let q = SpherePoint::boundary(2.1);
        assert!((sphere_distance(&pole, &q) - FRAC_PI_2).abs() < 1e-15);
        let a = SpherePoint::<f64>::boundary(0.3);
        let b = SpherePoint::<f64>::boundary(0.3 + 2.5);
        assert!((sphere_distance(&a, &b) - 2.5).abs() < 1e-14);
        let c = SpherePoint::boundary(0.0);
        let d = SpherePoint::boundary(PI);
        assert!((sphere_distance(&c, &d) - PI).abs() < 1e-14);
    }

    #[test]
    fn pole_azimuth_is_canonical() {
        let p = SpherePoint::new(1.3, 0.0).unwrap();
        assert_eq!(p.azimuth(), 0.0);
        assert!(SpherePoint::new(0.0, FRAC_PI_2 + 1e-3).is_err());
        assert!(SpherePoint::new(0.0, -1e-3).is_err());
        let q = SpherePoint::new(-0.5, FRAC_PI_2 + 1e-14).unwrap();
        assert!(q.is_boundary());
        assert!((q.azimuth() - (2.0 * PI - 0.5)).abs() < 1e-15);
    }

    #[test]
    fn vector_round_trip() {
        let p = SpherePoint::<f64>::new(4.0, 1.1).unwrap();
        let q = SpherePoint::from_vector(p.to_unit_vector()).unwrap();
        assert!((p.azimuth() - q.azimuth()).abs() < 1e-14);
        assert!((p.colatitude() - q.colatitude()).abs() < 1e-14);
    }

    #[test]
    fn nearest_boundary_point_realises_k() {
        let p = SpherePoint::<f64>::new(2.0, 0.9).unwrap();
        let b = p.base().to_point();
        assert!((sphere_distance(&p, &b).cos() - p.k()).abs() < 1e-14);
        // and B minimizes the distance to the boundary
        for i in 0..64 {
            let q = SpherePoint::boundary(i as f64 * 0.1);
            assert!(sphere_distance(&p, &q) >= sphere_distance(&p, &b) - 1e-15);
        }
    }

    #[test]
    fn profile_matches_spherical_cosine_law() {
        let p = SpherePoint::new(1.0, 0.6).unwrap();
        let prof = DistanceProfile::of_point(&p).unwrap();
        for i in 0..50 {
            let t = -PI + i as f64 * (2.0 * PI / 50.0);
            let q = SpherePoint::boundary(p.azimuth() + t);
            assert!((prof.value(t) - sphere_distance(&p, &q)).abs() < 1e-13);
        }
    }

    #[test]
    fn pole_profile_is_constant() {
        let d = boundary_distance(&SpherePoint::<f64>::pole(), 1.234).unwrap();
        assert!((d.value - FRAC_PI_2).abs() < 1e-15);
        assert_eq!((d.d1, d.d2, d.d3), (0.0, 0.0, 0.0));
    }

    #[test]
    fn first_derivative_at_quarter_turn_is_k() {
        let k = FRAC_PI_4.cos();
        let prof = DistanceProfile::new(k).unwrap();
        assert!((prof.d1(FRAC_PI_2) - k).abs() < 1e-15);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let h = 1e-5;
        for &k in &[0.1, 0.5, 0.9] {
            let prof = DistanceProfile::new(k).unwrap();
            for i in 0..40 {
                let t = -3.1 + i as f64 * 0.155;
                let fd1 = central(|s| prof.value(s), t, h);
                let fd2 = central(|s| prof.d1(s), t, h);
                let fd3 = central(|s| prof.d2(s), t, h);
                for (exact, fd) in [(prof.d1(t), fd1), (prof.d2(t), fd2), (prof.d3(t), fd3)] {
                    let scale = exact.abs().max(1e-3);
                    assert!((exact - fd).abs() / scale < 1e-6, "k={k} t={t}: {exact} vs {fd}");
                }
            }
        }
        // the value requested for k = 0.5, t = 0.3
        let prof = DistanceProfile::new(0.5).unwrap();
        let fd = central(|s: f64| (0.5 * s.cos()).acos(), 0.3, h);
        assert!((prof.d1(0.3) - fd).abs() < 1e-6);
    }

    #[test]
    fn sign_table_and_symmetries() {
        for ik in 1..=9 {
            let prof = DistanceProfile::new(ik as f64 / 10.0).unwrap();
            for i in 1..400 {
                let t = -PI + (i as f64) * (2.0 * PI / 400.0);
                if t <= -PI + 1e-12 {
                    continue;
                }
                let d = prof.derivatives(t);
                let eps = 1e-14;
                if t <= 0.0 {
                    assert!(d.d1 <= eps && d.d3 >= -eps);
                }
                if t >= 0.0 {
                    assert!(d.d1 >= -eps && d.d3 <= eps, "t={t} {d:?}");
                }
                if t.abs() <= FRAC_PI_2 - 1e-12 {
                    assert!(d.d2 >= -eps);
                }
                if t.abs() >= FRAC_PI_2 + 1e-12 {
                    assert!(d.d2 <= eps);
                }
                assert!((prof.d1(t + PI) + d.d1).abs() < 1e-13);
                assert!((prof.d2(t + PI) + d.d2).abs() < 1e-12);
                assert!((prof.d1(-t) + d.d1).abs() < 1e-13);
                assert!((prof.d2(-t) - d.d2).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn boundary_points_are_degenerate() {
        let q = SpherePoint::<f64>::boundary(0.5);
        assert!(matches!(
            boundary_distance(&q, 0.0),
            Err(Error::BoundaryDegeneracy { .. })
        ));
        assert!(DistanceProfile::new(1.0 - 1e-10).is_err());
        assert!(DistanceProfile::new(1.0 - 1e-8).is_ok());
    }

    #[test]
    fn foot_angle_special_values() {
        let f = orthogonal_foot_angles(0.7, 0.7, 1.0).unwrap();
        assert_eq!(f.cos_gamma_t, 0.0);
        let f = orthogonal_foot_angles(FRAC_PI_2, 0.0, FRAC_PI_4).unwrap();
        assert!((f.cos_c - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(matches!(
            orthogonal_foot_angles(0.5, 0.1, FRAC_PI_2),
            Err(Error::RightAngle)
        ));
        assert!(orthogonal_foot_angles(0.0, 0.1, 1.0).is_err());
    }

    #[test]
    fn napier_identity() {
        for i in 1..=20 {
            for j in 1..=20 {
                let a = FRAC_PI_2 * i as f64 / 20.0;
                let gamma = 0.05 + 3.0 * j as f64 / 21.0;
                if (gamma - FRAC_PI_2).abs() < 1e-6 {
                    continue;
                }
                let f = orthogonal_foot_angles(a, 0.0, gamma).unwrap();
                let c = f.cos_c.acos();
                let lhs = 1.0 / gamma.tan();
                let rhs = a.sin() / c.tan();
                assert!((lhs - rhs).abs() < 1e-12 * lhs.abs().max(1.0), "{lhs} vs {rhs}");
            }
        }
    }

    /// Independent construction of the foot configuration with 3-vectors.
    fn foot_by_vectors(a: f64, t: f64, gamma: f64) -> (f64, f64) {
        // C = (1,0,0); geodesic leaves C with angle γ against the +azimuth
        // direction, tilted towards the pole.
        let d = [0.0, gamma.cos(), gamma.sin()];
        // meridian plane through B_a has normal (sin a, −cos a, 0)
        let s = (a.sin()).atan2(gamma.cos() * a.cos());
        let s = if s < 0.0 { s + PI } else { s };
        let x = [s.cos() + s.sin() * d[0], s.sin() * d[1], s.sin() * d[2]];
        let cos_c = (1.0 - x[2] * x[2]).sqrt();
        let ct = [t.cos(), t.sin(), 0.0];
        let dot = x[0] * ct[0] + x[1] * ct[1] + x[2] * ct[2];
        let v = [x[0] - dot * ct[0], x[1] - dot * ct[1], x[2] - dot * ct[2]];
        let tangent = [-t.sin(), t.cos(), 0.0];
        let vn = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        let cos_gt = (v[0] * tangent[0] + v[1] * tangent[1]) / vn;
        (cos_c, cos_gt)
    }

    #[test]
    fn foot_angles_agree_with_vector_construction() {
        for &gamma in &[0.3, FRAC_PI_4, 1.2] {
            for i in 1..=10 {
                let a = FRAC_PI_2 * i as f64 / 10.0;
                for j in 0..=12 {
                    let t = -FRAC_PI_2 + j as f64 * (PI / 12.0);
                    if (a - t).abs() < 1e-9 {
                        continue;
                    }
                    let f = orthogonal_foot_angles(a, t, gamma).unwrap();
                    let (cc, cg) = foot_by_vectors(a, t, gamma);
                    assert!((f.cos_c - cc).abs() < 1e-12, "cos c: {} vs {cc}", f.cos_c);
                    assert!((f.cos_gamma_t - cg).abs() < 1e-12, "cos γ_t: {} vs {cg}", f.cos_gamma_t);
                }
            }
        }
    }

    #[test]
    fn g_partial_matches_finite_differences() {
        for &gamma in &[0.2, FRAC_PI_4, 1.3] {
            for &t in &[-1.2, -0.3, 0.4, 1.7, 2.9] {
                for i in 1..10 {
                    let a = FRAC_PI_2 * i as f64 / 10.0;
                    let exact = g_function(a, t, gamma).unwrap().dg_da;
                    let fd = central(|s| g_function(s, t, gamma).unwrap().g, a, 1e-6);
                    assert!((exact - fd).abs() < 1e-6 * exact.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn g_at_zero_reduces_to_angle() {
        let v = g_function(0.8, 0.0, 0.6).unwrap();
        let f = orthogonal_foot_angles(0.8, 0.0, 0.6).unwrap();
        assert_eq!(v.g, f.cos_gamma_t);
        assert!(v.g > 0.0);
        assert_eq!(v.dg_da, 0.0);
    }

    #[test]
    fn g_monotone_on_quarter_angle_slices() {
        let gamma = FRAC_PI_4;
        let t = FRAC_PI_4;
        for i in 0..=200 {
            let a = (t - FRAC_PI_2).max(1e-9) + (FRAC_PI_2 - (t - FRAC_PI_2).max(1e-9)) * i as f64 / 200.0;
            assert!(g_function(a, t, gamma).unwrap().dg_da >= 0.0);
        }
        for i in 0..=200 {
            let a = 1e-9 + (FRAC_PI_2 - 1e-9) * i as f64 / 200.0;
            assert!(g_function(a, -FRAC_PI_4, gamma).unwrap().dg_da <= 0.0);
        }
    }

    #[test]
    fn single_precision_smoke() {
        let p = SpherePoint::<f32>::new(0.5, 0.7).unwrap();
        let q = SpherePoint::<f32>::boundary(0.5);
        assert!((sphere_distance(&p, &q) - (std::f32::consts::FRAC_PI_2 - 0.7)).abs() < 1e-6);
        let prof = DistanceProfile::<f32>::of_point(&p).unwrap();
        assert!((prof.d1(std::f32::consts::FRAC_PI_2) - p.k()).abs() < 1e-6);
    }
}
