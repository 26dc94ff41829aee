//! Lipschitz extension of circle curves to the hemisphere through
//! barycenters of embedded measures: `f = b ∘ η⋆ ∘ ι`.

mod curve;
mod target;

pub use curve::{CurveForm, CurveRecord, LipschitzCurve, LIPSCHITZ_SAMPLES};
pub use target::{NormedTarget, TargetNorm};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::embedding::MIN_GRID;
use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;
use crate::real::Real;
use crate::sphere::{sphere_distance, DistanceProfile, SpherePoint};

/// `∫ x dμ(x)` for a finitely supported measure.
pub fn barycenter<T: Real>(mu: &DiscreteMeasure<Vec<T>, T>) -> Vec<T> {
    let dim = mu.points.first().map_or(0, |p| p.len());
    let mut out = vec![T::zero(); dim];
    for (p, w) in mu.points.iter().zip(&mu.weights) {
        for (o, x) in out.iter_mut().zip(p) {
            *o += *w * *x;
        }
    }
    out
}

/// `σ(x, y, t) = b((1 − t)δ_x + tδ_y) = (1 − t)x + ty`.
pub fn bicombing<T: Real>(x: &[T], y: &[T], t: T) -> Vec<T> {
    x.iter().zip(y).map(|(a, b)| (T::one() - t) * *a + t * *b).collect()
}

/// `P ↦ ∫ η dι(P)`.
#[derive(Debug, Clone, Serialize)]
#[serde(bound = "T: Real")]
pub struct HemisphereMap<T> {
    curve: LipschitzCurve<T>,
    grid_size: usize,
    #[serde(skip)]
    mean: Vec<T>,
}

pub fn extend<T: Real>(curve: &LipschitzCurve<T>, grid_size: usize) -> Result<HemisphereMap<T>> {
    if grid_size < MIN_GRID {
        return Err(Error::Domain(format!("grid size {grid_size} below {MIN_GRID}")));
    }
    Ok(HemisphereMap {
        mean: curve.mean(),
        curve: curve.clone(),
        grid_size,
    })
}

impl<T: Real> HemisphereMap<T> {
    pub fn curve(&self) -> &LipschitzCurve<T> {
        &self.curve
    }

    pub fn grid_size(&self) -> usize {
        self.grid_size
    }

    pub fn target(&self) -> &NormedTarget<T> {
        self.curve.target()
    }

    pub fn eval(&self, p: &SpherePoint<T>) -> Vec<T> {
        let mut out = vec![T::zero(); self.curve.dim()];
        self.eval_into(p, &mut out);
        out
    }

    /// Writes `f(p)` into `out`.
    ///
    /// Only the cells within a quarter turn of `B` carry the curvature part of
    /// `ι(p)`; the flat part integrates to `(1 − k)` times the mean of `η`.
    pub fn eval_into(&self, p: &SpherePoint<T>, out: &mut [T]) {
        let b = p.base().value();
        let Ok(profile) = DistanceProfile::of_point(p) else {
            self.curve.eval_into(b, out);
            return;
        };
        let k = profile.k();
        let dim = self.curve.dim();
        let n = self.grid_size;
        let w = T::two_pi() / T::from_usize_lossy(n);
        let quarter = n.div_ceil(4);
        let cells = 2 * quarter;
        let mut integrals = vec![T::zero(); cells * dim];
        let start = -T::from_usize_lossy(quarter);
        self.curve.cell_integrals(b + start * w, w, cells, &mut integrals);
        for (o, m) in out.iter_mut().zip(&self.mean) {
            *o = (T::one() - k) * *m;
        }
        let q = T::FRAC_PI_2();
        let half = T::lit(0.5);
        let mut d_prev = profile.d1((start * w).max(-q));
        for j in 0..cells {
            let hi = ((start + T::from_usize_lossy(j + 1)) * w).min(q).max(-q);
            let d_next = profile.d1(hi);
            let mass = ((d_next - d_prev) * half).max(T::zero());
            d_prev = d_next;
            if mass == T::zero() {
                continue;
            }
            let dens = mass / w;
            for i in 0..dim {
                out[i] += dens * integrals[j * dim + i];
            }
        }
    }
}

/// Result of [`certify_lipschitz`].
#[derive(Debug, Clone, Serialize)]
#[serde(bound = "T: Real")]
pub struct LipschitzCertificate<T> {
    pub pairs: usize,
    pub max_ratio: T,
    pub curve_lipschitz: T,
    pub worst: (SpherePoint<T>, SpherePoint<T>),
    pub min_separation: T,
}

/// Uniform random point of the closed hemisphere.
pub fn random_hemisphere_point<T: Real, R: Rng>(rng: &mut R) -> SpherePoint<T> {
    let z: f64 = rng.gen_range(0.0..1.0);
    let az: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    SpherePoint::new(T::lit(az), T::lit(z.acos())).expect("in range")
}

/// The point at distance `delta` from `p` in direction `phi` (measured from
/// the southward meridian), or `None` if it leaves the hemisphere.
pub fn offset_point<T: Real>(p: &SpherePoint<T>, delta: T, phi: T) -> Option<SpherePoint<T>> {
    let v = p.to_unit_vector();
    let (sa, ca) = p.azimuth().sin_cos();
    let (st, ct) = p.colatitude().sin_cos();
    let e1 = [ct * ca, ct * sa, -st];
    let e2 = [-sa, ca, T::zero()];
    let (sd, cd) = delta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let q: Vec<T> = (0..3).map(|i| cd * v[i] + sd * (cp * e1[i] + sp * e2[i])).collect();
    if q[2] < T::zero() {
        return None;
    }
    SpherePoint::from_vector([q[0], q[1], q[2]]).ok()
}

/// Draws `pairs` point pairs: half uniformly at random, half at separations
/// log-uniform in `[1e-3, 1]`.
pub fn lipschitz_test_pairs<T: Real>(pairs: usize, seed: u64) -> Vec<(SpherePoint<T>, SpherePoint<T>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(pairs);
    while out.len() < pairs {
        let p = random_hemisphere_point::<T, _>(&mut rng);
        if out.len() % 2 == 0 {
            let q = random_hemisphere_point::<T, _>(&mut rng);
            out.push((p, q));
        } else {
            let delta = T::lit(10f64.powf(rng.gen_range(-3.0..0.0)));
            let phi = T::lit(rng.gen_range(0.0..std::f64::consts::TAU));
            if let Some(q) = offset_point(&p, delta, phi) {
                out.push((p, q));
            }
        }
    }
    out
}

/// Largest `‖f(P) − f(Q)‖ / d(P, Q)` over random pairs.
pub fn certify_lipschitz<T: Real>(map: &HemisphereMap<T>, pairs: usize, seed: u64) -> LipschitzCertificate<T> {
    use rayon::prelude::*;
    let sample = lipschitz_test_pairs::<T>(pairs, seed);
    let ratios: Vec<(T, T)> = sample
        .par_iter()
        .map(|(p, q)| {
            let d = sphere_distance(p, q);
            let r = if d > T::zero() {
                map.target().distance(&map.eval(p), &map.eval(q)) / d
            } else {
                T::zero()
            };
            (r, d)
        })
        .collect();
    let mut worst = 0;
    let mut min_sep = T::infinity();
    for (i, (r, d)) in ratios.iter().enumerate() {
        if *r > ratios[worst].0 {
            worst = i;
        }
        min_sep = min_sep.min(*d);
    }
    LipschitzCertificate {
        pairs: sample.len(),
        max_ratio: ratios.get(worst).map_or(T::zero(), |x| x.0),
        curve_lipschitz: map.curve().lipschitz(),
        worst: sample[worst],
        min_separation: min_sep,
    }
}
