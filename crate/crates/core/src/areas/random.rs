//! Random symmetric polygon norms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::real::Real;

use super::jacobian::jacobians;
use super::norm::{PlanarNorm, SymmetricPolygon};

/// Symmetric hull of `2..=max_pairs` random points and their negatives;
/// polygons with two pairs are parallelograms.
pub fn random_symmetric_polygon<T: Real, R: Rng>(rng: &mut R, max_pairs: usize) -> SymmetricPolygon<T> {
    loop {
        let m = rng.gen_range(2..=max_pairs.max(2));
        let pts: Vec<[T; 2]> = (0..m)
            .map(|_| {
                let a: f64 = rng.gen_range(0.0..std::f64::consts::PI);
                let r: f64 = rng.gen_range(0.3..1.5);
                [T::lit(r * a.cos()), T::lit(r * a.sin())]
            })
            .collect();
        if let Ok(p) = SymmetricPolygon::hull_of(&pts) {
            if p.area() > T::lit(1e-3) {
                return p;
            }
        }
    }
}

/// Jacobian ratios of one sampled polygon norm.
#[derive(Debug, Clone, Serialize)]
#[serde(bound = "T: Real")]
pub struct RatioSample<T> {
    pub index: usize,
    pub vertices: usize,
    pub ht_over_b: T,
    pub b_over_ir: T,
    pub ht_over_ir: T,
}

/// Minima of the Jacobian ratios over a sweep, with the minimizing samples.
#[derive(Debug, Clone, Serialize)]
#[serde(bound = "T: Real")]
pub struct RatioSweep<T> {
    pub seed: u64,
    pub samples: Vec<RatioSample<T>>,
    pub min_ht_over_b: (T, SymmetricPolygon<T>),
    pub min_b_over_ir: (T, SymmetricPolygon<T>),
    pub min_ht_over_ir: (T, SymmetricPolygon<T>),
}

/// Samples `count` random polygon norms with up to `max_pairs` vertex pairs.
/// Sample `i` draws from stream `i` of the seeded generator, so results do
/// not depend on scheduling.
pub fn jacobian_ratio_sweep<T: Real>(count: usize, max_pairs: usize, seed: u64) -> Result<RatioSweep<T>> {
    if count == 0 {
        return Err(Error::Domain("sweep needs at least one sample".into()));
    }
    let polys: Vec<Result<(SymmetricPolygon<T>, [T; 3])>> = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let p = random_symmetric_polygon::<T, _>(&mut rng, max_pairs);
            let j = jacobians(&PlanarNorm::Polygon(p.clone()))?;
            Ok((p, j))
        })
        .collect();
    let polys = polys.into_iter().collect::<Result<Vec<_>>>()?;
    let samples: Vec<RatioSample<T>> = polys
        .iter()
        .enumerate()
        .map(|(index, (p, [b, ht, ir]))| RatioSample {
            index,
            vertices: p.vertices().len(),
            ht_over_b: *ht / *b,
            b_over_ir: *b / *ir,
            ht_over_ir: *ht / *ir,
        })
        .collect();
    let argmin = |f: fn(&RatioSample<T>) -> T| {
        let i = (0..samples.len())
            .min_by(|a, b| f(&samples[*a]).partial_cmp(&f(&samples[*b])).expect("finite ratios"))
            .expect("nonempty");
        (f(&samples[i]), polys[i].0.clone())
    };
    Ok(RatioSweep {
        seed,
        min_ht_over_b: argmin(|s| s.ht_over_b),
        min_b_over_ir: argmin(|s| s.b_over_ir),
        min_ht_over_ir: argmin(|s| s.ht_over_ir),
        samples,
    })
}
