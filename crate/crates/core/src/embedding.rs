//! The isometric embedding of the hemisphere into `P₁(S¹)`.
//!
//! An interior point `P` with `k = k_P` goes to the measure with density
//! `h_P = ½(d_P'')⁺ + (1 − k)/2π`, expressed in coordinates centred at the
//! nearest boundary point `B`. Boundary points go to Dirac masses.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::{Arc, Atom, CircularMeasure};
use crate::real::Real;
use crate::sphere::{sphere_distance, BoundaryParam, DistanceProfile, SpherePoint};
use crate::transport::w1_circle;

/// Smallest grid accepted by [`iota`].
pub const MIN_GRID: usize = 64;

#[derive(Debug, Clone, Serialize)]
#[serde(bound = "T: Real")]
pub struct EmbeddedPoint<T> {
    pub source: SpherePoint<T>,
    pub measure: CircularMeasure<T>,
    pub k: T,
    pub base: BoundaryParam<T>,
}

/// `∫_a^b ½(d_P'')⁺` for `0 ≤ a ≤ b ≤ 2π`, measured from `B`.
///
/// `d_P''` is nonnegative exactly on `[−π/2, π/2]`, so the integral is a
/// difference of `d_P'` values over the clipped interval.
pub fn curvature_mass<T: Real>(profile: &DistanceProfile<T>, a: T, b: T) -> T {
    let half = T::lit(0.5);
    let q = T::FRAC_PI_2();
    let three_q = T::lit(3.0) * q;
    let tau = T::two_pi();
    let mut m = T::zero();
    if a < q {
        m += profile.d1(b.min(q)) - profile.d1(a);
    }
    if b > three_q {
        let hi = if b >= tau { T::zero() } else { profile.d1(b) };
        m += hi - profile.d1(a.max(three_q));
    }
    (m * half).max(T::zero())
}

fn curvature_cells<T: Real>(profile: &DistanceProfile<T>, n: usize) -> Vec<T> {
    let w = T::two_pi() / T::from_usize_lossy(n);
    (0..n)
        .map(|i| {
            let a = w * T::from_usize_lossy(i);
            let b = if i + 1 == n { T::two_pi() } else { a + w };
            curvature_mass(profile, a, b)
        })
        .collect()
}

fn check_grid(n: usize) -> Result<()> {
    if n < MIN_GRID {
        return Err(Error::Domain(format!("grid size {n} below {MIN_GRID}")));
    }
    Ok(())
}

/// `ι(P)` on a grid of `n` cells with origin at `B`.
pub fn iota<T: Real>(p: &SpherePoint<T>, n: usize) -> Result<EmbeddedPoint<T>> {
    check_grid(n)?;
    let base = p.base();
    if p.is_effectively_boundary() {
        return Ok(EmbeddedPoint {
            source: *p,
            measure: CircularMeasure::dirac(base.value()),
            k: T::one(),
            base,
        });
    }
    let profile = DistanceProfile::of_point(p)?;
    let k = profile.k();
    let flat = (T::one() - k) / T::from_usize_lossy(n);
    let masses = curvature_cells(&profile, n).into_iter().map(|m| m + flat).collect();
    let measure = CircularMeasure::from_cell_masses(base.value(), masses, vec![])?;
    Ok(EmbeddedPoint {
        source: *p,
        measure,
        k,
        base,
    })
}

/// `Φ_P(ν) = ½(d_P'')⁺·H¹ + (1 − k_P)·ν` for antipodally invariant `ν`.
///
/// The density of `ν` is re-binned onto the grid of `n` cells with origin
/// `B`; for even `n` this keeps it antipodally invariant.
pub fn phi_family<T: Real>(
    p: &SpherePoint<T>,
    nu: &CircularMeasure<T>,
    n: usize,
) -> Result<CircularMeasure<T>> {
    check_grid(n)?;
    let tol = T::lit(1e-9);
    let defect = nu.antipodal_defect();
    if defect > tol {
        return Err(Error::NotAntipodallyInvariant {
            defect: defect.to_f64_lossy(),
            tol: tol.to_f64_lossy(),
        });
    }
    let base = p.base();
    if p.is_effectively_boundary() {
        return Ok(CircularMeasure::dirac(base.value()));
    }
    let profile = DistanceProfile::of_point(p)?;
    let k = profile.k();
    let w = T::two_pi() / T::from_usize_lossy(n);
    let curv = curvature_cells(&profile, n);
    let masses = if nu.has_density() {
        let dens_total = T::one() - nu.atoms().iter().map(|a| a.mass).sum::<T>();
        curv.into_iter()
            .enumerate()
            .map(|(i, c)| {
                let start = base.value() + w * T::from_usize_lossy(i);
                let cell = Arc::new(start, w);
                // only the density part: subtract atoms inside the cell
                let atoms_in: T = nu
                    .atoms()
                    .iter()
                    .filter(|a| cell.contains(a.pos))
                    .map(|a| a.mass)
                    .sum();
                let m = (nu.arc_mass(cell) - atoms_in).max(T::zero()).min(dens_total);
                c + (T::one() - k) * m
            })
            .collect()
    } else {
        curv
    };
    let atoms = nu
        .atoms()
        .iter()
        .map(|a| Atom {
            pos: a.pos,
            mass: (T::one() - k) * a.mass,
        })
        .filter(|a| a.mass > T::zero())
        .collect();
    CircularMeasure::from_cell_masses(base.value(), masses, atoms)
}

/// Recovers the antipodally invariant residue `ν = (μ − ½(d_P'')⁺H¹)/(1 − k_P)`
/// of a measure built on the grid of `ι(P)`.
pub fn residue<T: Real>(e: &EmbeddedPoint<T>) -> Result<CircularMeasure<T>> {
    if e.source.is_effectively_boundary() {
        return Err(Error::BoundaryDegeneracy {
            k: e.k.to_f64_lossy(),
        });
    }
    let profile = DistanceProfile::of_point(&e.source)?;
    let k = profile.k();
    let n = e.measure.grid_size();
    let scale = T::one() / (T::one() - k);
    let curv = curvature_cells(&profile, n);
    let mut masses: Vec<T> = (0..n)
        .map(|i| ((e.measure.cell_mass(i) - curv[i]) * scale).max(T::zero()))
        .collect();
    let mut atoms: Vec<Atom<T>> = e
        .measure
        .atoms()
        .iter()
        .map(|a| Atom {
            pos: a.pos,
            mass: a.mass * scale,
        })
        .collect();
    // dividing by 1 − k amplifies rounding near the rim
    let total = masses.iter().copied().sum::<T>() + atoms.iter().map(|a| a.mass).sum::<T>();
    masses.iter_mut().for_each(|m| *m /= total);
    atoms.iter_mut().for_each(|a| a.mass /= total);
    CircularMeasure::from_cell_masses(e.measure.origin(), masses, atoms)
}

/// Largest deviation of `μ([Q, Q + π))` from `½ − ½d_P'(Q)` over grid points
/// `Q`.
pub fn half_circle_defect<T: Real>(e: &EmbeddedPoint<T>) -> T {
    let Ok(profile) = DistanceProfile::of_point(&e.source) else {
        return T::zero();
    };
    let half = T::lit(0.5);
    let n = e.measure.grid_size();
    (0..n)
        .map(|i| {
            let q = e.measure.cell_start(i);
            let mass = e.measure.arc_mass(Arc::new(q, T::PI()));
            let rel = q - e.base.value();
            (mass - (half - half * profile.d1(rel))).abs()
        })
        .fold(T::zero(), T::max)
}

/// Largest `|W1(ι(P), δ_Q) − d(P, Q)|` over `samples` equispaced boundary
/// points `Q`.
pub fn verify_dirac_distances<T: Real>(e: &EmbeddedPoint<T>, samples: usize) -> T {
    let step = T::two_pi() / T::from_usize_lossy(samples.max(1));
    (0..samples)
        .into_par_iter()
        .map(|i| {
            let q = e.base.value() + step * (T::from_usize_lossy(i) + T::lit(0.5));
            let qp = SpherePoint::boundary(q);
            let w = w1_circle(&e.measure, &CircularMeasure::dirac(qp.azimuth())).distance;
            (w - sphere_distance(&e.source, &qp)).abs()
        })
        .reduce(T::zero, T::max)
}

/// Signed errors `W1(ι(P), ι(Q)) − d(P, Q)` for each pair.
pub fn verify_isometry<T: Real>(
    pairs: &[(SpherePoint<T>, SpherePoint<T>)],
    grid_size: usize,
) -> Result<Vec<T>> {
    pairs
        .par_iter()
        .map(|(p, q)| {
            let a = iota(p, grid_size)?;
            let b = iota(q, grid_size)?;
            Ok(w1_circle(&a.measure, &b.measure).distance - sphere_distance(p, q))
        })
        .collect()
}
