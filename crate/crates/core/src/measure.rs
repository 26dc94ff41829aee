//! Probability measures on the unit circle: finitely many atoms plus a
//! piecewise-constant density on a uniform angular grid.
//!
//! Cell `k` of a grid with origin `o` and `N` cells is the half-open arc
//! `[o + 2πk/N, o + 2π(k+1)/N)`; the density is taken with respect to arc
//! length. Atoms are kept exact and never smeared onto the grid.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature;
use crate::real::{wrap_angle, Real};

/// Default number of grid cells.
pub const DEFAULT_GRID: usize = 2048;

/// A point mass on the circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Atom<T> {
    pub pos: T,
    pub mass: T,
}

/// A half-open arc `[start, start + length)` traversed counterclockwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc<T> {
    pub start: T,
    pub length: T,
}

impl<T: Real> Arc<T> {
    pub fn new(start: T, length: T) -> Self {
        Self { start, length }
    }

    /// The arc from `start` counterclockwise to `end`. Equal endpoints give the
    /// empty arc.
    pub fn between(start: T, end: T) -> Self {
        Self {
            start,
            length: wrap_angle(end - start),
        }
    }

    /// Whether the circle coordinate `x` lies in the arc.
    pub fn contains(&self, x: T) -> bool {
        if self.length >= T::two_pi() {
            return true;
        }
        let rel = wrap_angle(x - self.start);
        rel < self.length
    }
}

/// The mass a measure assigns to an arc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalMass<T> {
    pub start: T,
    pub end: T,
    pub mass: T,
}

/// A probability measure on the circle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    bound = "T: Real",
    try_from = "MeasureRecord<T>",
    into = "MeasureRecord<T>"
)]
pub struct CircularMeasure<T> {
    origin: T,
    density: Vec<T>,
    atoms: Vec<Atom<T>>,
    /// `prefix[k]` is the density mass of cells `0..k`.
    prefix: Vec<T>,
}

/// Wire format: `{"grid_size": N, "density": [...], "atoms": [{"pos", "mass"}]}`,
/// with an optional `"origin"` for grids not anchored at angle 0.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "T: Real", deny_unknown_fields)]
pub struct MeasureRecord<T> {
    pub grid_size: usize,
    pub density: Vec<T>,
    #[serde(default)]
    pub atoms: Vec<Atom<T>>,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub origin: T,
}

fn is_zero<T: Real>(x: &T) -> bool {
    *x == T::zero()
}

impl<T: Real> TryFrom<MeasureRecord<T>> for CircularMeasure<T> {
    type Error = Error;

    fn try_from(r: MeasureRecord<T>) -> Result<Self> {
        if r.density.len() != r.grid_size {
            return Err(Error::InvalidMeasure(format!(
                "grid_size is {} but density has {} entries",
                r.grid_size,
                r.density.len()
            )));
        }
        Self::with_origin(r.origin, r.density, r.atoms)
    }
}

impl<T: Real> From<CircularMeasure<T>> for MeasureRecord<T> {
    fn from(m: CircularMeasure<T>) -> Self {
        Self {
            grid_size: m.density.len(),
            density: m.density,
            atoms: m.atoms,
            origin: m.origin,
        }
    }
}

fn prefix_sums<T: Real>(density: &[T], width: T) -> Vec<T> {
    let mut prefix = Vec::with_capacity(density.len() + 1);
    let mut acc = T::zero();
    prefix.push(acc);
    for &d in density {
        acc += d * width;
        prefix.push(acc);
    }
    prefix
}

/// Sorts atoms by canonical position and merges coincident ones.
fn canonical_atoms<T: Real>(atoms: Vec<Atom<T>>) -> Result<Vec<Atom<T>>> {
    let mut out: Vec<Atom<T>> = Vec::with_capacity(atoms.len());
    for a in atoms {
        if !a.pos.is_finite() || !a.mass.is_finite() || a.mass < T::zero() {
            return Err(Error::InvalidMeasure(format!(
                "atom at {} with mass {} is invalid",
                a.pos, a.mass
            )));
        }
        if a.mass > T::zero() {
            out.push(Atom {
                pos: wrap_angle(a.pos),
                mass: a.mass,
            });
        }
    }
    out.sort_by(|a, b| a.pos.partial_cmp(&b.pos).expect("finite"));
    let mut merged: Vec<Atom<T>> = Vec::with_capacity(out.len());
    for a in out {
        match merged.last_mut() {
            Some(last) if a.pos - last.pos <= T::seam_tol() => last.mass += a.mass,
            _ => merged.push(a),
        }
    }
    // the seam: an atom just below 2π coincides with one at 0
    if merged.len() > 1 {
        let first = merged[0];
        let last = merged[merged.len() - 1];
        if T::two_pi() - last.pos + first.pos <= T::seam_tol() {
            merged[0].mass += last.mass;
            merged.pop();
        }
    }
    Ok(merged)
}

impl<T: Real> CircularMeasure<T> {
    /// Builds a measure on a grid anchored at angle 0.
    pub fn new(density: Vec<T>, atoms: Vec<Atom<T>>) -> Result<Self> {
        Self::with_origin(T::zero(), density, atoms)
    }

    /// Builds a measure whose grid starts at `origin`. Validates that the
    /// density is nonnegative and that the total mass is 1 within
    /// [`Real::mass_tol`].
    pub fn with_origin(origin: T, density: Vec<T>, atoms: Vec<Atom<T>>) -> Result<Self> {
        let m = Self::unchecked(origin, density, atoms)?;
        let total = m.total_mass();
        if (total - T::one()).abs() > T::mass_tol() {
            return Err(Error::InvalidMeasure(format!("total mass {total} ≠ 1")));
        }
        Ok(m)
    }

    /// Builds a nonnegative finite measure without the unit-mass check.
    pub(crate) fn unchecked(origin: T, density: Vec<T>, atoms: Vec<Atom<T>>) -> Result<Self> {
        if density.is_empty() {
            return Err(Error::InvalidMeasure("grid_size must be positive".into()));
        }
        if !origin.is_finite() {
            return Err(Error::InvalidMeasure("non-finite grid origin".into()));
        }
        if let Some(k) = density.iter().position(|d| !d.is_finite() || *d < T::zero()) {
            return Err(Error::InvalidMeasure(format!(
                "density[{k}] = {} is negative or non-finite",
                density[k]
            )));
        }
        let atoms = canonical_atoms(atoms)?;
        let width = T::two_pi() / T::from_usize_lossy(density.len());
        let prefix = prefix_sums(&density, width);
        Ok(Self {
            origin: wrap_angle(origin),
            density,
            atoms,
            prefix,
        })
    }

    /// Builds a measure from per-cell masses rather than densities.
    pub fn from_cell_masses(origin: T, masses: Vec<T>, atoms: Vec<Atom<T>>) -> Result<Self> {
        let n = T::from_usize_lossy(masses.len().max(1));
        let scale = n / T::two_pi();
        Self::with_origin(origin, masses.into_iter().map(|m| m * scale).collect(), atoms)
    }

    /// The uniform probability measure on a grid of `n` cells.
    pub fn uniform(n: usize) -> Self {
        Self::uniform_with_origin(n, T::zero())
    }

    pub fn uniform_with_origin(n: usize, origin: T) -> Self {
        let n = n.max(1);
        Self::unchecked(origin, vec![T::two_pi().recip(); n], Vec::new()).expect("valid uniform")
    }

    /// The Dirac measure at `pos`.
    pub fn dirac(pos: T) -> Self {
        Self::unchecked(
            T::zero(),
            vec![T::zero()],
            vec![Atom {
                pos,
                mass: T::one(),
            }],
        )
        .expect("valid dirac")
    }

    /// A purely atomic measure. Masses must sum to 1.
    pub fn from_atoms(atoms: Vec<Atom<T>>) -> Result<Self> {
        Self::new(vec![T::zero()], atoms)
    }

    #[inline]
    pub fn grid_size(&self) -> usize {
        self.density.len()
    }

    #[inline]
    pub fn origin(&self) -> T {
        self.origin
    }

    #[inline]
    pub fn density(&self) -> &[T] {
        &self.density
    }

    #[inline]
    pub fn atoms(&self) -> &[Atom<T>] {
        &self.atoms
    }

    #[inline]
    pub fn cell_width(&self) -> T {
        T::two_pi() / T::from_usize_lossy(self.density.len())
    }

    /// Start of cell `k`, not wrapped (lies in `[origin, origin + 2π)`).
    #[inline]
    pub fn cell_start(&self, k: usize) -> T {
        self.origin + self.cell_width() * T::from_usize_lossy(k)
    }

    #[inline]
    pub fn cell_mass(&self, k: usize) -> T {
        self.prefix[k + 1] - self.prefix[k]
    }

    pub fn has_density(&self) -> bool {
        self.density.iter().any(|d| *d > T::zero())
    }

    pub fn is_atomic(&self) -> bool {
        !self.has_density()
    }

    pub fn total_mass(&self) -> T {
        self.prefix[self.density.len()] + self.atoms.iter().map(|a| a.mass).sum::<T>()
    }

    /// Index of the cell containing `x`.
    pub fn cell_of(&self, x: T) -> usize {
        let rel = wrap_angle(x - self.origin);
        let n = self.density.len();
        let k = (rel / self.cell_width()).floor().to_usize().unwrap_or(0);
        k.min(n - 1)
    }

    /// Density mass of `[origin, origin + x)` for `x ∈ [0, 2π]`.
    fn density_cdf(&self, x: T) -> T {
        let n = self.density.len();
        let w = self.cell_width();
        if x <= T::zero() {
            return T::zero();
        }
        if x >= T::two_pi() {
            return self.prefix[n];
        }
        let k = (x / w).floor().to_usize().unwrap_or(0).min(n - 1);
        self.prefix[k] + self.density[k] * (x - w * T::from_usize_lossy(k))
    }

    /// Mass of the density part on an arc.
    fn density_mass(&self, arc: Arc<T>) -> T {
        let tau = T::two_pi();
        if arc.length >= tau {
            return self.prefix[self.density.len()];
        }
        if arc.length <= T::zero() {
            return T::zero();
        }
        let s = wrap_angle(arc.start - self.origin);
        let e = s + arc.length;
        if e <= tau {
            self.density_cdf(e) - self.density_cdf(s)
        } else {
            self.prefix[self.density.len()] - self.density_cdf(s) + self.density_cdf(e - tau)
        }
    }

    /// Mass of the half-open arc, with density cells clipped exactly at the
    /// arc endpoints and atoms counted iff they lie in the arc.
    pub fn arc_mass(&self, arc: Arc<T>) -> T {
        let atoms: T = self
            .atoms
            .iter()
            .filter(|a| arc.contains(a.pos))
            .map(|a| a.mass)
            .sum();
        self.density_mass(arc) + atoms
    }

    /// Mass of `[start, end)` traversed counterclockwise.
    pub fn interval_mass(&self, start: T, end: T) -> IntervalMass<T> {
        IntervalMass {
            start,
            end,
            mass: self.arc_mass(Arc::between(start, end)),
        }
    }

    /// `∫ φ dμ`; each cell is integrated by adaptive quadrature to its share
    /// of `tol`.
    pub fn integrate_against<F: Fn(T) -> T>(&self, phi: F, tol: T) -> Result<T> {
        self.integrate_against_with_kinks(phi, &[], tol)
    }

    /// Like [`integrate_against`](Self::integrate_against), splitting cells at
    /// the given kink positions of `φ` first.
    pub fn integrate_against_with_kinks<F: Fn(T) -> T>(
        &self,
        phi: F,
        kinks: &[T],
        tol: T,
    ) -> Result<T> {
        let mut sum: T = self.atoms.iter().map(|a| a.mass * phi(a.pos)).sum();
        let n = self.density.len();
        let w = self.cell_width();
        let cell_tol = tol / T::from_usize_lossy(n);
        let mut rel_kinks: Vec<T> = kinks.iter().map(|k| wrap_angle(*k - self.origin)).collect();
        rel_kinks.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        for k in 0..n {
            let d = self.density[k];
            if d == T::zero() {
                continue;
            }
            let a = w * T::from_usize_lossy(k);
            let b = a + w;
            let mut cuts = vec![a];
            cuts.extend(rel_kinks.iter().copied().filter(|x| *x > a && *x < b));
            cuts.push(b);
            let piece_tol = cell_tol / T::from_usize_lossy(cuts.len() - 1);
            for win in cuts.windows(2) {
                let o = self.origin;
                let v = quadrature::integrate(&|x: T| phi(o + x), win[0], win[1], piece_tol / d.max(T::one()))?;
                sum += d * v;
            }
        }
        Ok(sum)
    }

    /// Rotation by `angle`.
    pub fn rotated(&self, angle: T) -> Self {
        Self {
            origin: wrap_angle(self.origin + angle),
            density: self.density.clone(),
            atoms: canonical_atoms(
                self.atoms
                    .iter()
                    .map(|a| Atom {
                        pos: a.pos + angle,
                        mass: a.mass,
                    })
                    .collect(),
            )
            .expect("valid atoms"),
            prefix: self.prefix.clone(),
        }
    }

    /// Pushforward under the antipodal map.
    pub fn antipodal_pushforward(&self) -> Self {
        self.rotated(T::PI())
    }

    /// Largest discrepancy between `μ` and its antipodal image over all
    /// segments of their common refinement (atoms and density compared
    /// separately).
    pub fn antipodal_defect(&self) -> T {
        let other = self.antipodal_pushforward();
        let r = Refinement::new(self, &other);
        let mut worst = T::zero();
        for j in 0..r.len() {
            worst = worst
                .max((r.atom_a[j] - r.atom_b[j]).abs())
                .max(((r.dens_a[j] - r.dens_b[j]) * r.lengths[j]).abs());
        }
        worst
    }

    pub fn is_antipodally_invariant(&self, tol: T) -> bool {
        self.antipodal_defect() <= tol
    }

    /// `(1 − t)·self + t·other`; both measures must share a grid.
    pub fn convex_combination(&self, other: &Self, t: T) -> Result<Self> {
        if self.grid_size() != other.grid_size()
            || (self.origin - other.origin).abs() > T::seam_tol()
        {
            return Err(Error::InvalidMeasure(
                "convex combination needs a common grid".into(),
            ));
        }
        let s = T::one() - t;
        let density = self
            .density
            .iter()
            .zip(&other.density)
            .map(|(a, b)| s * *a + t * *b)
            .collect();
        let atoms = self
            .atoms
            .iter()
            .map(|a| Atom {
                pos: a.pos,
                mass: s * a.mass,
            })
            .chain(other.atoms.iter().map(|a| Atom {
                pos: a.pos,
                mass: t * a.mass,
            }))
            .collect();
        Self::with_origin(self.origin, density, atoms)
    }

    /// Pushes the measure forward along `f`. Every atom becomes a weighted
    /// point, and every cell is split into `resolution` equal subcells whose
    /// masses sit at the images of their midpoints.
    pub fn pushforward<P, F: Fn(T) -> P>(&self, f: F, resolution: usize) -> DiscreteMeasure<P, T> {
        let r = resolution.max(1);
        let sub = self.cell_width() / T::from_usize_lossy(r);
        let mut points = Vec::with_capacity(self.atoms.len() + self.density.len() * r);
        let mut weights = Vec::with_capacity(points.capacity());
        for a in &self.atoms {
            points.push(f(a.pos));
            weights.push(a.mass);
        }
        for k in 0..self.density.len() {
            let m = self.cell_mass(k);
            if m == T::zero() {
                continue;
            }
            let each = m / T::from_usize_lossy(r);
            let start = self.cell_start(k);
            for i in 0..r {
                let mid = start + sub * (T::from_usize_lossy(i) + T::lit(0.5));
                points.push(f(wrap_angle(mid)));
                weights.push(each);
            }
        }
        DiscreteMeasure { points, weights }
    }
}

/// A finitely supported measure on an arbitrary point set.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure<P, T> {
    pub points: Vec<P>,
    pub weights: Vec<T>,
}

impl<P, T: Real> DiscreteMeasure<P, T> {
    pub fn new(points: Vec<P>, weights: Vec<T>) -> Result<Self> {
        if points.len() != weights.len() {
            return Err(Error::InvalidMeasure("points and weights differ in length".into()));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < T::zero()) {
            return Err(Error::InvalidMeasure("negative or non-finite weight".into()));
        }
        Ok(Self { points, weights })
    }

    pub fn dirac(p: P) -> Self {
        Self {
            points: vec![p],
            weights: vec![T::one()],
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn total_mass(&self) -> T {
        self.weights.iter().copied().sum()
    }
}

impl<T: Real> DiscreteMeasure<T, T> {
    /// Reads a discrete measure on the circle back as an atomic
    /// [`CircularMeasure`].
    pub fn to_circular(&self) -> Result<CircularMeasure<T>> {
        CircularMeasure::from_atoms(
            self.points
                .iter()
                .zip(&self.weights)
                .map(|(p, w)| Atom { pos: *p, mass: *w })
                .collect(),
        )
    }
}

/// The common refinement of two circle measures: the sorted union of both
/// grids' cell boundaries, both atom sets and the point 0. On every segment
/// `[breaks[j], breaks[j] + lengths[j])` both densities are constant, and the
/// atoms of each measure sit at segment starts.
#[derive(Debug, Clone)]
pub struct Refinement<T> {
    pub breaks: Vec<T>,
    pub lengths: Vec<T>,
    pub atom_a: Vec<T>,
    pub atom_b: Vec<T>,
    pub dens_a: Vec<T>,
    pub dens_b: Vec<T>,
}

impl<T: Real> Refinement<T> {
    pub fn new(a: &CircularMeasure<T>, b: &CircularMeasure<T>) -> Self {
        let mut pts: Vec<T> = Vec::with_capacity(
            a.grid_size() + b.grid_size() + a.atoms.len() + b.atoms.len() + 1,
        );
        pts.push(T::zero());
        for m in [a, b] {
            if m.grid_size() > 1 || m.has_density() {
                for k in 0..m.grid_size() {
                    pts.push(wrap_angle(m.cell_start(k)));
                }
            }
            pts.extend(m.atoms.iter().map(|x| x.pos));
        }
        pts.sort_by(|x, y| x.partial_cmp(y).expect("finite"));
        let mut breaks: Vec<T> = Vec::with_capacity(pts.len());
        for p in pts {
            match breaks.last() {
                Some(&last) if p - last <= T::seam_tol() => {}
                _ => breaks.push(p),
            }
        }
        let tau = T::two_pi();
        while breaks.len() > 1 && tau - breaks[breaks.len() - 1] <= T::seam_tol() {
            breaks.pop();
        }
        let n = breaks.len();
        let lengths: Vec<T> = (0..n)
            .map(|j| {
                let next = if j + 1 < n { breaks[j + 1] } else { tau };
                next - breaks[j]
            })
            .collect();
        let locate = |x: T| -> usize {
            // index of the break nearest to x (atoms were inserted as breaks)
            let i = breaks.partition_point(|b| *b <= x + T::seam_tol());
            let i = i.saturating_sub(1);
            if i + 1 < n && (breaks[i + 1] - x).abs() < (x - breaks[i]).abs() {
                i + 1
            } else if i == n - 1 && tau - x < (x - breaks[i]).abs() {
                0
            } else {
                i
            }
        };
        let mut atom_a = vec![T::zero(); n];
        let mut atom_b = vec![T::zero(); n];
        for at in &a.atoms {
            atom_a[locate(at.pos)] += at.mass;
        }
        for at in &b.atoms {
            atom_b[locate(at.pos)] += at.mass;
        }
        let mut dens_a = Vec::with_capacity(n);
        let mut dens_b = Vec::with_capacity(n);
        for j in 0..n {
            let mid = breaks[j] + lengths[j] * T::lit(0.5);
            dens_a.push(a.density[a.cell_of(mid)]);
            dens_b.push(b.density[b.cell_of(mid)]);
        }
        Self {
            breaks,
            lengths,
            atom_a,
            atom_b,
            dens_a,
            dens_b,
        }
    }

    pub fn len(&self) -> usize {
        self.breaks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.breaks.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn half_density() -> CircularMeasure<f64> {
        // density 1/π on [0, π), 0 elsewhere
        let n = 64;
        let density = (0..n).map(|k| if k < n / 2 { 1.0 / PI } else { 0.0 }).collect();
        CircularMeasure::new(density, vec![]).unwrap()
    }

    #[test]
    fn uniform_half_circles() {
        let u = CircularMeasure::<f64>::uniform(100);
        for i in 0..20 {
            let s = i as f64 * 0.37;
            assert!((u.interval_mass(s, s + PI).mass - 0.5).abs() < 1e-14);
        }
        assert!((u.arc_mass(Arc::new(0.3, 2.0 * PI)) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn dirac_arc_membership() {
        let d = CircularMeasure::<f64>::dirac(1.0);
        assert_eq!(d.interval_mass(0.5, 1.5).mass, 1.0);
        assert_eq!(d.interval_mass(1.0, 1.5).mass, 1.0);
        assert_eq!(d.interval_mass(1.5, 0.5).mass, 0.0);
        assert_eq!(d.interval_mass(0.5, 1.0).mass, 0.0);
    }

    #[test]
    fn clipped_cells() {
        let m = half_density();
        assert!((m.interval_mass(FRAC_PI_2, 3.0 * FRAC_PI_2).mass - 0.5).abs() < 1e-14);
        assert!((m.interval_mass(0.1, 0.2).mass - 0.1 / PI).abs() < 1e-14);
        // wrapping arc
        assert!((m.interval_mass(3.0 * FRAC_PI_2, FRAC_PI_2).mass - 0.5).abs() < 1e-14);
    }

    #[test]
    fn arc_masses_are_additive() {
        let raw: Vec<f64> = (0..32).map(|k| 1.0 + (k % 5) as f64).collect();
        let s: f64 = raw.iter().sum::<f64>() * (2.0 * PI / 32.0);
        let m = CircularMeasure::with_origin(
            0.3,
            raw.iter().map(|x| x * 0.6 / s).collect(),
            vec![Atom { pos: 1.0, mass: 0.2 }, Atom { pos: 4.0, mass: 0.2 }],
        )
        .unwrap();
        let cuts = [0.0, 0.7, 1.0, 2.2, 4.0, 5.9];
        let mut total = 0.0;
        for i in 0..cuts.len() {
            let e = if i + 1 < cuts.len() { cuts[i + 1] } else { 2.0 * PI };
            total += m.interval_mass(cuts[i], e).mass;
        }
        assert!((total - 1.0).abs() < 1e-13);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(CircularMeasure::<f64>::new(vec![], vec![]).is_err());
        assert!(CircularMeasure::new(vec![-1.0, 1.0], vec![]).is_err());
        assert!(CircularMeasure::<f64>::from_atoms(vec![Atom { pos: 0.0, mass: 0.5 }]).is_err());
        let json = r#"{"grid_size": 3, "density": [0.1, 0.2], "atoms": []}"#;
        assert!(serde_json::from_str::<CircularMeasure<f64>>(json).is_err());
    }

    #[test]
    fn duplicate_atoms_merge() {
        let m = CircularMeasure::<f64>::from_atoms(vec![
            Atom { pos: 0.5, mass: 0.25 },
            Atom { pos: 0.5 + 2.0 * PI, mass: 0.25 },
            Atom { pos: -1e-14, mass: 0.25 },
            Atom { pos: 0.0, mass: 0.25 },
        ])
        .unwrap();
        assert_eq!(m.atoms().len(), 2);
        assert_eq!(m.atoms()[0].pos, 0.0);
        assert!((m.atoms()[1].mass - 0.5).abs() < 1e-15);
    }

    #[test]
    fn json_wire_format() {
        let json = r#"{"grid_size": 1, "density": [0.0], "atoms": [{"pos": 3.0, "mass": 1.0}]}"#;
        let m: CircularMeasure<f64> = serde_json::from_str(json).unwrap();
        assert_eq!(m.atoms()[0].pos, 3.0);
        let back = serde_json::to_string(&m).unwrap();
        assert_eq!(back, r#"{"grid_size":1,"density":[0.0],"atoms":[{"pos":3.0,"mass":1.0}]}"#);
        let shifted = CircularMeasure::<f64>::uniform_with_origin(2, 0.5);
        let v: serde_json::Value = serde_json::to_value(&shifted).unwrap();
        assert_eq!(v["origin"], 0.5);
    }

    #[test]
    fn antipodal_invariance() {
        let u = CircularMeasure::<f64>::uniform(64);
        assert!(u.is_antipodally_invariant(1e-12));
        let d = CircularMeasure::<f64>::dirac(0.0);
        let dt = d.antipodal_pushforward();
        assert!((dt.atoms()[0].pos - PI).abs() < 1e-15);
        assert!(!d.is_antipodally_invariant(1e-9));
        let two = CircularMeasure::<f64>::from_atoms(vec![
            Atom { pos: 0.0, mass: 0.5 },
            Atom { pos: PI, mass: 0.5 },
        ])
        .unwrap();
        assert!(two.is_antipodally_invariant(1e-12));
        // a density that just happens to balance an atom is not invariant
        let mut density = vec![0.0; 4];
        density[2] = 0.5 / (PI / 2.0);
        let mixed = CircularMeasure::new(density, vec![Atom { pos: 0.1, mass: 0.5 }]).unwrap();
        assert!(!mixed.is_antipodally_invariant(1e-9));
        // symmetrising always yields an invariant measure
        let h = half_density();
        let sym = h.convex_combination(&h.antipodal_pushforward(), 0.5);
        assert!(sym.is_err(), "different grid origins");
        let on_grid = CircularMeasure::new(h.density().to_vec(), vec![]).unwrap();
        let rot = CircularMeasure::new(
            (0..64).map(|k| h.density()[(k + 32) % 64]).collect(),
            vec![],
        )
        .unwrap();
        let sym = on_grid.convex_combination(&rot, 0.5).unwrap();
        assert!(sym.is_antipodally_invariant(1e-12));
    }

    #[test]
    fn integrals() {
        let u = CircularMeasure::<f64>::uniform(256);
        assert!((u.integrate_against(|_| 1.0, 1e-10).unwrap() - 1.0).abs() < 1e-12);
        assert!(u.integrate_against(|t| t.cos(), 1e-10).unwrap().abs() < 1e-10);
        let b = 0.4;
        let v = u
            .integrate_against_with_kinks(|t| crate::real::circle_distance(b, t), &[b, b + PI], 1e-10)
            .unwrap();
        assert!((v - FRAC_PI_2).abs() < 1e-10);
    }

    #[test]
    fn pushforward_preserves_mass() {
        let h = half_density();
        let p = h.pushforward(|t| [t.cos(), t.sin()], 4);
        assert!((p.total_mass() - 1.0).abs() < 1e-13);
        let c = h.pushforward(|_| 7.0, 3);
        assert!(c.points.iter().all(|x| *x == 7.0));
        // identity pushforward keeps interval masses up to the subcell size
        let id = h.pushforward(|t| t, 8).to_circular().unwrap();
        // half a subcell mass per arc endpoint
        let res = 2.0 * 0.5 * (1.0 / PI) * (2.0 * PI / 64.0) / 8.0;
        for i in 0..30 {
            let s = i as f64 * 0.21;
            let e = s + 1.3;
            assert!((id.interval_mass(s, e).mass - h.interval_mass(s, e).mass).abs() <= res + 1e-12);
        }
    }

    #[test]
    fn refinement_segments() {
        let a = CircularMeasure::<f64>::uniform_with_origin(4, 0.1);
        let b = CircularMeasure::<f64>::dirac(1.0);
        let r = Refinement::new(&a, &b);
        assert_eq!(r.breaks[0], 0.0);
        assert!((r.lengths.iter().sum::<f64>() - 2.0 * PI).abs() < 1e-14);
        assert_eq!(r.atom_b.iter().sum::<f64>(), 1.0);
        let dm: f64 = r.dens_a.iter().zip(&r.lengths).map(|(d, l)| d * l).sum();
        assert!((dm - 1.0).abs() < 1e-14);
    }
}
