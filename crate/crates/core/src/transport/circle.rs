//! Wasserstein-1 distance on the circle via the CDF defect.
//!
//! With `F(t) = (μ − ν)([0, t))` the cost of transporting `μ` to `ν` equals
//! `min_c ∫ |F − c|`, attained at any median level `c` of `F`. A point `C`
//! with `F(C) = c` is a balanced cut: the defect `R ↦ (μ − ν)([C, R)) = F(R) − c`
//! is `≤ 0` on a set `M` and `≥ 0` on a set `N` of arc length `π` each, and
//! the 1-Lipschitz potential with `f' = 1_M − 1_N` certifies the distance.

use serde::Serialize;

use crate::measure::{CircularMeasure, Refinement};
use crate::real::{wrap_angle, Real};

/// Tolerance for sign checks of the cut defect.
pub const CUT_TOL: f64 = 1e-10;

/// The CDF defect of a pair of measures on their common refinement.
#[derive(Debug, Clone)]
pub struct DefectProfile<T> {
    /// Segment starts in `[0, 2π)`.
    pub starts: Vec<T>,
    pub lengths: Vec<T>,
    /// Atom mass difference sitting at each segment start.
    pub jumps: Vec<T>,
    /// Density difference on each segment.
    pub slopes: Vec<T>,
    /// `F` at each segment start (excluding the atom there).
    pub left: Vec<T>,
}

impl<T: Real> DefectProfile<T> {
    pub fn new(mu: &CircularMeasure<T>, nu: &CircularMeasure<T>) -> Self {
        let r = Refinement::new(mu, nu);
        let n = r.len();
        let mut left = Vec::with_capacity(n);
        let mut jumps = Vec::with_capacity(n);
        let mut slopes = Vec::with_capacity(n);
        let mut acc = T::zero();
        for j in 0..n {
            left.push(acc);
            let jump = r.atom_a[j] - r.atom_b[j];
            let slope = r.dens_a[j] - r.dens_b[j];
            jumps.push(jump);
            slopes.push(slope);
            acc += jump + slope * r.lengths[j];
        }
        Self {
            starts: r.breaks,
            lengths: r.lengths,
            jumps,
            slopes,
            left,
        }
    }

    pub fn len(&self) -> usize {
        self.starts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.starts.is_empty()
    }

    /// Value just after the start of segment `j`.
    #[inline]
    pub fn start_value(&self, j: usize) -> T {
        self.left[j] + self.jumps[j]
    }

    /// Value just before the end of segment `j`.
    #[inline]
    pub fn end_value(&self, j: usize) -> T {
        self.start_value(j) + self.slopes[j] * self.lengths[j]
    }

    /// `F(t) = (μ − ν)([0, t))`.
    pub fn value_at(&self, t: T) -> T {
        let t = wrap_angle(t);
        let j = self.starts.partition_point(|s| *s <= t).saturating_sub(1);
        if t == self.starts[j] {
            self.left[j]
        } else {
            self.start_value(j) + self.slopes[j] * (t - self.starts[j])
        }
    }

    /// Arc length of `{F < c}`.
    pub fn length_below(&self, c: T) -> T {
        let mut total = T::zero();
        for j in 0..self.len() {
            let (u, w) = (self.start_value(j), self.end_value(j));
            let len = self.lengths[j];
            if u == w || self.slopes[j] == T::zero() {
                if u < c {
                    total += len;
                }
            } else {
                let (lo, hi) = if u < w { (u, w) } else { (w, u) };
                let frac = ((c - lo) / (hi - lo)).max(T::zero()).min(T::one());
                total += len * frac;
            }
        }
        total
    }

    /// Smallest median level: `inf { c : |{F < c}| ≥ π }`, by bisection.
    pub fn median_level(&self) -> T {
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for j in 0..self.len() {
            for v in [self.start_value(j), self.end_value(j)] {
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
        if hi <= lo {
            return lo;
        }
        let pi = T::PI();
        // invariant: length_below(lo) < π ≤ length_below(hi)
        let span = hi - lo;
        hi = hi + span * T::lit(1e-12) + T::min_positive_value();
        for _ in 0..256 {
            let mid = lo + (hi - lo) * T::lit(0.5);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.length_below(mid) >= pi {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }

    /// `∫₀^{2π} |F(t) − c| dt`, exact for the piecewise-linear `F`.
    pub fn abs_deviation(&self, c: T) -> T {
        let half = T::lit(0.5);
        let mut total = T::zero();
        for j in 0..self.len() {
            let a = self.start_value(j) - c;
            let b = self.end_value(j) - c;
            let len = self.lengths[j];
            if (a >= T::zero()) == (b >= T::zero()) || a == T::zero() || b == T::zero() {
                total += len * (a + b).abs() * half;
            } else {
                let (aa, bb) = (a.abs(), b.abs());
                total += len * (aa * aa + bb * bb) * half / (aa + bb);
            }
        }
        total
    }
}

/// Which side of a balanced cut a piece of the circle belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    /// `μ([C, R)) ≤ ν([C, R))`; the potential increases here.
    M,
    /// `μ([C, R)) ≥ ν([C, R))`; the potential decreases here.
    N,
}

/// A piece `[start, start + length)` of the cut partition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct PartitionArc<T> {
    pub start: T,
    pub length: T,
    pub side: Side,
}

/// A balanced cut point `C` with its partition of the circle into `M` and `N`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct BalancedCut<T> {
    pub cut: T,
    /// `F(C)`, the median level the partition is built from.
    pub level: T,
    pub partition: Vec<PartitionArc<T>>,
    /// Whether the sign conditions hold within [`CUT_TOL`] on every piece.
    pub validated: bool,
}

impl<T: Real> BalancedCut<T> {
    pub fn length_of(&self, side: Side) -> T {
        self.partition
            .iter()
            .filter(|p| p.side == side)
            .map(|p| p.length)
            .sum()
    }
}

/// A 1-Lipschitz piecewise-linear potential with slopes `±1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct DualPotential<T> {
    /// Knots in `[0, 2π]`, starting at 0 and ending at `2π`.
    pub knots: Vec<T>,
    pub values: Vec<T>,
    pub sides: Vec<Side>,
}

impl<T: Real> DualPotential<T> {
    pub fn eval(&self, t: T) -> T {
        let t = wrap_angle(t);
        let i = self
            .knots
            .partition_point(|k| *k <= t)
            .saturating_sub(1)
            .min(self.sides.len() - 1);
        let slope = match self.sides[i] {
            Side::M => T::one(),
            Side::N => -T::one(),
        };
        self.values[i] + slope * (t - self.knots[i])
    }

    /// `|f(2π) − f(0)|`; zero for an exactly balanced partition.
    pub fn periodicity_defect(&self) -> T {
        (self.values[self.values.len() - 1] - self.values[0]).abs()
    }

    /// `∫ f d(μ − ν)`, exact for piecewise-constant densities.
    pub fn integrate_difference(&self, mu: &CircularMeasure<T>, nu: &CircularMeasure<T>) -> T {
        let mut total = T::zero();
        for a in mu.atoms() {
            total += a.mass * self.eval(a.pos);
        }
        for a in nu.atoms() {
            total -= a.mass * self.eval(a.pos);
        }
        let profile = DefectProfile::new(mu, nu);
        let mut xs: Vec<T> = profile.starts.iter().chain(self.knots.iter()).copied().collect();
        xs.push(T::two_pi());
        xs.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        xs.dedup();
        let half = T::lit(0.5);
        for w in xs.windows(2) {
            let (x, y) = (w[0], w[1]);
            let mid = (x + y) * half;
            let j = profile.starts.partition_point(|s| *s <= mid).saturating_sub(1);
            let rho = profile.slopes[j];
            if rho == T::zero() {
                continue;
            }
            let i = self
                .knots
                .partition_point(|k| *k <= mid)
                .saturating_sub(1)
                .min(self.sides.len() - 1);
            total += rho * (y - x) * (self.piece_value(i, x) + self.piece_value(i, y)) * half;
        }
        total
    }

    fn piece_value(&self, i: usize, t: T) -> T {
        let slope = match self.sides[i] {
            Side::M => T::one(),
            Side::N => -T::one(),
        };
        self.values[i] + slope * (t - self.knots[i])
    }
}

/// Result of [`w1_circle`].
#[derive(Debug, Clone, Serialize)]
#[serde(bound = "T: Real")]
pub struct CircleTransport<T> {
    pub distance: T,
    pub cut: BalancedCut<T>,
    pub potential: DualPotential<T>,
    /// `|∫ f d(μ − ν) − min_c ∫ |F − c||`.
    pub certificate_gap: T,
}

struct Piece<T> {
    start: T,
    length: T,
    side: Option<Side>,
    lo_val: T,
    hi_val: T,
}

/// Splits the circle into pieces on which `F − level` has a fixed sign, with
/// pieces lying on the level set marked `None`.
fn sign_pieces<T: Real>(p: &DefectProfile<T>, level: T, tol: T) -> Vec<Piece<T>> {
    let mut out = Vec::with_capacity(p.len() + 8);
    for j in 0..p.len() {
        let (u, w) = (p.start_value(j), p.end_value(j));
        let (s, len) = (p.starts[j], p.lengths[j]);
        if len <= T::zero() {
            continue;
        }
        let side_of = |v: T| {
            if v < level - tol {
                Some(Side::M)
            } else if v > level + tol {
                Some(Side::N)
            } else {
                None
            }
        };
        let su = side_of(u);
        let sw = side_of(w);
        if su == sw {
            out.push(Piece {
                start: s,
                length: len,
                side: su,
                lo_val: u,
                hi_val: w,
            });
        } else {
            // F is linear here; split where it enters/leaves the tolerance band
            let slope = p.slopes[j];
            let cross = |target: T| ((target - u) / slope).max(T::zero()).min(len);
            let mut cuts = vec![T::zero()];
            for target in [level - tol, level + tol] {
                let x = cross(target);
                if x > T::zero() && x < len {
                    cuts.push(x);
                }
            }
            cuts.push(len);
            cuts.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
            for win in cuts.windows(2) {
                if win[1] <= win[0] {
                    continue;
                }
                let mid = u + slope * (win[0] + win[1]) * T::lit(0.5);
                out.push(Piece {
                    start: s + win[0],
                    length: win[1] - win[0],
                    side: side_of(mid),
                    lo_val: u + slope * win[0],
                    hi_val: u + slope * win[1],
                });
            }
        }
    }
    out
}

/// Builds the cut partition and potential for a given level. Returns `None`
/// when the level is not a median of `F`.
fn build_certificate<T: Real>(
    p: &DefectProfile<T>,
    cut: T,
    level: T,
) -> Option<(BalancedCut<T>, DualPotential<T>)> {
    let tol = T::lit(CUT_TOL).max(T::epsilon() * T::lit(64.0));
    let pi = T::PI();
    let mut pieces = sign_pieces(p, level, T::epsilon() * T::lit(64.0));
    let m_strict: T = pieces.iter().filter(|x| x.side == Some(Side::M)).map(|x| x.length).sum();
    let n_strict: T = pieces.iter().filter(|x| x.side == Some(Side::N)).map(|x| x.length).sum();
    let len_tol = T::mass_tol() * T::lit(1e3);
    if m_strict > pi + len_tol || n_strict > pi + len_tol {
        return None;
    }
    // distribute the level set between M and N, in circle order
    let mut deficit = pi - m_strict;
    let mut split: Vec<Piece<T>> = Vec::with_capacity(pieces.len() + 1);
    for piece in pieces.drain(..) {
        if piece.side.is_some() {
            split.push(piece);
            continue;
        }
        if deficit >= piece.length {
            deficit -= piece.length;
            split.push(Piece {
                side: Some(Side::M),
                ..piece
            });
        } else if deficit > T::zero() {
            let first = deficit;
            split.push(Piece {
                start: piece.start,
                length: first,
                side: Some(Side::M),
                lo_val: piece.lo_val,
                hi_val: piece.hi_val,
            });
            split.push(Piece {
                start: piece.start + first,
                length: piece.length - first,
                side: Some(Side::N),
                lo_val: piece.lo_val,
                hi_val: piece.hi_val,
            });
            deficit = T::zero();
        } else {
            split.push(Piece {
                side: Some(Side::N),
                ..piece
            });
        }
    }

    let mut knots = Vec::with_capacity(split.len() + 1);
    let mut values = Vec::with_capacity(split.len() + 1);
    let mut sides = Vec::with_capacity(split.len());
    let mut f = T::zero();
    for piece in &split {
        let side = piece.side.expect("assigned");
        knots.push(piece.start);
        values.push(f);
        sides.push(side);
        f += match side {
            Side::M => piece.length,
            Side::N => -piece.length,
        };
    }
    knots.push(T::two_pi());
    values.push(f);
    let mut potential = DualPotential {
        knots,
        values,
        sides,
    };
    let shift = potential.eval(cut);
    for v in potential.values.iter_mut() {
        *v -= shift;
    }

    let validated = split.iter().all(|piece| {
        let (a, b) = (piece.lo_val - level, piece.hi_val - level);
        match piece.side.expect("assigned") {
            Side::M => a <= tol && b <= tol,
            Side::N => a >= -tol && b >= -tol,
        }
    }) && (p.value_at(cut) - level).abs() <= tol;

    let partition = split
        .iter()
        .map(|piece| PartitionArc {
            start: piece.start,
            length: piece.length,
            side: piece.side.expect("assigned"),
        })
        .collect();
    Some((
        BalancedCut {
            cut,
            level,
            partition,
            validated,
        },
        potential,
    ))
}

/// Smallest circle coordinate where `F` takes the value `level`.
fn locate_cut<T: Real>(p: &DefectProfile<T>, level: T) -> Option<T> {
    let tol = T::lit(CUT_TOL).max(T::epsilon() * T::lit(64.0));
    for j in 0..p.len() {
        if (p.left[j] - level).abs() <= tol {
            return Some(p.starts[j]);
        }
        let (u, w) = (p.start_value(j), p.end_value(j));
        let len = p.lengths[j];
        if p.slopes[j] == T::zero() || u == w {
            if (u - level).abs() <= tol {
                // level attained on the open segment only
                return Some(p.starts[j] + len * T::lit(0.5));
            }
            continue;
        }
        let (lo, hi) = if u < w { (u, w) } else { (w, u) };
        if level >= lo - tol && level <= hi + tol {
            let x = ((level - u) / p.slopes[j]).max(T::zero()).min(len);
            let x = if x == T::zero() { len * T::lit(1e-9) } else { x };
            return Some(p.starts[j] + x);
        }
    }
    None
}

/// Wasserstein-1 distance on the circle through a balanced cut point and its
/// dual potential.
pub fn w1_circle<T: Real>(mu: &CircularMeasure<T>, nu: &CircularMeasure<T>) -> CircleTransport<T> {
    let profile = DefectProfile::new(mu, nu);
    let level = profile.median_level();
    let cut = locate_cut(&profile, level).unwrap_or_else(|| {
        // no point attains the median (it sits inside a jump): cut at the jump
        (0..profile.len())
            .find(|&j| {
                let (a, b) = (profile.left[j], profile.start_value(j));
                (a <= level && level <= b) || (b <= level && level <= a)
            })
            .map(|j| profile.starts[j])
            .unwrap_or_else(T::zero)
    });
    let (cut, potential) =
        build_certificate(&profile, cut, level).expect("median level always admits a partition");
    let distance = potential.integrate_difference(mu, nu);
    let primal = profile.abs_deviation(level);
    CircleTransport {
        distance,
        certificate_gap: (distance - primal).abs(),
        cut,
        potential,
    }
}

/// Tests whether `cut` is a balanced cut point for `(μ, ν)`; on success
/// returns the cut, its potential and the certified distance `∫ f d(μ − ν)`.
pub fn balanced_cut_at<T: Real>(
    mu: &CircularMeasure<T>,
    nu: &CircularMeasure<T>,
    cut: T,
) -> Option<(BalancedCut<T>, DualPotential<T>, T)> {
    let profile = DefectProfile::new(mu, nu);
    let level = profile.value_at(cut);
    let (bc, pot) = build_certificate(&profile, wrap_angle(cut), level)?;
    if !bc.validated {
        return None;
    }
    let d = pot.integrate_difference(mu, nu);
    Some((bc, pot, d))
}

/// Checks the sign conditions of a cut with a prescribed partition
/// `M = [C, C + π)`, `N = [C + π, C + 2π)`, at every breakpoint of the common
/// refinement. Returns the largest violation (0 when the cut is balanced).
pub fn half_circle_cut_defect<T: Real>(mu: &CircularMeasure<T>, nu: &CircularMeasure<T>, cut: T) -> T {
    let p = DefectProfile::new(mu, nu);
    let base = p.value_at(cut);
    let pi = T::PI();
    let mut worst = T::zero();
    let mut check = |r: T, v: T| {
        let rel = wrap_angle(r - cut);
        let d = v - base;
        let viol = if rel < pi { d } else { -d };
        if rel > T::zero() && viol > worst {
            worst = viol;
        }
    };
    for j in 0..p.len() {
        check(p.starts[j], p.left[j]);
        let e = p.starts[j] + p.lengths[j];
        check(e, p.end_value(j));
    }
    // the split points C + π
    check(cut + pi, p.value_at(cut + pi));
    worst
}

/// `min_c ∫₀^{2π} |F_μ − F_ν − c|`, with CDFs taken from angle 0.
pub fn w1_cdf_shift<T: Real>(mu: &CircularMeasure<T>, nu: &CircularMeasure<T>) -> T {
    let profile = DefectProfile::new(mu, nu);
    profile.abs_deviation(profile.median_level())
}
