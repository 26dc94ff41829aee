//! Lipschitz curves `η: S¹ → (ℝⁿ, ‖·‖)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::integrate;
use crate::real::{circle_distance, wrap_angle, Real};

use super::target::NormedTarget;

/// Dense sampling resolution used to estimate Lipschitz constants.
pub const LIPSCHITZ_SAMPLES: usize = 8192;

/// How a curve is evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real", rename_all = "lowercase")]
pub enum CurveForm<T> {
    /// Per coordinate, `[aₖ, bₖ]` for `k = 0, 1, …`:
    /// `xᵢ(t) = Σₖ aₖ cos kt + bₖ sin kt`.
    Fourier(Vec<Vec<[T; 2]>>),
    /// Rows `[t, x₁, …, xₙ]` with increasing `t` spanning less than a full
    /// turn; interpolated linearly and closed periodically.
    Samples(Vec<Vec<T>>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real", try_from = "CurveRecord<T>", into = "CurveRecord<T>")]
pub struct LipschitzCurve<T> {
    target: NormedTarget<T>,
    form: CurveForm<T>,
    lipschitz: T,
    /// For sampled curves, `∫ η` from the first sample to each sample.
    prefix: Vec<T>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "T: Real", deny_unknown_fields)]
pub struct CurveRecord<T> {
    pub target: NormedTarget<T>,
    pub form: CurveForm<T>,
}

impl<T: Real> TryFrom<CurveRecord<T>> for LipschitzCurve<T> {
    type Error = Error;
    fn try_from(r: CurveRecord<T>) -> Result<Self> {
        Self::new(r.target, r.form)
    }
}

impl<T: Real> From<LipschitzCurve<T>> for CurveRecord<T> {
    fn from(c: LipschitzCurve<T>) -> Self {
        CurveRecord {
            target: c.target,
            form: c.form,
        }
    }
}

impl<T: Real> LipschitzCurve<T> {
    pub fn new(target: NormedTarget<T>, form: CurveForm<T>) -> Result<Self> {
        let n = target.dim;
        match &form {
            CurveForm::Fourier(coords) => {
                if coords.len() != n {
                    return Err(Error::InvalidCurve(format!(
                        "{} Fourier coordinates for a target of dimension {n}",
                        coords.len()
                    )));
                }
                if coords.iter().flatten().flatten().any(|c| !c.is_finite()) {
                    return Err(Error::InvalidCurve("non-finite Fourier coefficient".into()));
                }
            }
            CurveForm::Samples(rows) => {
                if rows.len() < 2 {
                    return Err(Error::InvalidCurve("need at least two samples".into()));
                }
                for (i, r) in rows.iter().enumerate() {
                    if r.len() != n + 1 {
                        return Err(Error::InvalidCurve(format!(
                            "sample {i} has {} entries, expected {}",
                            r.len(),
                            n + 1
                        )));
                    }
                    if r.iter().any(|x| !x.is_finite()) {
                        return Err(Error::InvalidCurve(format!("sample {i} is not finite")));
                    }
                    if i > 0 && !(r[0] > rows[i - 1][0]) {
                        return Err(Error::InvalidCurve(format!("sample times not increasing at {i}")));
                    }
                }
                if !(rows[rows.len() - 1][0] - rows[0][0] < T::two_pi()) {
                    return Err(Error::InvalidCurve("samples span a full turn or more".into()));
                }
            }
        }
        let mut prefix = Vec::new();
        if let CurveForm::Samples(rows) = &form {
            let half = T::lit(0.5);
            prefix = vec![T::zero(); (rows.len() + 1) * n];
            for j in 0..rows.len() {
                let (a, b) = (&rows[j], &rows[(j + 1) % rows.len()]);
                let end = if j + 1 < rows.len() { b[0] } else { rows[0][0] + T::two_pi() };
                for i in 0..n {
                    prefix[(j + 1) * n + i] = prefix[j * n + i] + (a[i + 1] + b[i + 1]) * half * (end - a[0]);
                }
            }
        }
        let mut c = Self {
            target,
            form,
            lipschitz: T::zero(),
            prefix,
        };
        c.lipschitz = c.estimate_lipschitz();
        Ok(c)
    }

    /// Unit-speed circle `(cos t, sin t)` in the given planar target.
    pub fn circle(target: NormedTarget<T>) -> Result<Self> {
        Self::ellipse(target, T::one(), T::one())
    }

    /// `(a cos t, b sin t)`.
    pub fn ellipse(target: NormedTarget<T>, a: T, b: T) -> Result<Self> {
        let z = T::zero();
        Self::new(target, CurveForm::Fourier(vec![vec![[z, z], [a, z]], vec![[z, z], [z, b]]]))
    }

    /// The constant curve at `x`.
    pub fn constant(target: NormedTarget<T>, x: &[T]) -> Result<Self> {
        let coords = x.iter().map(|v| vec![[*v, T::zero()]]).collect();
        Self::new(target, CurveForm::Fourier(coords))
    }

    /// `t ↦ (d(t, 2πi/m))ᵢ` into `(ℝᵐ, ℓ∞)`, exact as a polygonal curve.
    pub fn kuratowski(m: usize) -> Result<Self> {
        let step = T::PI() / T::from_usize_lossy(m);
        let rows = (0..2 * m)
            .map(|j| {
                let t = step * T::from_usize_lossy(j);
                let mut row = vec![t];
                row.extend((0..m).map(|i| circle_distance(t, step * T::from_usize_lossy(2 * i))));
                row
            })
            .collect();
        Self::new(NormedTarget::linf(m), CurveForm::Samples(rows))
    }

    pub fn target(&self) -> &NormedTarget<T> {
        &self.target
    }

    pub fn form(&self) -> &CurveForm<T> {
        &self.form
    }

    pub fn dim(&self) -> usize {
        self.target.dim
    }

    /// Lipschitz constant with respect to arc length on `S¹`, from dense
    /// sampling of the speed (exact for polygonal curves).
    pub fn lipschitz(&self) -> T {
        self.lipschitz
    }

    pub fn eval(&self, t: T) -> Vec<T> {
        let mut out = vec![T::zero(); self.dim()];
        self.eval_into(t, &mut out);
        out
    }

    pub fn eval_into(&self, t: T, out: &mut [T]) {
        match &self.form {
            CurveForm::Fourier(coords) => {
                let (s1, c1) = t.sin_cos();
                for (o, cs) in out.iter_mut().zip(coords) {
                    *o = T::zero();
                    let (mut c, mut s) = (T::one(), T::zero());
                    for (k, ab) in cs.iter().enumerate() {
                        if k > 0 {
                            let nc = c * c1 - s * s1;
                            s = s * c1 + c * s1;
                            c = nc;
                        }
                        *o += ab[0] * c + ab[1] * s;
                    }
                }
            }
            CurveForm::Samples(rows) => {
                let (j, u) = self.locate(rows, t);
                let (a, b) = (&rows[j], &rows[(j + 1) % rows.len()]);
                for (i, o) in out.iter_mut().enumerate() {
                    *o = a[i + 1] + (b[i + 1] - a[i + 1]) * u;
                }
            }
        }
    }

    /// Segment index and fraction along it for a sampled curve.
    fn locate(&self, rows: &[Vec<T>], t: T) -> (usize, T) {
        let t0 = rows[0][0];
        let tau = T::two_pi();
        let rel = wrap_angle(t - t0);
        let x = t0 + rel;
        let j = rows.partition_point(|r| r[0] <= x).saturating_sub(1);
        let next = if j + 1 < rows.len() { rows[j + 1][0] } else { t0 + tau };
        let len = next - rows[j][0];
        (j, ((x - rows[j][0]) / len).max(T::zero()).min(T::one()))
    }

    /// `η'(t)` (one-sided from the right at polygon vertices).
    pub fn derivative_into(&self, t: T, out: &mut [T]) {
        match &self.form {
            CurveForm::Fourier(coords) => {
                let (s1, c1) = t.sin_cos();
                for (o, cs) in out.iter_mut().zip(coords) {
                    *o = T::zero();
                    let (mut c, mut s) = (T::one(), T::zero());
                    for (k, ab) in cs.iter().enumerate() {
                        if k > 0 {
                            let nc = c * c1 - s * s1;
                            s = s * c1 + c * s1;
                            c = nc;
                            let kk = T::from_usize_lossy(k);
                            *o += kk * (ab[1] * c - ab[0] * s);
                        }
                    }
                }
            }
            CurveForm::Samples(rows) => {
                let (j, _) = self.locate(rows, t);
                let (a, b) = (&rows[j], &rows[(j + 1) % rows.len()]);
                let next = if j + 1 < rows.len() { b[0] } else { b[0] + T::two_pi() };
                let dt = next - a[0];
                for (i, o) in out.iter_mut().enumerate() {
                    *o = (b[i + 1] - a[i + 1]) / dt;
                }
            }
        }
    }

    pub fn speed(&self, t: T) -> T {
        let mut d = vec![T::zero(); self.dim()];
        self.derivative_into(t, &mut d);
        self.target.norm(&d)
    }

    fn estimate_lipschitz(&self) -> T {
        match &self.form {
            CurveForm::Samples(rows) => {
                let n = rows.len();
                let mut best = T::zero();
                let mut d = vec![T::zero(); self.dim()];
                for j in 0..n {
                    let (a, b) = (&rows[j], &rows[(j + 1) % n]);
                    let dt = if j + 1 < n { b[0] - a[0] } else { b[0] + T::two_pi() - a[0] };
                    for i in 0..d.len() {
                        d[i] = b[i + 1] - a[i + 1];
                    }
                    best = best.max(self.target.norm(&d) / dt);
                }
                best
            }
            CurveForm::Fourier(_) => {
                let m = LIPSCHITZ_SAMPLES;
                let h = T::two_pi() / T::from_usize_lossy(m);
                let (mut best, mut at) = (T::zero(), T::zero());
                for j in 0..m {
                    let t = h * T::from_usize_lossy(j);
                    let s = self.speed(t);
                    if s > best {
                        best = s;
                        at = t;
                    }
                }
                // golden-section refinement around the best sample
                let (mut lo, mut hi) = (at - h, at + h);
                let phi = T::lit(0.618_033_988_749_894_8);
                for _ in 0..80 {
                    let x1 = hi - phi * (hi - lo);
                    let x2 = lo + phi * (hi - lo);
                    if self.speed(x1) < self.speed(x2) {
                        lo = x1;
                    } else {
                        hi = x2;
                    }
                }
                best.max(self.speed((lo + hi) * T::lit(0.5)))
            }
        }
    }

    /// Mean of `η` under the uniform probability measure.
    pub fn mean(&self) -> Vec<T> {
        match &self.form {
            CurveForm::Fourier(coords) => coords.iter().map(|cs| cs.first().map_or(T::zero(), |ab| ab[0])).collect(),
            CurveForm::Samples(_) => {
                let mut g = vec![T::zero(); self.dim()];
                self.antiderivative_samples(self.sample_start() + T::two_pi(), &mut g);
                g.iter().map(|v| *v / T::two_pi()).collect()
            }
        }
    }

    fn sample_start(&self) -> T {
        match &self.form {
            CurveForm::Samples(rows) => rows[0][0],
            CurveForm::Fourier(_) => T::zero(),
        }
    }

    /// `∫_{t₀}^{t} η` for a sampled curve, `t₀` the first sample time.
    fn antiderivative_samples(&self, t: T, out: &mut [T]) {
        let CurveForm::Samples(rows) = &self.form else {
            unreachable!()
        };
        let n = out.len();
        let m = rows.len();
        let t0 = rows[0][0];
        let tau = T::two_pi();
        let turns = ((t - t0) / tau).floor();
        let x = t - turns * tau;
        let j = rows.partition_point(|r| r[0] <= x).saturating_sub(1);
        let (a, b) = (&rows[j], &rows[(j + 1) % m]);
        let end = if j + 1 < m { b[0] } else { t0 + tau };
        let u = x - a[0];
        let dt = end - a[0];
        for i in 0..n {
            let slope = (b[i + 1] - a[i + 1]) / dt;
            out[i] = self.prefix[j * n + i]
                + a[i + 1] * u
                + slope * u * u * T::lit(0.5)
                + turns * self.prefix[m * n + i];
        }
    }

    /// `out[j·n + i] = ∫ ηᵢ` over `[origin + j·w, origin + (j+1)·w]` for
    /// `j < count`.
    pub fn cell_integrals(&self, origin: T, width: T, count: usize, out: &mut [T]) {
        let n = self.dim();
        debug_assert!(out.len() >= count * n);
        match &self.form {
            CurveForm::Fourier(coords) => {
                let h = coords.iter().map(|c| c.len()).max().unwrap_or(0);
                let mut prev = vec![T::zero(); n];
                let mut cur = vec![T::zero(); n];
                let mut cs = vec![(T::one(), T::zero()); h.max(1)];
                let (ds, dc) = width.sin_cos();
                let (mut s1, mut c1) = origin.sin_cos();
                for j in 0..=count {
                    let t = origin + width * T::from_usize_lossy(j);
                    if j % 64 == 0 {
                        let sc = t.sin_cos();
                        s1 = sc.0;
                        c1 = sc.1;
                    }
                    // multiple angles of t
                    cs[0] = (T::one(), T::zero());
                    for k in 1..h {
                        let (c, s) = cs[k - 1];
                        cs[k] = (c * c1 - s * s1, s * c1 + c * s1);
                    }
                    for (i, coef) in coords.iter().enumerate() {
                        let mut g = T::zero();
                        for (k, ab) in coef.iter().enumerate() {
                            if k == 0 {
                                g += ab[0] * (t - origin);
                            } else {
                                let kk = T::from_usize_lossy(k);
                                g += (ab[0] * cs[k].1 - ab[1] * cs[k].0) / kk;
                            }
                        }
                        cur[i] = g;
                    }
                    if j > 0 {
                        for i in 0..n {
                            out[(j - 1) * n + i] = cur[i] - prev[i];
                        }
                    }
                    std::mem::swap(&mut prev, &mut cur);
                    let nc = c1 * dc - s1 * ds;
                    s1 = s1 * dc + c1 * ds;
                    c1 = nc;
                }
            }
            CurveForm::Samples(_) => {
                let mut prev = vec![T::zero(); n];
                let mut cur = vec![T::zero(); n];
                self.antiderivative_samples(origin, &mut prev);
                for j in 0..count {
                    let t = origin + width * T::from_usize_lossy(j + 1);
                    self.antiderivative_samples(t, &mut cur);
                    for i in 0..n {
                        out[j * n + i] = cur[i] - prev[i];
                    }
                    std::mem::swap(&mut prev, &mut cur);
                }
            }
        }
    }

    /// Length in the target norm.
    pub fn length(&self) -> Result<T> {
        match &self.form {
            CurveForm::Samples(rows) => {
                let n = rows.len();
                let mut d = vec![T::zero(); self.dim()];
                let mut total = T::zero();
                for j in 0..n {
                    let (a, b) = (&rows[j], &rows[(j + 1) % n]);
                    for i in 0..d.len() {
                        d[i] = b[i + 1] - a[i + 1];
                    }
                    total += self.target.norm(&d);
                }
                Ok(total)
            }
            CurveForm::Fourier(_) => {
                let pieces = 256;
                let h = T::two_pi() / T::from_usize_lossy(pieces);
                let tol = T::lit(1e-11) / T::from_usize_lossy(pieces);
                let mut total = T::zero();
                for j in 0..pieces {
                    let a = h * T::from_usize_lossy(j);
                    total += integrate(&|t| self.speed(t), a, a + h, tol)?;
                }
                Ok(total)
            }
        }
    }

    /// Whether the speed is constant to relative precision `tol`.
    pub fn has_constant_speed(&self, tol: T) -> bool {
        let m = LIPSCHITZ_SAMPLES;
        let h = T::two_pi() / T::from_usize_lossy(m);
        let (mut lo, mut hi) = (T::infinity(), T::zero());
        for j in 0..m {
            let s = self.speed(h * (T::from_usize_lossy(j) + T::lit(0.5)));
            lo = lo.min(s);
            hi = hi.max(s);
        }
        hi - lo <= tol * hi.max(T::min_positive_value())
    }

    /// Reparametrization proportional to arc length, as a polygonal curve
    /// through `samples` points equally spaced in length. Curves that already
    /// have constant speed are returned unchanged.
    pub fn constant_speed(&self, samples: usize) -> Result<Self> {
        if self.has_constant_speed(T::lit(1e-12)) {
            return Ok(self.clone());
        }
        let length = self.length()?;
        if !(length > T::zero()) {
            return Ok(self.clone());
        }
        // arc-length table on a fine parameter grid
        let fine = samples * 8;
        let h = T::two_pi() / T::from_usize_lossy(fine);
        let t0 = self.sample_start();
        let tol = T::lit(1e-12) / T::from_usize_lossy(fine);
        let mut acc = vec![T::zero(); fine + 1];
        for j in 0..fine {
            let a = t0 + h * T::from_usize_lossy(j);
            acc[j + 1] = acc[j] + integrate(&|t| self.speed(t), a, a + h, tol)?;
        }
        let total = acc[fine];
        let mut rows = Vec::with_capacity(samples);
        for j in 0..samples {
            let target = total * T::from_usize_lossy(j) / T::from_usize_lossy(samples);
            let i = acc.partition_point(|s| *s <= target).saturating_sub(1).min(fine - 1);
            let seg = acc[i + 1] - acc[i];
            let u = if seg > T::zero() { (target - acc[i]) / seg } else { T::zero() };
            let mut t = t0 + h * (T::from_usize_lossy(i) + u);
            // one Newton step on the arc length
            let a = t0 + h * T::from_usize_lossy(i);
            let s_t = acc[i] + integrate(&|x| self.speed(x), a, t, tol)?;
            let sp = self.speed(t);
            if sp > T::zero() {
                t -= (s_t - target) / sp;
            }
            let mut row = vec![T::two_pi() * T::from_usize_lossy(j) / T::from_usize_lossy(samples)];
            row.extend(self.eval(t));
            rows.push(row);
        }
        Self::new(self.target.clone(), CurveForm::Samples(rows))
    }

    /// `c·η`.
    pub fn scaled(&self, c: T) -> Result<Self> {
        let form = match &self.form {
            CurveForm::Fourier(coords) => {
                CurveForm::Fourier(coords.iter().map(|cs| cs.iter().map(|ab| [ab[0] * c, ab[1] * c]).collect()).collect())
            }
            CurveForm::Samples(rows) => CurveForm::Samples(
                rows.iter()
                    .map(|r| {
                        let mut r2 = vec![r[0]];
                        r2.extend(r[1..].iter().map(|x| *x * c));
                        r2
                    })
                    .collect(),
            ),
        };
        Self::new(self.target.clone(), form)
    }

    /// `t ↦ η(t − angle)`, the curve transported by a rotation of `S¹`.
    pub fn rotated(&self, angle: T) -> Result<Self> {
        let form = match &self.form {
            CurveForm::Fourier(coords) => CurveForm::Fourier(
                coords
                    .iter()
                    .map(|cs| {
                        cs.iter()
                            .enumerate()
                            .map(|(k, ab)| {
                                let (s, c) = (T::from_usize_lossy(k) * angle).sin_cos();
                                // a cos k(t−θ) + b sin k(t−θ)
                                [ab[0] * c - ab[1] * s, ab[0] * s + ab[1] * c]
                            })
                            .collect()
                    })
                    .collect(),
            ),
            CurveForm::Samples(rows) => CurveForm::Samples(
                rows.iter()
                    .map(|r| {
                        let mut r2 = r.clone();
                        r2[0] = r[0] + angle;
                        r2
                    })
                    .collect(),
            ),
        };
        Self::new(self.target.clone(), form)
    }
}
