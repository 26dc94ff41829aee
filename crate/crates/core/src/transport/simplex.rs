//! Transportation simplex for discrete optimal transport.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::CircularMeasure;
use crate::real::{circle_distance, Real};

/// Largest number of atoms per marginal accepted by [`lp_oracle`].
pub const LP_MAX_ATOMS: usize = 256;

const MAX_PIVOTS: usize = 200_000;

/// An optimal coupling in sparse form.
#[derive(Debug, Clone, Serialize)]
#[serde(bound = "T: Real")]
pub struct TransportPlan<T> {
    pub rows: usize,
    pub cols: usize,
    /// `(source, target, mass)` for every nonzero entry.
    pub flows: Vec<(usize, usize, T)>,
    pub cost: T,
}

impl<T: Real> TransportPlan<T> {
    pub fn row_sums(&self) -> Vec<T> {
        let mut out = vec![T::zero(); self.rows];
        for &(i, _, m) in &self.flows {
            out[i] += m;
        }
        out
    }

    pub fn col_sums(&self) -> Vec<T> {
        let mut out = vec![T::zero(); self.cols];
        for &(_, j, m) in &self.flows {
            out[j] += m;
        }
        out
    }

    /// Largest deviation of either marginal from the prescribed weights.
    pub fn marginal_defect(&self, supply: &[T], demand: &[T]) -> T {
        let r = self.row_sums();
        let c = self.col_sums();
        let a = r.iter().zip(supply).map(|(x, y)| (*x - *y).abs());
        let b = c.iter().zip(demand).map(|(x, y)| (*x - *y).abs());
        a.chain(b).fold(T::zero(), T::max)
    }
}

/// Solves `min Σ c(i, j) π_ij` over couplings of `supply` and `demand`.
///
/// Both weight vectors must be nonnegative with equal totals.
pub fn solve_transport<T: Real, C: Fn(usize, usize) -> T>(
    supply: &[T],
    demand: &[T],
    cost: C,
) -> Result<TransportPlan<T>> {
    let (m, n) = (supply.len(), demand.len());
    if m == 0 || n == 0 {
        return Err(Error::InvalidMeasure("empty marginal".into()));
    }
    if supply.iter().chain(demand).any(|w| !w.is_finite() || *w < T::zero()) {
        return Err(Error::InvalidMeasure("negative or non-finite weight".into()));
    }
    let total_s: T = supply.iter().copied().sum();
    let total_d: T = demand.iter().copied().sum();
    if (total_s - total_d).abs() > T::mass_tol() * (T::one() + total_s) {
        return Err(Error::InvalidMeasure(format!(
            "marginal totals differ: {total_s} vs {total_d}"
        )));
    }
    let c: Vec<T> = (0..m * n).map(|k| cost(k / n, k % n)).collect();
    let cmax = c.iter().fold(T::zero(), |a, b| a.max(b.abs()));
    let tol = T::epsilon() * T::lit(64.0) * (T::one() + cmax);

    // northwest corner start
    let mut x = vec![T::zero(); m * n];
    let mut basic = vec![false; m * n];
    let mut rem_s = supply.to_vec();
    let mut rem_d = demand.to_vec();
    let (mut i, mut j) = (0, 0);
    loop {
        let q = rem_s[i].min(rem_d[j]);
        x[i * n + j] = q;
        basic[i * n + j] = true;
        rem_s[i] -= q;
        rem_d[j] -= q;
        if i == m - 1 && j == n - 1 {
            break;
        }
        if i == m - 1 || (j < n - 1 && rem_d[j] <= rem_s[i]) {
            j += 1;
        } else {
            i += 1;
        }
    }
    // leftover imbalance from rounding goes to the last cell
    x[m * n - 1] += rem_s[m - 1].min(rem_d[n - 1]).max(T::zero());

    let mut u = vec![T::zero(); m];
    let mut v = vec![T::zero(); n];
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); m + n];
    let mut parent = vec![usize::MAX; m + n];
    let mut queue = VecDeque::new();

    for _ in 0..MAX_PIVOTS {
        // tree adjacency: nodes 0..m are rows, m..m+n are columns
        for a in adj.iter_mut() {
            a.clear();
        }
        for (k, b) in basic.iter().enumerate() {
            if *b {
                let (r, s) = (k / n, k % n);
                adj[r].push(m + s);
                adj[m + s].push(r);
            }
        }
        // potentials u_i + v_j = c_ij on the basis
        let mut seen = vec![false; m + n];
        seen[0] = true;
        u[0] = T::zero();
        queue.clear();
        queue.push_back(0);
        while let Some(node) = queue.pop_front() {
            for &nb in &adj[node] {
                if seen[nb] {
                    continue;
                }
                seen[nb] = true;
                if node < m {
                    v[nb - m] = c[node * n + nb - m] - u[node];
                } else {
                    u[nb] = c[nb * n + node - m] - v[node - m];
                }
                queue.push_back(nb);
            }
        }

        // Dantzig pricing
        let mut best = -tol;
        let mut enter = None;
        for r in 0..m {
            for s in 0..n {
                let k = r * n + s;
                if basic[k] {
                    continue;
                }
                let red = c[k] - u[r] - v[s];
                if red < best {
                    best = red;
                    enter = Some((r, s));
                }
            }
        }
        let Some((er, es)) = enter else {
            let flows = (0..m * n)
                .filter(|&k| x[k] > T::zero())
                .map(|k| (k / n, k % n, x[k]))
                .collect::<Vec<_>>();
            let cost = flows.iter().map(|&(r, s, q)| q * c[r * n + s]).sum();
            return Ok(TransportPlan {
                rows: m,
                cols: n,
                flows,
                cost,
            });
        };

        // tree path from column es back to row er
        parent.iter_mut().for_each(|p| *p = usize::MAX);
        let start = m + es;
        parent[start] = start;
        queue.clear();
        queue.push_back(start);
        while let Some(node) = queue.pop_front() {
            if node == er {
                break;
            }
            for &nb in &adj[node] {
                if parent[nb] == usize::MAX {
                    parent[nb] = node;
                    queue.push_back(nb);
                }
            }
        }
        // walk er -> es, collecting cycle cells; alternate signs from the entering cell
        let mut cells = Vec::new();
        let mut node = er;
        while node != start {
            let p = parent[node];
            let cell = if node < m { node * n + (p - m) } else { p * n + (node - m) };
            cells.push(cell);
            node = p;
        }
        // cells[0] touches row er: it is a "minus" cell; signs alternate
        let mut theta = T::infinity();
        let mut leave = usize::MAX;
        for (idx, &cell) in cells.iter().enumerate() {
            if idx % 2 == 0 && x[cell] < theta {
                theta = x[cell];
                leave = cell;
            }
        }
        let theta = theta.max(T::zero());
        for (idx, &cell) in cells.iter().enumerate() {
            if idx % 2 == 0 {
                x[cell] = (x[cell] - theta).max(T::zero());
            } else {
                x[cell] += theta;
            }
        }
        let ek = er * n + es;
        x[ek] = theta;
        basic[ek] = true;
        basic[leave] = false;
        x[leave] = T::zero();
    }
    Err(Error::SolverNonConvergence {
        iterations: MAX_PIVOTS,
    })
}

/// Exact Wasserstein-1 distance between purely atomic circle measures, by
/// linear programming with geodesic ground cost.
pub fn lp_oracle<T: Real>(
    mu: &CircularMeasure<T>,
    nu: &CircularMeasure<T>,
) -> Result<(T, TransportPlan<T>)> {
    for (name, m) in [("mu", mu), ("nu", nu)] {
        if !m.is_atomic() {
            return Err(Error::InvalidMeasure(format!("{name} has a density part")));
        }
        if m.atoms().len() > LP_MAX_ATOMS {
            return Err(Error::TooLarge(format!(
                "{name} has {} atoms; the limit is {LP_MAX_ATOMS}",
                m.atoms().len()
            )));
        }
    }
    let (a, b) = (mu.atoms(), nu.atoms());
    let supply: Vec<T> = a.iter().map(|x| x.mass).collect();
    let demand: Vec<T> = b.iter().map(|x| x.mass).collect();
    let plan = solve_transport(&supply, &demand, |i, j| circle_distance(a[i].pos, b[j].pos))?;
    Ok((plan.cost, plan))
}
