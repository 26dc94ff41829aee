//! Optimal transport on the circle.

mod circle;
mod simplex;

pub use circle::{
    balanced_cut_at, half_circle_cut_defect, w1_cdf_shift, w1_circle, BalancedCut,
    CircleTransport, DefectProfile, DualPotential, PartitionArc, Side, CUT_TOL,
};
pub use simplex::{lp_oracle, solve_transport, TransportPlan, LP_MAX_ATOMS};

use crate::error::Result;
use crate::measure::CircularMeasure;
use crate::real::{circle_distance, Real};

/// `W1(δ_x, μ) = ∫ d(x, y) dμ(y)`, by quadrature.
pub fn dirac_distance_formula<T: Real>(x: T, mu: &CircularMeasure<T>, tol: T) -> Result<T> {
    mu.integrate_against_with_kinks(|y| circle_distance(x, y), &[x, x + T::PI()], tol)
}
