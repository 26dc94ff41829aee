use thiserror::Error;

/// Errors raised by the numerical routines.
///
/// Scalars are carried as `f64` so the error type does not depend on the
/// precision a routine was instantiated with.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid point: {0}")]
    InvalidPoint(String),

    /// The closed-form boundary-distance derivatives are singular: the point
    /// lies on (or within `1e-9` in `k_P` of) the boundary circle.
    #[error("boundary degeneracy: k_P = {k} is too close to 1; use the Dirac branch")]
    BoundaryDegeneracy { k: f64 },

    #[error("angle γ = π/2 is excluded (cot γ vanishes)")]
    RightAngle,

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("measure is not antipodally invariant (defect {defect:e} > {tol:e})")]
    NotAntipodallyInvariant { defect: f64, tol: f64 },

    #[error("quadrature did not converge: achieved {achieved:e}, requested {requested:e}")]
    QuadratureNonConvergence { achieved: f64, requested: f64 },

    #[error("transport solver did not converge after {iterations} pivots")]
    SolverNonConvergence { iterations: usize },

    #[error("ellipse solver did not converge after {iterations} iterations (gap {gap:e})")]
    EllipseNonConvergence { iterations: usize, gap: f64 },

    #[error("problem too large: {0}")]
    TooLarge(String),

    #[error("invalid norm: {0}")]
    InvalidNorm(String),

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    /// Sampled distance quotients fail subadditivity beyond tolerance.
    #[error("not metrically differentiable at ({x}, {y}): subadditivity defect {defect:e}")]
    NotDifferentiable { x: f64, y: f64, defect: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
