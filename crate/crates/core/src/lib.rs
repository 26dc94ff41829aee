//! Optimal transport on the circle, the isometric embedding of the
//! hemisphere into `P₁(S¹)`, Lipschitz extension of circle curves, and area
//! functionals for checking the `1/2π` isoperimetric inequality.

pub mod areas;
pub mod embedding;
pub mod error;
pub mod extension;
pub mod measure;
pub mod quadrature;
pub mod real;
pub mod sphere;
pub mod transport;

pub use error::{Error, Result};
pub use real::Real;

pub type SpherePointF64 = sphere::SpherePoint<f64>;
pub type SpherePointF32 = sphere::SpherePoint<f32>;
pub type CircularMeasureF64 = measure::CircularMeasure<f64>;
pub type CircularMeasureF32 = measure::CircularMeasure<f32>;
pub type EmbeddedPointF64 = embedding::EmbeddedPoint<f64>;
pub type PlanarNormF64 = areas::PlanarNorm<f64>;
pub type PlanarNormF32 = areas::PlanarNorm<f32>;
pub type LipschitzCurveF64 = extension::LipschitzCurve<f64>;
pub type HemisphereMapF64 = extension::HemisphereMap<f64>;
pub type NormedTargetF64 = extension::NormedTarget<f64>;
