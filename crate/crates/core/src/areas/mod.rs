//! Jacobians of planar norms, metric differentials and area functionals.

mod area;
mod differential;
mod ellipse;
mod jacobian;
pub mod norm;
mod random;

pub use area::{
    area, area_normed, area_with, filling_area_bound, AreaConfig, AreaReport, Domain, FillingReport,
    DEFAULT_QUAD, DEFAULT_SLACK, REPARAM_SAMPLES,
};
pub use differential::{
    hemisphere_chart, linearized_differential, metric_differential, AffineMap, ChartMap,
    DifferentialMethod, ExtensionChart, FnMap, HemisphereIdentity, MetricDifferential,
    NormedChartMap, DEFAULT_DIRECTIONS, DEFAULT_STEP, SUBADDITIVITY_TOL,
};
pub use ellipse::{john_ellipse, khachiyan_centered, min_enclosing_centered, ELLIPSE_TOL};
pub use jacobian::{
    jacobian, jacobian_busemann, jacobian_holmes_thompson, jacobian_inscribed_riemannian, jacobians,
    JacobianKind,
};
pub use norm::{PlanarNorm, SymmetricPolygon};
pub use random::{jacobian_ratio_sweep, random_symmetric_polygon, RatioSample, RatioSweep};
