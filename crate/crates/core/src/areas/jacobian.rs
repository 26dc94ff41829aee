//! Area Jacobians of planar norms.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::real::Real;

use super::ellipse::john_ellipse;
use super::norm::{gram_det, PlanarNorm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JacobianKind {
    /// Busemann: `π / area(B)`.
    #[serde(alias = "busemann")]
    B,
    /// Holmes–Thompson: `area(B*) / π`.
    #[serde(alias = "holmes-thompson")]
    Ht,
    /// Inscribed Riemannian: `π / area(John ellipse of B)`.
    #[serde(alias = "inscribed-riemannian")]
    Ir,
}

impl JacobianKind {
    pub const ALL: [JacobianKind; 3] = [JacobianKind::B, JacobianKind::Ht, JacobianKind::Ir];

    pub fn name(self) -> &'static str {
        match self {
            JacobianKind::B => "b",
            JacobianKind::Ht => "ht",
            JacobianKind::Ir => "ir",
        }
    }
}

impl std::str::FromStr for JacobianKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "b" | "busemann" => Ok(JacobianKind::B),
            "ht" | "holmes-thompson" => Ok(JacobianKind::Ht),
            "ir" | "inscribed-riemannian" => Ok(JacobianKind::Ir),
            _ => Err(format!("unknown Jacobian `{s}` (expected b, ht or ir)")),
        }
    }
}

pub fn jacobian_busemann<T: Real>(s: &PlanarNorm<T>) -> T {
    if s.is_degenerate() {
        return T::zero();
    }
    T::PI() / s.ball_area()
}

pub fn jacobian_holmes_thompson<T: Real>(s: &PlanarNorm<T>) -> T {
    if s.is_degenerate() {
        return T::zero();
    }
    s.dual_ball_area() / T::PI()
}

pub fn jacobian_inscribed_riemannian<T: Real>(s: &PlanarNorm<T>) -> Result<T> {
    Ok(match s {
        PlanarNorm::Degenerate => T::zero(),
        PlanarNorm::Euclidean | PlanarNorm::Linf => T::one(),
        PlanarNorm::L1 => T::lit(2.0),
        PlanarNorm::Ellipse(g) => gram_det(g).sqrt(),
        PlanarNorm::Polygon(p) => gram_det(&john_ellipse(p)?).sqrt(),
    })
}

pub fn jacobian<T: Real>(s: &PlanarNorm<T>, kind: JacobianKind) -> Result<T> {
    match kind {
        JacobianKind::B => Ok(jacobian_busemann(s)),
        JacobianKind::Ht => Ok(jacobian_holmes_thompson(s)),
        JacobianKind::Ir => jacobian_inscribed_riemannian(s),
    }
}

/// All three Jacobians, in the order of [`JacobianKind::ALL`].
pub fn jacobians<T: Real>(s: &PlanarNorm<T>) -> Result<[T; 3]> {
    Ok([
        jacobian_busemann(s),
        jacobian_holmes_thompson(s),
        jacobian_inscribed_riemannian(s)?,
    ])
}
