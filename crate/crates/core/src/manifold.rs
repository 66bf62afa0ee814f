//! Riemannian structure of the classifier parameter space `R⁺ × S^{n−1} × R⁺`.
//!
//! The two positive factors (`μ` and `b`) are stored in log-coordinates,
//! so positivity is structural and the retraction `value·exp(step·d)` is
//! exact. The sphere factor uses the embedded metric, projection onto the
//! tangent space, retraction by normalization, and vector transport by
//! projection.

use thiserror::Error;

use crate::linalg::{axpy, dot, norm, normalized, scale};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ManifoldError {
    #[error("sphere points are antipodal; the connecting geodesic is not unique")]
    Antipodal,
    #[error("value must be positive and finite, got {0}")]
    NonPositive(f64),
    #[error("direction has zero length")]
    ZeroDirection,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Unit vector on `S^{n−1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpherePoint {
    u: Vec<f64>,
}

impl SpherePoint {
    pub fn new(v: Vec<f64>) -> Result<Self, ManifoldError> {
        if v.iter().any(|c| !c.is_finite()) {
            return Err(ManifoldError::ZeroDirection);
        }
        normalized(&v)
            .map(|u| Self { u })
            .ok_or(ManifoldError::ZeroDirection)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.u
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.u
    }

    pub fn dim(&self) -> usize {
        self.u.len()
    }

    fn project(&self, g: &[f64]) -> Vec<f64> {
        axpy(g, -dot(&self.u, g), &self.u)
    }
}

/// Positive scalar held as its logarithm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositiveScalar {
    log: f64,
}

impl PositiveScalar {
    pub fn new(value: f64) -> Result<Self, ManifoldError> {
        if value > 0.0 && value.is_finite() {
            Ok(Self { log: value.ln() })
        } else {
            Err(ManifoldError::NonPositive(value))
        }
    }

    pub fn from_log(log: f64) -> Self {
        Self { log }
    }

    pub fn value(&self) -> f64 {
        self.log.exp()
    }

    pub fn log(&self) -> f64 {
        self.log
    }
}

/// A point `(μ, ω, b)` of the product manifold.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductPoint {
    pub mu: PositiveScalar,
    pub omega: SpherePoint,
    pub b: PositiveScalar,
}

impl ProductPoint {
    pub fn new(mu: f64, omega: Vec<f64>, b: f64) -> Result<Self, ManifoldError> {
        Ok(Self {
            mu: PositiveScalar::new(mu)?,
            omega: SpherePoint::new(omega)?,
            b: PositiveScalar::new(b)?,
        })
    }

    pub fn dim(&self) -> usize {
        self.omega.dim()
    }
}

/// Euclidean gradient of an objective with respect to `(μ, ω, b)`, with
/// `ω` treated as a free vector of `R^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmbientGradient {
    pub mu: f64,
    pub omega: Vec<f64>,
    pub b: f64,
}

impl AmbientGradient {
    pub fn zeros(dim: usize) -> Self {
        Self {
            mu: 0.0,
            omega: vec![0.0; dim],
            b: 0.0,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.mu.is_finite() && self.b.is_finite() && self.omega.iter().all(|v| v.is_finite())
    }
}

/// Tangent vector at a product point; `d_mu` and `d_b` are log-coordinate
/// components and `d_omega` is orthogonal to `ω`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductTangent {
    pub d_mu: f64,
    pub d_omega: Vec<f64>,
    pub d_b: f64,
}

impl ProductTangent {
    pub fn zeros(dim: usize) -> Self {
        Self {
            d_mu: 0.0,
            d_omega: vec![0.0; dim],
            d_b: 0.0,
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            d_mu: s * self.d_mu,
            d_omega: scale(&self.d_omega, s),
            d_b: s * self.d_b,
        }
    }

    /// `self + s * other`
    pub fn add_scaled(&self, s: f64, other: &Self) -> Self {
        Self {
            d_mu: self.d_mu + s * other.d_mu,
            d_omega: axpy(&self.d_omega, s, &other.d_omega),
            d_b: self.d_b + s * other.d_b,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.d_mu.is_finite() && self.d_b.is_finite() && self.d_omega.iter().all(|v| v.is_finite())
    }
}

/// Riemannian gradient from an ambient one: the sphere part is projected
/// onto `T_ω S`, the positive parts pick up the chain-rule factor `value`.
pub fn project_tangent(p: &ProductPoint, g: &AmbientGradient) -> ProductTangent {
    debug_assert_eq!(p.dim(), g.omega.len());
    ProductTangent {
        d_mu: p.mu.value() * g.mu,
        d_omega: p.omega.project(&g.omega),
        d_b: p.b.value() * g.b,
    }
}

/// Re-projects a tangent onto the tangent space at `p` (idempotent).
pub fn reproject(p: &ProductPoint, v: &ProductTangent) -> ProductTangent {
    ProductTangent {
        d_mu: v.d_mu,
        d_omega: p.omega.project(&v.d_omega),
        d_b: v.d_b,
    }
}

pub fn retract(p: &ProductPoint, v: &ProductTangent, step: f64) -> ProductPoint {
    if step == 0.0 {
        return p.clone();
    }
    let moved = axpy(p.omega.as_slice(), step, &v.d_omega);
    // |ω + s·v|² = 1 + s²|v|² ≥ 1 for tangent v, so normalization is safe.
    let omega = normalized(&moved).map_or_else(|| p.omega.clone(), |u| SpherePoint { u });
    ProductPoint {
        mu: PositiveScalar::from_log(p.mu.log + step * v.d_mu),
        omega,
        b: PositiveScalar::from_log(p.b.log + step * v.d_b),
    }
}

pub fn inner(_p: &ProductPoint, v1: &ProductTangent, v2: &ProductTangent) -> f64 {
    v1.d_mu * v2.d_mu + dot(&v1.d_omega, &v2.d_omega) + v1.d_b * v2.d_b
}

pub fn tangent_norm(p: &ProductPoint, v: &ProductTangent) -> f64 {
    inner(p, v, v).sqrt()
}

/// Vector transport by projection onto the tangent space at `p_to`.
pub fn transport(_p_from: &ProductPoint, p_to: &ProductPoint, v: &ProductTangent) -> ProductTangent {
    reproject(p_to, v)
}

/// Great-circle interpolation between two non-antipodal sphere points.
pub fn geodesic_between_sphere_points(
    u1: &SpherePoint,
    u2: &SpherePoint,
    t: f64,
) -> Result<SpherePoint, ManifoldError> {
    if u1.dim() != u2.dim() {
        return Err(ManifoldError::DimensionMismatch {
            expected: u1.dim(),
            got: u2.dim(),
        });
    }
    let theta = sphere_angle(u1, u2);
    if (std::f64::consts::PI - theta).abs() <= 1e-8 {
        return Err(ManifoldError::Antipodal);
    }
    if t == 0.0 || theta == 0.0 {
        return Ok(u1.clone());
    }
    if t == 1.0 {
        return Ok(u2.clone());
    }
    let s = theta.sin();
    let a = ((1.0 - t) * theta).sin() / s;
    let c = (t * theta).sin() / s;
    let v: Vec<f64> = u1.u.iter().zip(&u2.u).map(|(x, y)| a * x + c * y).collect();
    // Renormalize away the rounding of the two sine weights.
    Ok(SpherePoint {
        u: normalized(&v).unwrap_or(v),
    })
}

/// Angle between two unit vectors, computed with `atan2` for accuracy at
/// both small and near-π angles.
pub fn sphere_angle(u1: &SpherePoint, u2: &SpherePoint) -> f64 {
    let c = dot(&u1.u, &u2.u);
    let diff = axpy(&u2.u, -c, &u1.u);
    norm(&diff).atan2(c)
}
