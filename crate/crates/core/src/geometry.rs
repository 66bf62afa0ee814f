//! Closed-form Poincaré-ball geometry (curvature −1).
//!
//! Points live in the open unit ball `B^n = {x : |x| < 1}` with metric
//! `g_B(x) = 4 (1 − |x|²)⁻² g_R`. Ideal points are unit vectors on the
//! boundary sphere. The Busemann function is anchored at the origin, so
//! `b_ω(0) = 0` for every ideal point `ω`, and its negation is the
//! *Poincaré inner product* `⟨ω, x⟩_B = log((1 − |x|²) / |ω − x|²)`.
//!
//! A horosphere `π(μ, ω, b) = {z : μ⟨ω, z⟩_B − b = 0}` is the level set
//! `⟨ω, ·⟩_B = λ` with `λ = b / μ`; in Euclidean terms it is the sphere
//! through `tanh(λ/2)·ω` that is internally tangent to the boundary at `ω`.

use thiserror::Error;

use crate::linalg::{dist_sq, dot, norm, norm_sq, scale};

/// Points whose Euclidean norm is at least `1 − EPS_BOUNDARY` are rejected.
pub const EPS_BOUNDARY: f64 = 1e-9;

/// Norm used when a computed point has to be pulled back inside the ball.
const CLAMP_RADIUS: f64 = 1.0 - 2.0 * EPS_BOUNDARY;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("point has norm {norm}, outside the admissible ball (limit 1 - {EPS_BOUNDARY:e})")]
    OutsideBall { norm: f64 },
    #[error("coordinates must be finite")]
    NonFinite,
    #[error("vectors must have at least one coordinate")]
    Empty,
    #[error("ideal point direction has zero length")]
    ZeroDirection,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("horosphere scale mu must be positive and finite, got {0}")]
    InvalidScale(f64),
    #[error("horosphere offset b must be finite, got {0}")]
    InvalidOffset(f64),
}

fn check_coords(coords: &[f64]) -> Result<(), GeometryError> {
    if coords.is_empty() {
        return Err(GeometryError::Empty);
    }
    if coords.iter().any(|c| !c.is_finite()) {
        return Err(GeometryError::NonFinite);
    }
    Ok(())
}

/// A point strictly inside the unit ball.
#[derive(Debug, Clone, PartialEq)]
pub struct PoincarePoint {
    coords: Vec<f64>,
    norm_sq: f64,
}

impl PoincarePoint {
    pub fn new(coords: Vec<f64>) -> Result<Self, GeometryError> {
        check_coords(&coords)?;
        let norm_sq = norm_sq(&coords);
        let n = norm_sq.sqrt();
        if n >= 1.0 - EPS_BOUNDARY {
            return Err(GeometryError::OutsideBall { norm: n });
        }
        Ok(Self { coords, norm_sq })
    }

    pub fn origin(dim: usize) -> Self {
        Self {
            coords: vec![0.0; dim],
            norm_sq: 0.0,
        }
    }

    /// Builds a point from coordinates produced by a closed-form map that may
    /// have rounded onto (or past) the admissible radius; such points are
    /// rescaled radially to just inside it.
    pub(crate) fn from_computed(mut coords: Vec<f64>) -> Self {
        let mut n2 = norm_sq(&coords);
        if n2.sqrt() >= 1.0 - EPS_BOUNDARY {
            let s = CLAMP_RADIUS / n2.sqrt();
            coords.iter_mut().for_each(|c| *c *= s);
            n2 = norm_sq(&coords);
        }
        Self {
            coords,
            norm_sq: n2,
        }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn norm_sq(&self) -> f64 {
        self.norm_sq
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq.sqrt()
    }

    /// Conformal factor `λ_x = 2 / (1 − |x|²)`; the metric at `x` is `λ_x² g_R`.
    pub fn conformal_factor(&self) -> f64 {
        2.0 / (1.0 - self.norm_sq)
    }
}

/// A point on the boundary sphere, stored as a unit vector.
#[derive(Debug, Clone, PartialEq)]
pub struct IdealPoint {
    direction: Vec<f64>,
}

impl IdealPoint {
    /// Normalizes `direction`; near-unit inputs from embedding files are
    /// accepted and renormalized.
    pub fn new(direction: Vec<f64>) -> Result<Self, GeometryError> {
        check_coords(&direction)?;
        let n = norm(&direction);
        if n == 0.0 {
            return Err(GeometryError::ZeroDirection);
        }
        Ok(Self {
            direction: scale(&direction, 1.0 / n),
        })
    }

    /// Basis direction `e_axis` in `dim` dimensions.
    pub fn axis(dim: usize, axis: usize) -> Self {
        let mut direction = vec![0.0; dim];
        direction[axis] = 1.0;
        Self { direction }
    }

    pub fn direction(&self) -> &[f64] {
        &self.direction
    }

    pub fn dim(&self) -> usize {
        self.direction.len()
    }
}

/// Horosphere `{z : μ⟨ω, z⟩_B − b = 0}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Horosphere {
    mu: f64,
    omega: IdealPoint,
    b: f64,
}

impl Horosphere {
    pub fn new(mu: f64, omega: IdealPoint, b: f64) -> Result<Self, GeometryError> {
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(GeometryError::InvalidScale(mu));
        }
        if !b.is_finite() {
            return Err(GeometryError::InvalidOffset(b));
        }
        Ok(Self { mu, omega, b })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn omega(&self) -> &IdealPoint {
        &self.omega
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn dim(&self) -> usize {
        self.omega.dim()
    }

    /// Busemann level `λ = b / μ` shared by every point of the horosphere.
    pub fn level(&self) -> f64 {
        self.b / self.mu
    }

    /// Whether the horosphere belongs to `Π⁺` (positive offset, radius < 1/2).
    pub fn is_positive_family(&self) -> bool {
        self.b > 0.0
    }

    /// Euclidean center and radius of the horosphere.
    pub fn euclidean_form(&self) -> (Vec<f64>, f64) {
        horosphere_euclidean_form(self)
    }
}

/// A tangent vector at a ball point, with Euclidean coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    base: PoincarePoint,
    vec: Vec<f64>,
}

impl TangentVector {
    pub fn new(base: PoincarePoint, vec: Vec<f64>) -> Result<Self, GeometryError> {
        if vec.len() != base.dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: base.dim(),
                got: vec.len(),
            });
        }
        if vec.iter().any(|c| !c.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        Ok(Self { base, vec })
    }

    pub fn base(&self) -> &PoincarePoint {
        &self.base
    }

    pub fn vec(&self) -> &[f64] {
        &self.vec
    }

    /// Length under the hyperbolic metric at the base point.
    pub fn norm(&self) -> f64 {
        self.base.conformal_factor() * norm(&self.vec)
    }
}

/// `d_B(x, y) = arccosh(1 + 2|x − y|² / ((1 − |x|²)(1 − |y|²)))`.
///
/// Evaluated as `2·asinh(√δ)`, which is the same quantity without the
/// cancellation `arccosh` suffers near the diagonal.
pub fn geodesic_distance(x: &PoincarePoint, y: &PoincarePoint) -> f64 {
    debug_assert_eq!(x.dim(), y.dim());
    let delta = dist_sq(&x.coords, &y.coords) / ((1.0 - x.norm_sq) * (1.0 - y.norm_sq));
    2.0 * delta.sqrt().asinh()
}

/// Busemann function `b_ω(x) = −log((1 − |x|²) / |ω − x|²)`.
pub fn busemann(omega: &IdealPoint, x: &PoincarePoint) -> f64 {
    -poincare_inner(omega, x)
}

/// Poincaré inner product `⟨ω, x⟩_B = log((1 − |x|²) / |ω − x|²)`.
pub fn poincare_inner(omega: &IdealPoint, x: &PoincarePoint) -> f64 {
    poincare_inner_unit(&omega.direction, x)
}

/// [`poincare_inner`] with the ideal point given as a unit vector.
pub(crate) fn poincare_inner_unit(omega: &[f64], x: &PoincarePoint) -> f64 {
    debug_assert_eq!(omega.len(), x.dim());
    (-x.norm_sq).ln_1p() - dist_sq(omega, &x.coords).ln()
}

/// Gradient of `⟨ω, x⟩_B` with respect to `ω` treated as a free vector in
/// `R^n`: `−2(ω − x) / |ω − x|²`.
pub fn poincare_inner_grad_omega(omega: &[f64], x: &PoincarePoint) -> Vec<f64> {
    let d2 = dist_sq(omega, &x.coords);
    omega
        .iter()
        .zip(&x.coords)
        .map(|(w, xi)| -2.0 * (w - xi) / d2)
        .collect()
}

/// Origin-anchored geodesic ray towards `ω`: `γ_ω(t) = tanh(t/2)·ω`.
///
/// Large `t` saturates at the admissible radius.
pub fn geodesic_ray(omega: &IdealPoint, t: f64) -> PoincarePoint {
    PoincarePoint::from_computed(scale(&omega.direction, (0.5 * t).tanh()))
}

/// Euclidean center `((1 + p)/2)·ω` and radius `(1 − p)/2`, `p = tanh(λ/2)`.
pub fn horosphere_euclidean_form(h: &Horosphere) -> (Vec<f64>, f64) {
    let p = (0.5 * h.level()).tanh();
    (scale(&h.omega.direction, 0.5 * (1.0 + p)), 0.5 * (1.0 - p))
}

/// Maps `x` along its own horosphere at `ω` to the ray point `tanh(λ_x/2)·ω`.
pub fn horospherical_projection(omega: &IdealPoint, x: &PoincarePoint) -> PoincarePoint {
    let level = poincare_inner(omega, x);
    PoincarePoint::from_computed(scale(&omega.direction, (0.5 * level).tanh()))
}

/// Hyperbolic distance from `x` to the horosphere: `|μ⟨ω, x⟩_B − b| / μ`.
pub fn point_to_horosphere_distance(x: &PoincarePoint, h: &Horosphere) -> f64 {
    (h.mu * poincare_inner(&h.omega, x) - h.b).abs() / h.mu
}

/// Möbius addition `x ⊕ y` in the unit ball.
pub fn mobius_add(x: &[f64], y: &[f64]) -> Vec<f64> {
    let xy = dot(x, y);
    let x2 = norm_sq(x);
    let y2 = norm_sq(y);
    let cx = 1.0 + 2.0 * xy + y2;
    let cy = 1.0 - x2;
    let denom = 1.0 + 2.0 * xy + x2 * y2;
    x.iter()
        .zip(y)
        .map(|(a, b)| (cx * a + cy * b) / denom)
        .collect()
}

/// Exponential map `exp_x(v) = x ⊕ tanh(λ_x|v|/2)·v/|v|`.
pub fn exp_map(v: &TangentVector) -> PoincarePoint {
    let n = norm(&v.vec);
    if n == 0.0 {
        return v.base.clone();
    }
    let lambda = v.base.conformal_factor();
    let step = scale(&v.vec, (0.5 * lambda * n).tanh() / n);
    PoincarePoint::from_computed(mobius_add(&v.base.coords, &step))
}

/// Logarithm map, the inverse of [`exp_map`] at `x`.
pub fn log_map(x: &PoincarePoint, y: &PoincarePoint) -> TangentVector {
    let neg_x = scale(&x.coords, -1.0);
    let w = mobius_add(&neg_x, &y.coords);
    let n = norm(&w);
    let vec = if n == 0.0 {
        vec![0.0; x.dim()]
    } else {
        let lambda = x.conformal_factor();
        scale(&w, 2.0 / lambda * n.min(1.0 - f64::EPSILON).atanh() / n)
    };
    TangentVector {
        base: x.clone(),
        vec,
    }
}

/// Point at hyperbolic distance `t` from `start` along the geodesic leaving
/// it in Euclidean direction `dir`.
pub fn geodesic_from(start: &PoincarePoint, dir: &[f64], t: f64) -> PoincarePoint {
    let n = norm(dir);
    if n == 0.0 || t == 0.0 {
        return start.clone();
    }
    let v = scale(dir, t / (n * start.conformal_factor()));
    exp_map(&TangentVector {
        base: start.clone(),
        vec: v,
    })
}
