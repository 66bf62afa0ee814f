use crate::data::BinaryDataset;
use crate::geometry::poincare_inner_unit;
use crate::linalg::dist_sq;
use crate::manifold::{AmbientGradient, ProductPoint};

/// `Σ φ(offset − yᵢ(μ⟨ω,xᵢ⟩_B − b))` and its ambient gradient, where `phi`
/// returns the value and derivative of the per-sample penalty.
fn penalty_sum(
    p: &ProductPoint,
    data: &BinaryDataset,
    offset: f64,
    phi: impl Fn(f64) -> (f64, f64),
) -> (f64, AmbientGradient) {
    let mu = p.mu.value();
    let b = p.b.value();
    let omega = p.omega.as_slice();
    let mut total = 0.0;
    let mut grad = AmbientGradient::zeros(p.dim());
    for (x, &y) in data.points().iter().zip(data.y()) {
        let s = poincare_inner_unit(omega, x);
        let (value, slope) = phi(offset - y * (mu * s - b));
        total += value;
        if slope == 0.0 {
            continue;
        }
        grad.mu -= slope * y * s;
        grad.b += slope * y;
        // ∂s/∂ω = −2(ω − x)/|ω − x|²
        let k = 2.0 * slope * y * mu / dist_sq(omega, x.coords());
        for ((g, w), xi) in grad.omega.iter_mut().zip(omega).zip(x.coords()) {
            *g += k * (w - xi);
        }
    }
    (total, grad)
}

fn hinge(u: f64) -> (f64, f64) {
    if u > 0.0 {
        (u, 1.0)
    } else {
        (0.0, 0.0)
    }
}

/// Hinge with its kink replaced by a parabola of width `tau`; below the
/// exact hinge by at most `tau / 2`.
fn smoothed_hinge(u: f64, tau: f64) -> (f64, f64) {
    if u <= 0.0 {
        (0.0, 0.0)
    } else if u < tau {
        (0.5 * u * u / tau, u / tau)
    } else {
        (u - 0.5 * tau, 1.0)
    }
}

/// Mean perceptron loss `(1/|S|) Σ max(0, −yᵢ(μ⟨ω,xᵢ⟩_B − b))`. The
/// subgradient at a kink is taken to be zero.
pub fn perceptron_loss(p: &ProductPoint, data: &BinaryDataset) -> (f64, AmbientGradient) {
    let (total, mut grad) = penalty_sum(p, data, 0.0, hinge);
    let inv = 1.0 / data.len() as f64;
    grad.mu *= inv;
    grad.b *= inv;
    grad.omega.iter_mut().for_each(|g| *g *= inv);
    (total * inv, grad)
}

/// Soft-margin objective `½μ² + C Σ max(0, 1 − yᵢ(μ⟨ω,xᵢ⟩_B − b))`.
pub fn horosvm_loss(p: &ProductPoint, data: &BinaryDataset, c: f64) -> (f64, AmbientGradient) {
    scaled_with_regularizer(p, c, penalty_sum(p, data, 1.0, hinge))
}

/// [`horosvm_loss`] with every hinge smoothed over a width `tau`.
pub fn smoothed_horosvm_loss(p: &ProductPoint, data: &BinaryDataset, c: f64, tau: f64) -> (f64, AmbientGradient) {
    scaled_with_regularizer(p, c, penalty_sum(p, data, 1.0, |u| smoothed_hinge(u, tau)))
}

fn scaled_with_regularizer(p: &ProductPoint, c: f64, (total, mut grad): (f64, AmbientGradient)) -> (f64, AmbientGradient) {
    let mu = p.mu.value();
    grad.mu = c * grad.mu + mu;
    grad.b *= c;
    grad.omega.iter_mut().for_each(|g| *g *= c);
    (0.5 * mu * mu + c * total, grad)
}

/// `min_i yᵢ(μ⟨ω,xᵢ⟩_B − b)/μ`: the smallest signed hyperbolic distance to
/// the boundary, negative iff a sample is misclassified.
pub fn margin(p: &ProductPoint, data: &BinaryDataset) -> f64 {
    let mu = p.mu.value();
    let b = p.b.value();
    let omega = p.omega.as_slice();
    data.points()
        .iter()
        .zip(data.y())
        .map(|(x, &y)| y * (mu * poincare_inner_unit(omega, x) - b) / mu)
        .fold(f64::INFINITY, f64::min)
}
