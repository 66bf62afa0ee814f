use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::train::LossKind;
use super::ModelError;
use crate::geometry::{poincare_inner_unit, PoincarePoint};
use crate::linalg::{dot, normalized};
use crate::manifold::{geodesic_between_sphere_points, SpherePoint};

/// Settings for [`convexity_probe`]. The loss is the single-sample loss of
/// `kind` as a function of `ω`, with `μ` and `b` held fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeConfig {
    pub kind: LossKind,
    pub mu: f64,
    pub b: f64,
    pub c: f64,
    pub n_geodesics: usize,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            kind: LossKind::Perceptron,
            mu: 1.0,
            b: 0.0,
            c: 1.0,
            n_geodesics: 1000,
            tolerance: 1e-9,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexityReport {
    pub segments_a: usize,
    pub segments_b: usize,
    /// Segments in `A = {ν : y·xᵀν > 0}` whose midpoint lies above the chord.
    pub convexity_violations: usize,
    /// Segments in `B = {ν : y·xᵀν < 0}` whose midpoint lies below the chord.
    pub concavity_violations: usize,
    /// Largest amount by which a midpoint exceeded the chord in A.
    pub worst_convexity_excess: f64,
    /// Largest amount by which a midpoint fell below the chord in B.
    pub worst_concavity_excess: f64,
}

impl ConvexityReport {
    pub fn violations(&self) -> usize {
        self.convexity_violations + self.concavity_violations
    }
}

fn sample_loss(omega: &[f64], x: &PoincarePoint, y: f64, cfg: &ProbeConfig) -> f64 {
    let f = cfg.mu * poincare_inner_unit(omega, x) - cfg.b;
    match cfg.kind {
        LossKind::Perceptron => (-y * f).max(0.0),
        LossKind::HoroSvm => 0.5 * cfg.mu * cfg.mu + cfg.c * (1.0 - y * f).max(0.0),
    }
}

fn random_unit(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
        if let Some(u) = normalized(&v) {
            return u;
        }
    }
}

/// Uniform point of the open hemisphere `{ν : side·aᵀν > 0}`.
fn random_in_hemisphere(rng: &mut ChaCha8Rng, axis: &[f64], side: f64) -> SpherePoint {
    loop {
        let mut u = random_unit(rng, axis.len());
        let d = side * dot(&u, axis);
        if d == 0.0 {
            continue;
        }
        if d < 0.0 {
            u.iter_mut().for_each(|v| *v = -*v);
        }
        return SpherePoint::new(u).expect("unit vector");
    }
}

/// Midpoint test of the sample loss along `n_geodesics` random great-circle
/// segments with both ends in hemisphere A, and as many in hemisphere B.
/// Convexity is checked on A and concavity on B.
pub fn convexity_probe(x: &PoincarePoint, y: f64, cfg: &ProbeConfig) -> Result<ConvexityReport, ModelError> {
    if x.norm_sq() == 0.0 {
        return Err(ModelError::DegeneratePoint);
    }
    if y != 1.0 && y != -1.0 {
        return Err(ModelError::InvalidConfig(format!("label must be ±1, got {y}")));
    }
    if !(cfg.mu > 0.0 && cfg.b.is_finite() && cfg.c > 0.0) {
        return Err(ModelError::InvalidConfig("probe needs mu > 0, finite b, c > 0".into()));
    }
    let axis = normalized(x.coords()).expect("nonzero point");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut report = ConvexityReport {
        segments_a: 0,
        segments_b: 0,
        convexity_violations: 0,
        concavity_violations: 0,
        worst_convexity_excess: 0.0,
        worst_concavity_excess: 0.0,
    };
    for (side, concave) in [(y, false), (-y, true)] {
        let mut done = 0;
        while done < cfg.n_geodesics {
            let a = random_in_hemisphere(&mut rng, &axis, side);
            let b = random_in_hemisphere(&mut rng, &axis, side);
            let Ok(mid) = geodesic_between_sphere_points(&a, &b, 0.5) else {
                continue;
            };
            done += 1;
            let la = sample_loss(a.as_slice(), x, y, cfg);
            let lb = sample_loss(b.as_slice(), x, y, cfg);
            let lm = sample_loss(mid.as_slice(), x, y, cfg);
            let chord = 0.5 * (la + lb);
            if concave {
                report.segments_b += 1;
                let excess = chord - lm;
                report.worst_concavity_excess = report.worst_concavity_excess.max(excess);
                if excess > cfg.tolerance {
                    report.concavity_violations += 1;
                }
            } else {
                report.segments_a += 1;
                let excess = lm - chord;
                report.worst_convexity_excess = report.worst_convexity_excess.max(excess);
                if excess > cfg.tolerance {
                    report.convexity_violations += 1;
                }
            }
        }
    }
    Ok(report)
}
