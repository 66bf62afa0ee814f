//! Synthetic data on the Poincaré ball: Riemannian normal samples,
//! Gaussian mixtures, horosphere-separable caps, and label noise.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

use crate::data::{parse_binary_label, DataError, LabeledDataset, NEGATIVE_LABEL, POSITIVE_LABEL};
use crate::geometry::{geodesic_distance, geodesic_from, poincare_inner, IdealPoint, PoincarePoint};
use crate::linalg::{axpy, dot, normalized, scale};

/// Grid size of the tabulated radial inverse CDF.
pub const RADIAL_GRID: usize = 4096;

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("class {class} has {count} members but {required} flips were requested")]
    InsufficientClassMembers {
        class: String,
        count: usize,
        required: usize,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Data(#[from] DataError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RiemannianNormalParams {
    pub mean: PoincarePoint,
    /// Spread in hyperbolic-distance units.
    pub sigma: f64,
}

impl RiemannianNormalParams {
    pub fn new(mean: PoincarePoint, sigma: f64) -> Result<Self, SynthError> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(SynthError::InvalidArgument(format!("sigma must be positive, got {sigma}")));
        }
        Ok(Self { mean, sigma })
    }
}

/// `ln sinh r` without overflow for large `r`.
fn ln_sinh(r: f64) -> f64 {
    if r > 20.0 {
        r - std::f64::consts::LN_2
    } else {
        r.sinh().ln()
    }
}

/// Inverse CDF of `p(r) ∝ exp(−r²/2σ²)·sinh(r)^{n−1}` tabulated on
/// [`RADIAL_GRID`] points over `[0, (n−1)σ² + 10σ]`.
#[derive(Debug, Clone)]
pub struct RadialSampler {
    grid: Vec<f64>,
    cdf: Vec<f64>,
}

impl RadialSampler {
    pub fn new(sigma: f64, dim: usize) -> Self {
        let k = (dim.max(1) - 1) as f64;
        let r_max = k * sigma * sigma + 10.0 * sigma;
        let step = r_max / (RADIAL_GRID - 1) as f64;
        let grid: Vec<f64> = (0..RADIAL_GRID).map(|i| i as f64 * step).collect();
        let log_p: Vec<f64> = grid
            .iter()
            .map(|&r| {
                let radial = if k == 0.0 { 0.0 } else if r == 0.0 { f64::NEG_INFINITY } else { k * ln_sinh(r) };
                -r * r / (2.0 * sigma * sigma) + radial
            })
            .collect();
        let top = log_p.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let p: Vec<f64> = log_p.iter().map(|l| (l - top).exp()).collect();
        let mut cdf = vec![0.0; RADIAL_GRID];
        for i in 1..RADIAL_GRID {
            cdf[i] = cdf[i - 1] + 0.5 * (p[i] + p[i - 1]) * step;
        }
        let total = cdf[RADIAL_GRID - 1];
        cdf.iter_mut().for_each(|c| *c /= total);
        Self { grid, cdf }
    }

    pub fn r_max(&self) -> f64 {
        self.grid[RADIAL_GRID - 1]
    }

    /// Radius at CDF level `u ∈ [0, 1]`, interpolating linearly.
    pub fn quantile(&self, u: f64) -> f64 {
        let i = self.cdf.partition_point(|&c| c < u).clamp(1, RADIAL_GRID - 1);
        let (c0, c1) = (self.cdf[i - 1], self.cdf[i]);
        let w = if c1 > c0 { (u - c0) / (c1 - c0) } else { 0.0 };
        self.grid[i - 1] + w.clamp(0.0, 1.0) * (self.grid[i] - self.grid[i - 1])
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.quantile(rng.random::<f64>())
    }
}

fn random_unit<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
        if let Some(u) = normalized(&v) {
            return u;
        }
    }
}

fn sample_normal_with<R: Rng + ?Sized>(params: &RiemannianNormalParams, count: usize, rng: &mut R) -> Vec<PoincarePoint> {
    let dim = params.mean.dim();
    let radial = RadialSampler::new(params.sigma, dim);
    (0..count)
        .map(|_| {
            let r = radial.sample(rng);
            let u = random_unit(rng, dim);
            geodesic_from(&params.mean, &u, r)
        })
        .collect()
}

/// Samples with density `∝ exp(−d_B(mean, x)²/2σ²)`: a radius from the
/// tabulated radial law, a uniform tangent direction at the mean, then the
/// exponential map.
pub fn sample_riemannian_normal(params: &RiemannianNormalParams, count: usize, seed: u64) -> Vec<PoincarePoint> {
    sample_normal_with(params, count, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Mixture with one Riemannian normal cluster per class around centroids
/// drawn from a Riemannian normal at the origin. With two classes the
/// labels are `1` for the centroid farther from the origin and `-1` for the
/// other; otherwise classes are labeled `0, 1, …` in centroid draw order.
pub fn make_gmm_dataset(
    n_classes: usize,
    per_class: usize,
    centroid_sigma: f64,
    cluster_sigma: f64,
    dim: usize,
    seed: u64,
) -> Result<LabeledDataset, SynthError> {
    if n_classes < 2 {
        return Err(SynthError::InvalidArgument(format!("need at least 2 classes, got {n_classes}")));
    }
    if per_class == 0 || dim == 0 {
        return Err(SynthError::InvalidArgument("per_class and dim must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let origin = PoincarePoint::origin(dim);
    let centroids = sample_normal_with(&RiemannianNormalParams::new(origin.clone(), centroid_sigma)?, n_classes, &mut rng);
    let names: Vec<String> = if n_classes == 2 {
        let far_first = geodesic_distance(&origin, &centroids[0]) >= geodesic_distance(&origin, &centroids[1]);
        let (a, b) = if far_first { (POSITIVE_LABEL, NEGATIVE_LABEL) } else { (NEGATIVE_LABEL, POSITIVE_LABEL) };
        vec![a.into(), b.into()]
    } else {
        (0..n_classes).map(|k| k.to_string()).collect()
    };
    let mut points = Vec::with_capacity(n_classes * per_class);
    let mut labels = Vec::with_capacity(n_classes * per_class);
    for (centroid, name) in centroids.into_iter().zip(&names) {
        let params = RiemannianNormalParams::new(centroid, cluster_sigma)?;
        points.extend(sample_normal_with(&params, per_class, &mut rng));
        labels.extend(std::iter::repeat_n(name.clone(), per_class));
    }
    Ok(LabeledDataset::new(points, labels)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NegativeRegion {
    /// Anywhere on horospheres at levels `[level − gap − spread, level − gap]`.
    #[default]
    Anywhere,
    /// Riemannian normal samples around the origin reflected into
    /// `{x : ωᵀx < 0}` and kept when below `level − gap`.
    OppositeHemisphere,
}

/// Horosphere-separable data around the boundary `⟨ω,x⟩_B = level`.
#[derive(Debug, Clone, PartialEq)]
pub struct CapSpec {
    pub omega: IdealPoint,
    pub level: f64,
    pub gap: f64,
    pub per_class: usize,
    /// Width of the band of Busemann levels each class is drawn from.
    pub spread: f64,
    pub negatives: NegativeRegion,
    /// Samples beyond this Euclidean norm are redrawn.
    pub max_norm: f64,
}

impl CapSpec {
    pub fn new(omega: IdealPoint, level: f64, gap: f64, per_class: usize) -> Self {
        Self {
            omega,
            level,
            gap,
            per_class,
            spread: 2.0,
            negatives: NegativeRegion::Anywhere,
            max_norm: 0.999,
        }
    }
}

/// Point on the horosphere at `level` in direction `u` from its Euclidean
/// center, or `None` when that lies outside the admissible ball.
fn on_horosphere(omega: &[f64], level: f64, u: &[f64], max_norm: f64) -> Option<PoincarePoint> {
    let p = (0.5 * level).tanh();
    let z = axpy(&scale(omega, 0.5 * (1.0 + p)), 0.5 * (1.0 - p), u);
    if dot(&z, &z) >= max_norm * max_norm {
        return None;
    }
    PoincarePoint::new(z).ok()
}

/// Positives at Busemann levels `≥ level + gap` and negatives at levels
/// `≤ level − gap`, labeled `1` and `-1`.
pub fn make_cap_dataset(spec: &CapSpec, seed: u64) -> Result<LabeledDataset, SynthError> {
    if spec.per_class == 0 {
        return Err(SynthError::InvalidArgument("per_class must be positive".into()));
    }
    if !(spec.gap > 0.0 && spec.spread > 0.0 && spec.level.is_finite()) {
        return Err(SynthError::InvalidArgument("gap and spread must be positive, level finite".into()));
    }
    if !(spec.max_norm > 0.0 && spec.max_norm < 1.0) {
        return Err(SynthError::InvalidArgument("max_norm must lie in (0, 1)".into()));
    }
    let hi = spec.level + spec.gap;
    let lo = spec.level - spec.gap;
    // The horoball at level λ reaches Euclidean norm ≥ tanh(λ/2).
    if (0.5 * hi).tanh() >= spec.max_norm {
        return Err(SynthError::InvalidArgument(format!(
            "level + gap = {hi} leaves no room inside norm {}",
            spec.max_norm
        )));
    }
    let omega = spec.omega.direction();
    let dim = omega.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(2 * spec.per_class);
    while points.len() < spec.per_class {
        let level = rng.random_range(hi..hi + spec.spread);
        let u = random_unit(&mut rng, dim);
        if let Some(x) = on_horosphere(omega, level, &u, spec.max_norm) {
            points.push(x);
        }
    }
    let origin_normal = RiemannianNormalParams::new(PoincarePoint::origin(dim), 1.0)?;
    let radial = RadialSampler::new(origin_normal.sigma, dim);
    while points.len() < 2 * spec.per_class {
        let candidate = match spec.negatives {
            NegativeRegion::Anywhere => {
                let level = rng.random_range(lo - spec.spread..lo);
                let u = random_unit(&mut rng, dim);
                on_horosphere(omega, level, &u, spec.max_norm)
            }
            NegativeRegion::OppositeHemisphere => {
                let r = radial.sample(&mut rng);
                let mut v = random_unit(&mut rng, dim);
                let d = dot(&v, omega);
                if d > 0.0 {
                    v = axpy(&v, -2.0 * d, omega);
                }
                let x = geodesic_from(&origin_normal.mean, &v, r);
                (x.norm() < spec.max_norm && dot(x.coords(), omega) < 0.0).then_some(x)
            }
        };
        if let Some(x) = candidate {
            if poincare_inner(&spec.omega, &x) <= lo {
                points.push(x);
            }
        }
    }
    let labels = (0..2 * spec.per_class)
        .map(|i| if i < spec.per_class { POSITIVE_LABEL } else { NEGATIVE_LABEL }.to_string())
        .collect();
    Ok(LabeledDataset::new(points, labels)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    /// Fraction of labels to flip, in `[0, 0.5]`.
    pub eta: f64,
    /// Flip equal numbers of positives and negatives.
    pub balanced: bool,
}

impl NoiseSpec {
    pub fn new(eta: f64, balanced: bool) -> Result<Self, SynthError> {
        if !(0.0..=0.5).contains(&eta) {
            return Err(SynthError::InvalidArgument(format!("eta must lie in [0, 0.5], got {eta}")));
        }
        Ok(Self { eta, balanced })
    }
}

/// Flips `round(η·|S|)` binary labels. Balanced flips split the count
/// evenly between the classes, with an odd extra flip going to the larger
/// class (the positive class on a tie).
pub fn inject_label_noise(data: &LabeledDataset, spec: NoiseSpec, seed: u64) -> Result<LabeledDataset, SynthError> {
    let y = data
        .labels()
        .iter()
        .map(|l| parse_binary_label(l).ok_or_else(|| DataError::NotBinary(l.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    let total = (spec.eta * data.len() as f64).round() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut flip: Vec<usize> = if spec.balanced {
        let (mut pos, mut neg): (Vec<usize>, Vec<usize>) = (0..data.len()).partition(|&i| y[i] > 0.0);
        let half = total / 2;
        let (n_pos, n_neg) = if total.is_multiple_of(2) {
            (half, half)
        } else if pos.len() >= neg.len() {
            (half + 1, half)
        } else {
            (half, half + 1)
        };
        for (class, members, need) in [(POSITIVE_LABEL, &pos, n_pos), (NEGATIVE_LABEL, &neg, n_neg)] {
            if members.len() < need {
                return Err(SynthError::InsufficientClassMembers {
                    class: class.into(),
                    count: members.len(),
                    required: need,
                });
            }
        }
        pos.shuffle(&mut rng);
        neg.shuffle(&mut rng);
        pos.truncate(n_pos);
        neg.truncate(n_neg);
        pos.extend(neg);
        pos
    } else {
        let mut all: Vec<usize> = (0..data.len()).collect();
        all.shuffle(&mut rng);
        all.truncate(total);
        all
    };
    flip.sort_unstable();
    let mut labels = data.labels().to_vec();
    for &i in &flip {
        labels[i] = if y[i] > 0.0 { NEGATIVE_LABEL } else { POSITIVE_LABEL }.to_string();
    }
    Ok(data.with_labels(labels)?)
}
