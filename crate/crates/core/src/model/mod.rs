//! Horospherical classifiers: decision rule, losses, training, one-vs-rest.

mod format;
mod loss;
mod probe;
mod train;

pub use loss::{horosvm_loss, margin, perceptron_loss, smoothed_horosvm_loss};
pub use probe::{convexity_probe, ConvexityReport, ProbeConfig};
pub use train::{train_binary, train_binary_restarts, train_ovr, train_ovr_for_classes, LossKind, RestartResult, Smoothing, TrainConfig};

use thiserror::Error;

use crate::data::{DataError, NEGATIVE_LABEL, POSITIVE_LABEL};
use crate::geometry::{poincare_inner, GeometryError, Horosphere, IdealPoint, PoincarePoint};
use crate::manifold::ProductPoint;
use crate::optim::OptimError;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("class {0:?} has no members on one side of its binary split")]
    SingleClassDataset(String),
    #[error("dimension mismatch: model has {expected}, input has {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("sample lies at the origin; the probe needs 0 < |x| < 1")]
    DegeneratePoint,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Optim(#[from] OptimError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error("model file line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Binary classifier `sign(μ⟨ω,x⟩_B − b)` with ties resolved to `+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct HoroClassifier {
    boundary: Horosphere,
}

impl HoroClassifier {
    pub fn new(boundary: Horosphere) -> Self {
        Self { boundary }
    }

    pub fn from_product_point(p: &ProductPoint) -> Self {
        let omega = IdealPoint::new(p.omega.as_slice().to_vec()).expect("sphere point is a unit vector");
        Self {
            boundary: Horosphere::new(p.mu.value(), omega, p.b.value()).expect("positive parameters"),
        }
    }

    pub fn boundary(&self) -> &Horosphere {
        &self.boundary
    }

    pub fn dim(&self) -> usize {
        self.boundary.dim()
    }

    /// Pre-sign score `μ⟨ω,x⟩_B − b`.
    pub fn decision_value(&self, x: &PoincarePoint) -> f64 {
        self.boundary.mu() * poincare_inner(self.boundary.omega(), x) - self.boundary.b()
    }

    /// Decision value divided by `μ`: the signed distance to the boundary.
    pub fn signed_distance(&self, x: &PoincarePoint) -> f64 {
        self.decision_value(x) / self.boundary.mu()
    }

    pub fn predict_sign(&self, x: &PoincarePoint) -> f64 {
        if self.decision_value(x) >= 0.0 {
            1.0
        } else {
            -1.0
        }
    }

    /// `(μ, b) → (cμ, cb)`; describes the same horosphere.
    pub fn rescaled(&self, c: f64) -> Result<Self, ModelError> {
        let h = &self.boundary;
        Ok(Self {
            boundary: Horosphere::new(c * h.mu(), h.omega().clone(), c * h.b())?,
        })
    }

    fn check_dim(&self, points: &[PoincarePoint]) -> Result<(), ModelError> {
        check_dims(self.dim(), points)
    }

    pub fn predict(&self, points: &[PoincarePoint]) -> Result<Vec<f64>, ModelError> {
        self.check_dim(points)?;
        Ok(points.iter().map(|x| self.predict_sign(x)).collect())
    }
}

fn check_dims(dim: usize, points: &[PoincarePoint]) -> Result<(), ModelError> {
    match points.iter().find(|p| p.dim() != dim) {
        Some(p) => Err(ModelError::DimensionMismatch { expected: dim, got: p.dim() }),
        None => Ok(()),
    }
}

/// One-vs-rest classifier: one horosphere per class.
#[derive(Debug, Clone, PartialEq)]
pub struct OvRModel {
    classes: Vec<String>,
    per_class: Vec<HoroClassifier>,
}

impl OvRModel {
    pub fn new(classes: Vec<String>, per_class: Vec<HoroClassifier>) -> Result<Self, ModelError> {
        if classes.len() < 2 {
            return Err(ModelError::InvalidConfig("one-vs-rest needs at least 2 classes".into()));
        }
        if classes.len() != per_class.len() {
            return Err(ModelError::InvalidConfig(format!(
                "{} classes but {} classifiers",
                classes.len(),
                per_class.len()
            )));
        }
        let dim = per_class[0].dim();
        if let Some(c) = per_class.iter().find(|c| c.dim() != dim) {
            return Err(ModelError::DimensionMismatch { expected: dim, got: c.dim() });
        }
        Ok(Self { classes, per_class })
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn per_class(&self) -> &[HoroClassifier] {
        &self.per_class
    }

    pub fn dim(&self) -> usize {
        self.per_class[0].dim()
    }

    /// Index of the class with the largest signed distance; the first class
    /// wins ties.
    pub fn predict_index(&self, x: &PoincarePoint) -> usize {
        let mut best = 0;
        let mut best_score = f64::NEG_INFINITY;
        for (k, clf) in self.per_class.iter().enumerate() {
            let s = clf.signed_distance(x);
            if s > best_score {
                best = k;
                best_score = s;
            }
        }
        best
    }

    pub fn predict(&self, points: &[PoincarePoint]) -> Result<Vec<String>, ModelError> {
        check_dims(self.dim(), points)?;
        Ok(points.iter().map(|x| self.classes[self.predict_index(x)].clone()).collect())
    }
}

/// A trained model of either kind.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Binary(HoroClassifier),
    OneVsRest(OvRModel),
}

impl Model {
    pub fn dim(&self) -> usize {
        match self {
            Model::Binary(c) => c.dim(),
            Model::OneVsRest(m) => m.dim(),
        }
    }

    /// Labels as strings; binary models emit `1` and `-1`.
    pub fn predict(&self, points: &[PoincarePoint]) -> Result<Vec<String>, ModelError> {
        match self {
            Model::Binary(c) => Ok(c
                .predict(points)?
                .into_iter()
                .map(|s| if s > 0.0 { POSITIVE_LABEL } else { NEGATIVE_LABEL }.to_string())
                .collect()),
            Model::OneVsRest(m) => m.predict(points),
        }
    }
}
