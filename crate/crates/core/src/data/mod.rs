//! Labeled datasets, file I/O, splitting, and classification metrics.

mod io;
mod metrics;
mod split;

pub use io::{format_dataset, parse_dataset, read_dataset, write_dataset};
pub use metrics::{evaluate, ClassMetrics, MetricsReport};
pub use split::{downsample_majority, kfold, kfold_indices, split};

use std::cmp::Ordering;
use std::collections::BTreeMap;

use thiserror::Error;

use crate::geometry::{GeometryError, PoincarePoint};

/// Label used for the positive class of binary problems.
pub const POSITIVE_LABEL: &str = "1";
/// Label used for the negative class of binary problems.
pub const NEGATIVE_LABEL: &str = "-1";

/// Offset applied to exact-origin samples before training.
pub const ORIGIN_NUDGE: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("row {index} (line {line}) is not strictly inside the unit ball: {source}")]
    Invariant {
        index: usize,
        line: usize,
        source: GeometryError,
    },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("dataset is empty")]
    Empty,
    #[error("{points} points but {labels} labels")]
    LengthMismatch { points: usize, labels: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("label {0:?} is not a binary label (expected 1 or -1)")]
    NotBinary(String),
    #[error("class {class:?} has {count} members; at least {required} are required")]
    ClassTooSmall {
        class: String,
        count: usize,
        required: usize,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// Orders labels numerically when both parse as numbers, lexically
/// otherwise; numeric labels sort before non-numeric ones.
pub fn compare_labels(a: &str, b: &str) -> Ordering {
    match (a.parse::<f64>(), b.parse::<f64>()) {
        (Ok(x), Ok(y)) => x.partial_cmp(&y).unwrap_or(Ordering::Equal).then_with(|| a.cmp(b)),
        (Ok(_), Err(_)) => Ordering::Less,
        (Err(_), Ok(_)) => Ordering::Greater,
        (Err(_), Err(_)) => a.cmp(b),
    }
}

/// Distinct labels in [`compare_labels`] order.
pub fn sorted_classes<'a>(labels: impl IntoIterator<Item = &'a String>) -> Vec<String> {
    let mut classes: Vec<String> = labels.into_iter().cloned().collect();
    classes.sort_by(|a, b| compare_labels(a, b));
    classes.dedup();
    classes
}

/// Parses `1`, `+1`, `-1` (or numerically equal spellings) into `±1.0`.
pub fn parse_binary_label(label: &str) -> Option<f64> {
    match label.trim().parse::<f64>() {
        Ok(1.0) => Some(1.0),
        Ok(-1.0) => Some(-1.0),
        _ => None,
    }
}

/// Points in the ball with arbitrary string labels.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    dim: usize,
    points: Vec<PoincarePoint>,
    labels: Vec<String>,
}

impl LabeledDataset {
    pub fn new(points: Vec<PoincarePoint>, labels: Vec<String>) -> Result<Self, DataError> {
        if points.len() != labels.len() {
            return Err(DataError::LengthMismatch {
                points: points.len(),
                labels: labels.len(),
            });
        }
        let Some(first) = points.first() else {
            return Err(DataError::Empty);
        };
        let dim = first.dim();
        if let Some(p) = points.iter().find(|p| p.dim() != dim) {
            return Err(DataError::DimensionMismatch {
                expected: dim,
                got: p.dim(),
            });
        }
        Ok(Self { dim, points, labels })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[PoincarePoint] {
        &self.points
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn classes(&self) -> Vec<String> {
        sorted_classes(&self.labels)
    }

    /// Indices of each class's members, keyed in class order.
    pub fn class_members(&self) -> Vec<(String, Vec<usize>)> {
        let mut map: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        let classes = self.classes();
        for (i, l) in self.labels.iter().enumerate() {
            let k = classes.iter().position(|c| c == l).expect("label is a class");
            map.entry(k).or_default().push(i);
        }
        map.into_iter().map(|(k, v)| (classes[k].clone(), v)).collect()
    }

    /// Rows at `indices`, in the given order. Panics on out-of-range indices.
    pub fn subset(&self, indices: &[usize]) -> Self {
        Self {
            dim: self.dim,
            points: indices.iter().map(|&i| self.points[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i].clone()).collect(),
        }
    }

    pub fn with_labels(&self, labels: Vec<String>) -> Result<Self, DataError> {
        Self::new(self.points.clone(), labels)
    }

    /// Whether every label is a binary `±1` label.
    pub fn is_binary(&self) -> bool {
        self.labels.iter().all(|l| parse_binary_label(l).is_some())
    }
}

/// Binary problem: points with labels `y ∈ {−1, +1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryDataset {
    dim: usize,
    points: Vec<PoincarePoint>,
    y: Vec<f64>,
}

impl BinaryDataset {
    pub fn new(points: Vec<PoincarePoint>, y: Vec<f64>) -> Result<Self, DataError> {
        if points.len() != y.len() {
            return Err(DataError::LengthMismatch {
                points: points.len(),
                labels: y.len(),
            });
        }
        let Some(first) = points.first() else {
            return Err(DataError::Empty);
        };
        let dim = first.dim();
        if let Some(p) = points.iter().find(|p| p.dim() != dim) {
            return Err(DataError::DimensionMismatch {
                expected: dim,
                got: p.dim(),
            });
        }
        if let Some(v) = y.iter().find(|v| **v != 1.0 && **v != -1.0) {
            return Err(DataError::NotBinary(v.to_string()));
        }
        Ok(Self { dim, points, y })
    }

    /// Interprets `1`/`-1` labels.
    pub fn from_labeled(data: &LabeledDataset) -> Result<Self, DataError> {
        let y = data
            .labels
            .iter()
            .map(|l| parse_binary_label(l).ok_or_else(|| DataError::NotBinary(l.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(data.points.clone(), y)
    }

    /// `class` against every other label.
    pub fn one_vs_rest(data: &LabeledDataset, class: &str) -> Self {
        let y = data
            .labels
            .iter()
            .map(|l| if l == class { 1.0 } else { -1.0 })
            .collect();
        Self {
            dim: data.dim,
            points: data.points.clone(),
            y,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[PoincarePoint] {
        &self.points
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn positives(&self) -> usize {
        self.y.iter().filter(|v| **v > 0.0).count()
    }

    pub fn negatives(&self) -> usize {
        self.len() - self.positives()
    }

    pub fn subset(&self, indices: &[usize]) -> Self {
        Self {
            dim: self.dim,
            points: indices.iter().map(|&i| self.points[i].clone()).collect(),
            y: indices.iter().map(|&i| self.y[i]).collect(),
        }
    }

    /// Moves samples sitting exactly at the origin off it by
    /// [`ORIGIN_NUDGE`] along the first axis.
    pub fn nudged_off_origin(&self) -> Self {
        let mut out = self.clone();
        for (i, p) in out.points.iter_mut().enumerate() {
            if p.norm_sq() == 0.0 {
                log::warn!("sample {i} lies at the origin; perturbing it by {ORIGIN_NUDGE:e}");
                let mut c = p.coords().to_vec();
                c[0] = ORIGIN_NUDGE;
                *p = PoincarePoint::new(c).expect("nudged point is inside the ball");
            }
        }
        out
    }

    pub fn to_labeled(&self) -> LabeledDataset {
        let labels = self
            .y
            .iter()
            .map(|v| if *v > 0.0 { POSITIVE_LABEL } else { NEGATIVE_LABEL }.to_string())
            .collect();
        LabeledDataset {
            dim: self.dim,
            points: self.points.clone(),
            labels,
        }
    }
}
