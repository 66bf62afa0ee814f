use std::fmt::Write as _;

use super::{sorted_classes, DataError};

#[derive(Debug, Clone, PartialEq)]
pub struct ClassMetrics {
    pub class: String,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub classes: Vec<String>,
    pub per_class: Vec<ClassMetrics>,
    pub macro_f1: f64,
    pub accuracy: f64,
    /// `confusion[t][p]` counts samples of class `t` predicted as `p`.
    pub confusion: Vec<Vec<usize>>,
}

impl MetricsReport {
    pub fn class(&self, class: &str) -> Option<&ClassMetrics> {
        self.per_class.iter().find(|m| m.class == class)
    }

    /// F1 of `class`, or 0 when it never occurs.
    pub fn f1_of(&self, class: &str) -> f64 {
        self.class(class).map_or(0.0, |m| m.f1)
    }

    /// `key = value` lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "accuracy = {}", self.accuracy).unwrap();
        writeln!(out, "macro_f1 = {}", self.macro_f1).unwrap();
        for m in &self.per_class {
            writeln!(out, "class.{}.precision = {}", m.class, m.precision).unwrap();
            writeln!(out, "class.{}.recall = {}", m.class, m.recall).unwrap();
            writeln!(out, "class.{}.f1 = {}", m.class, m.f1).unwrap();
            writeln!(out, "class.{}.support = {}", m.class, m.support).unwrap();
        }
        for (t, row) in self.classes.iter().zip(&self.confusion) {
            for (p, n) in self.classes.iter().zip(row) {
                writeln!(out, "confusion.{t}.{p} = {n}").unwrap();
            }
        }
        out
    }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Per-class precision/recall/F1 (each class taken in turn as the class
/// under test) over the union of predicted and true labels, plus the
/// unweighted macro average.
pub fn evaluate(predictions: &[String], truth: &[String]) -> Result<MetricsReport, DataError> {
    if predictions.len() != truth.len() {
        return Err(DataError::LengthMismatch {
            points: predictions.len(),
            labels: truth.len(),
        });
    }
    if truth.is_empty() {
        return Err(DataError::Empty);
    }
    let classes = sorted_classes(truth.iter().chain(predictions));
    let index = |l: &String| classes.iter().position(|c| c == l).expect("known class");
    let k = classes.len();
    let mut confusion = vec![vec![0usize; k]; k];
    for (p, t) in predictions.iter().zip(truth) {
        confusion[index(t)][index(p)] += 1;
    }
    let per_class: Vec<ClassMetrics> = (0..k)
        .map(|c| {
            let tp = confusion[c][c];
            let predicted: usize = (0..k).map(|t| confusion[t][c]).sum();
            let support: usize = confusion[c].iter().sum();
            let precision = ratio(tp, predicted);
            let recall = ratio(tp, support);
            let f1 = if precision + recall > 0.0 {
                2.0 * precision * recall / (precision + recall)
            } else {
                0.0
            };
            ClassMetrics {
                class: classes[c].clone(),
                precision,
                recall,
                f1,
                support,
            }
        })
        .collect();
    let macro_f1 = per_class.iter().map(|m| m.f1).sum::<f64>() / k as f64;
    let correct: usize = (0..k).map(|c| confusion[c][c]).sum();
    Ok(MetricsReport {
        classes,
        per_class,
        macro_f1,
        accuracy: ratio(correct, truth.len()),
        confusion,
    })
}
