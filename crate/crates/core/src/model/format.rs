//! Text model files:
//!
//! ```text
//! kind = ovr
//! dim = 2
//! classes = a,b
//! classifier.0.mu = 1.2500000000000000e0
//! classifier.0.b = 4.0000000000000002e-1
//! classifier.0.omega = 6.0000000000000009e-1,-8.0000000000000004e-1
//! ...
//! ```
//!
//! Binary models use `kind = binary`, omit `classes` and hold a single
//! `classifier.0`. Numbers carry 17 significant digits.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{HoroClassifier, Model, ModelError, OvRModel};
use crate::geometry::{Horosphere, IdealPoint};

fn write_classifier(out: &mut String, k: usize, c: &HoroClassifier) {
    let h = c.boundary();
    writeln!(out, "classifier.{k}.mu = {:.16e}", h.mu()).unwrap();
    writeln!(out, "classifier.{k}.b = {:.16e}", h.b()).unwrap();
    let omega: Vec<String> = h.omega().direction().iter().map(|v| format!("{v:.16e}")).collect();
    writeln!(out, "classifier.{k}.omega = {}", omega.join(",")).unwrap();
}

impl Model {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match self {
            Model::Binary(c) => {
                writeln!(out, "kind = binary").unwrap();
                writeln!(out, "dim = {}", c.dim()).unwrap();
                write_classifier(&mut out, 0, c);
            }
            Model::OneVsRest(m) => {
                writeln!(out, "kind = ovr").unwrap();
                writeln!(out, "dim = {}", m.dim()).unwrap();
                writeln!(out, "classes = {}", m.classes().join(",")).unwrap();
                for (k, c) in m.per_class().iter().enumerate() {
                    write_classifier(&mut out, k, c);
                }
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, ModelError> {
        let mut fields: BTreeMap<String, (usize, String)> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ModelError::Parse {
                    line: i + 1,
                    reason: format!("expected `key = value`, found {line:?}"),
                });
            };
            fields.insert(key.trim().to_string(), (i + 1, value.trim().to_string()));
        }
        let get = |key: &str| {
            fields.get(key).ok_or_else(|| ModelError::Parse {
                line: 0,
                reason: format!("missing key {key:?}"),
            })
        };
        let number = |key: &str| -> Result<f64, ModelError> {
            let (line, v) = get(key)?;
            v.parse().map_err(|e| ModelError::Parse {
                line: *line,
                reason: format!("{key}: {e}"),
            })
        };
        let (dim_line, dim) = get("dim")?;
        let dim: usize = dim.parse().map_err(|e| ModelError::Parse {
            line: *dim_line,
            reason: format!("dim: {e}"),
        })?;
        let classifier = |k: usize| -> Result<HoroClassifier, ModelError> {
            let key = format!("classifier.{k}.omega");
            let (line, raw) = get(&key)?;
            let omega = raw
                .split(',')
                .map(|v| v.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| ModelError::Parse {
                    line: *line,
                    reason: format!("{key}: {e}"),
                })?;
            if omega.len() != dim {
                return Err(ModelError::DimensionMismatch { expected: dim, got: omega.len() });
            }
            let mu = number(&format!("classifier.{k}.mu"))?;
            let b = number(&format!("classifier.{k}.b"))?;
            Ok(HoroClassifier::new(Horosphere::new(mu, IdealPoint::new(omega)?, b)?))
        };
        let (kind_line, kind) = get("kind")?;
        match kind.as_str() {
            "binary" => Ok(Model::Binary(classifier(0)?)),
            "ovr" => {
                let classes: Vec<String> = get("classes")?.1.split(',').map(|c| c.trim().to_string()).collect();
                let per_class = (0..classes.len()).map(classifier).collect::<Result<Vec<_>, _>>()?;
                Ok(Model::OneVsRest(OvRModel::new(classes, per_class)?))
            }
            other => Err(ModelError::Parse {
                line: *kind_line,
                reason: format!("unknown model kind {other:?}"),
            }),
        }
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), ModelError> {
        Ok(fs::write(path, self.to_text())?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ModelError> {
        Self::from_text(&fs::read_to_string(path)?)
    }
}
