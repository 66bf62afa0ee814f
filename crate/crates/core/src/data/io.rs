//! Dataset files: UTF-8, comma separated, a `dim=<n>` header followed by
//! rows `x_1,...,x_n,label`. Coordinates are written with 17 significant
//! digits. Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{DataError, LabeledDataset};
use crate::geometry::PoincarePoint;

pub fn parse_dataset(text: &str) -> Result<LabeledDataset, DataError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let Some((header_line, header)) = lines.next() else {
        return Err(DataError::Parse {
            line: 1,
            reason: "missing `dim=<n>` header".into(),
        });
    };
    let dim = header
        .strip_prefix("dim=")
        .and_then(|d| d.trim().parse::<usize>().ok())
        .filter(|d| *d > 0)
        .ok_or_else(|| DataError::Parse {
            line: header_line,
            reason: format!("expected header `dim=<n>` with n >= 1, found {header:?}"),
        })?;

    let mut points = Vec::new();
    let mut labels = Vec::new();
    for (line, row) in lines {
        let fields: Vec<&str> = row.split(',').map(str::trim).collect();
        if fields.len() != dim + 1 {
            return Err(DataError::Parse {
                line,
                reason: format!("expected {} fields (dim={dim} plus label), found {}", dim + 1, fields.len()),
            });
        }
        let coords = fields[..dim]
            .iter()
            .map(|f| {
                f.parse::<f64>().map_err(|e| DataError::Parse {
                    line,
                    reason: format!("bad coordinate {f:?}: {e}"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let label = fields[dim];
        if label.is_empty() {
            return Err(DataError::Parse {
                line,
                reason: "empty label".into(),
            });
        }
        let point = PoincarePoint::new(coords).map_err(|source| DataError::Invariant {
            index: points.len(),
            line,
            source,
        })?;
        points.push(point);
        labels.push(label.to_string());
    }
    LabeledDataset::new(points, labels)
}

pub fn format_dataset(data: &LabeledDataset) -> String {
    let mut out = String::new();
    writeln!(out, "dim={}", data.dim()).unwrap();
    for (p, l) in data.points().iter().zip(data.labels()) {
        for c in p.coords() {
            write!(out, "{c:.16e},").unwrap();
        }
        writeln!(out, "{l}").unwrap();
    }
    out
}

pub fn read_dataset(path: impl AsRef<Path>) -> Result<LabeledDataset, DataError> {
    parse_dataset(&fs::read_to_string(path)?)
}

pub fn write_dataset(path: impl AsRef<Path>, data: &LabeledDataset) -> Result<(), DataError> {
    Ok(fs::write(path, format_dataset(data))?)
}
