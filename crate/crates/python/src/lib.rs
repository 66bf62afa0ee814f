use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use horosvm::data::{evaluate as evaluate_labels, LabeledDataset};
use horosvm::geometry::{self, IdealPoint, PoincarePoint};
use horosvm::model::{LossKind, Model, ModelError, TrainConfig};
use horosvm::synth;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn model_err(e: ModelError) -> PyErr {
    match e {
        ModelError::Io(_) => PyIOError::new_err(e.to_string()),
        _ => value_err(e),
    }
}

fn point(coords: Vec<f64>) -> PyResult<PoincarePoint> {
    PoincarePoint::new(coords).map_err(value_err)
}

fn points(rows: Vec<Vec<f64>>) -> PyResult<Vec<PoincarePoint>> {
    rows.into_iter().map(point).collect()
}

/// Hyperbolic distance between two points of the Poincare ball.
#[pyfunction]
fn geodesic_distance(x: Vec<f64>, y: Vec<f64>) -> PyResult<f64> {
    let (x, y) = (point(x)?, point(y)?);
    if x.dim() != y.dim() {
        return Err(value_err("points have different dimensions"));
    }
    Ok(geometry::geodesic_distance(&x, &y))
}

/// Busemann function of the ideal point `omega` (renormalized) at `x`.
#[pyfunction]
fn busemann(omega: Vec<f64>, x: Vec<f64>) -> PyResult<f64> {
    let omega = IdealPoint::new(omega).map_err(value_err)?;
    let x = point(x)?;
    if x.dim() != omega.dim() {
        return Err(value_err("omega and x have different dimensions"));
    }
    Ok(geometry::busemann(&omega, &x))
}

/// Two-or-more class Riemannian Gaussian mixture; returns `(points, labels)`.
#[pyfunction]
#[pyo3(signature = (n_classes=2, per_class=200, centroid_var=1.5, cluster_var=1.0, dim=2, seed=0))]
fn make_gmm_dataset(
    n_classes: usize,
    per_class: usize,
    centroid_var: f64,
    cluster_var: f64,
    dim: usize,
    seed: u64,
) -> PyResult<(Vec<Vec<f64>>, Vec<String>)> {
    if !(centroid_var > 0.0 && cluster_var > 0.0) {
        return Err(value_err("variances must be positive"));
    }
    let data = synth::make_gmm_dataset(n_classes, per_class, centroid_var.sqrt(), cluster_var.sqrt(), dim, seed)
        .map_err(value_err)?;
    let coords = data.points().iter().map(|p| p.coords().to_vec()).collect();
    Ok((coords, data.labels().to_vec()))
}

/// Classification metrics as a dict with `accuracy`, `macro_f1` and a
/// per-class `f1` dict.
#[pyfunction]
fn evaluate<'py>(py: Python<'py>, predictions: Vec<String>, truth: Vec<String>) -> PyResult<Bound<'py, PyDict>> {
    let report = evaluate_labels(&predictions, &truth).map_err(value_err)?;
    let out = PyDict::new(py);
    out.set_item("accuracy", report.accuracy)?;
    out.set_item("macro_f1", report.macro_f1)?;
    let f1 = PyDict::new(py);
    for c in &report.per_class {
        f1.set_item(&c.class, c.f1)?;
    }
    out.set_item("f1", f1)?;
    Ok(out)
}

/// Horospherical SVM. Labels `"1"`/`"-1"` train a binary model, anything
/// else trains one-vs-rest.
#[pyclass(name = "HoroSVM", module = "pyhorosvm")]
struct PyHoroSvm {
    config: TrainConfig,
    loss: LossKind,
    model: Option<Model>,
}

impl PyHoroSvm {
    fn fitted(&self) -> PyResult<&Model> {
        self.model.as_ref().ok_or_else(|| value_err("model is not fitted"))
    }
}

#[pymethods]
impl PyHoroSvm {
    #[new]
    #[pyo3(signature = (c=1.0, restarts=5, seed=0, max_iters=2000, loss="horosvm"))]
    fn new(c: f64, restarts: usize, seed: u64, max_iters: usize, loss: &str) -> PyResult<Self> {
        let loss = match loss {
            "horosvm" => LossKind::HoroSvm,
            "perceptron" => LossKind::Perceptron,
            other => return Err(value_err(format!("unknown loss {other:?}"))),
        };
        let mut config = TrainConfig { c, restarts, seed, ..TrainConfig::default() };
        config.optim.max_iters = max_iters;
        config.validate().map_err(value_err)?;
        Ok(Self { config, loss, model: None })
    }

    /// Trains on `points` (rows inside the unit ball) and string `labels`.
    fn fit<'py>(mut slf: PyRefMut<'py, Self>, py: Python<'py>, points: Vec<Vec<f64>>, labels: Vec<String>) -> PyResult<PyRefMut<'py, Self>> {
        let data = LabeledDataset::new(self::points(points)?, labels).map_err(value_err)?;
        let (config, loss) = (slf.config.clone(), slf.loss);
        let (model, _) = py.detach(|| horosvm::cli::fit(&data, &config, loss)).map_err(model_err)?;
        slf.model = Some(model);
        Ok(slf)
    }

    fn predict(&self, points: Vec<Vec<f64>>) -> PyResult<Vec<String>> {
        self.fitted()?.predict(&self::points(points)?).map_err(model_err)
    }

    /// Signed distance to the boundary, one row per sample; binary models
    /// give one column, one-vs-rest models one column per class.
    fn decision_function(&self, points: Vec<Vec<f64>>) -> PyResult<Vec<Vec<f64>>> {
        let model = self.fitted()?;
        let points = self::points(points)?;
        if let Some(p) = points.iter().find(|p| p.dim() != model.dim()) {
            return Err(value_err(format!("expected dimension {}, got {}", model.dim(), p.dim())));
        }
        let classifiers = match model {
            Model::Binary(c) => std::slice::from_ref(c),
            Model::OneVsRest(m) => m.per_class(),
        };
        Ok(points.iter().map(|x| classifiers.iter().map(|c| c.signed_distance(x)).collect()).collect())
    }

    #[getter]
    fn classes(&self) -> PyResult<Vec<String>> {
        Ok(match self.fitted()? {
            Model::Binary(_) => vec!["-1".into(), "1".into()],
            Model::OneVsRest(m) => m.classes().to_vec(),
        })
    }

    fn to_text(&self) -> PyResult<String> {
        Ok(self.fitted()?.to_text())
    }

    fn save(&self, path: &str) -> PyResult<()> {
        self.fitted()?.save(path).map_err(model_err)
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        let model = Model::load(path).map_err(model_err)?;
        Ok(Self { config: TrainConfig::default(), loss: LossKind::HoroSvm, model: Some(model) })
    }
}

#[pymodule]
fn pyhorosvm(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(geodesic_distance, m)?)?;
    m.add_function(wrap_pyfunction!(busemann, m)?)?;
    m.add_function(wrap_pyfunction!(make_gmm_dataset, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_class::<PyHoroSvm>()?;
    Ok(())
}
