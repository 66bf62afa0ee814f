use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::loss::{horosvm_loss, perceptron_loss, smoothed_horosvm_loss};
use super::{HoroClassifier, ModelError, OvRModel};
use crate::data::{BinaryDataset, LabeledDataset};
use crate::linalg::normalized;
use crate::manifold::ProductPoint;
use crate::optim::{minimize, OptimConfig, OptimizerReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LossKind {
    Perceptron,
    #[default]
    HoroSvm,
}

/// Continuation schedule for the HoroSVM hinge: the objective is minimized
/// with hinge smoothing widths `start, start·factor, …` down to `end`, each
/// stage warm-started from the previous one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Smoothing {
    pub start: f64,
    pub end: f64,
    pub factor: f64,
}

impl Default for Smoothing {
    fn default() -> Self {
        Self {
            start: 1.0,
            end: 1e-8,
            factor: 0.1,
        }
    }
}

impl Smoothing {
    fn widths(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut tau = self.start;
        while tau >= self.end * (1.0 - 1e-9) {
            out.push(tau);
            tau *= self.factor;
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub c: f64,
    pub optim: OptimConfig,
    pub seed: u64,
    pub restarts: usize,
    /// `None` optimizes the exact (nonsmooth) HoroSVM objective directly.
    pub smoothing: Option<Smoothing>,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            c: 1.0,
            optim: OptimConfig::default(),
            seed: 0,
            restarts: 5,
            smoothing: Some(Smoothing::default()),
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), ModelError> {
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(ModelError::InvalidConfig(format!("C must be positive, got {}", self.c)));
        }
        if self.restarts == 0 {
            return Err(ModelError::InvalidConfig("restarts must be at least 1".into()));
        }
        if let Some(s) = &self.smoothing {
            if !(s.start > 0.0 && s.end > 0.0 && s.end <= s.start && s.factor > 0.0 && s.factor < 1.0) {
                return Err(ModelError::InvalidConfig(format!("bad smoothing schedule {s:?}")));
            }
        }
        self.optim.validate()?;
        Ok(())
    }
}

/// Outcome of one random restart.
#[derive(Debug, Clone, PartialEq)]
pub struct RestartResult {
    pub start: ProductPoint,
    pub point: ProductPoint,
    /// Report of the final stage; `final_loss` is the exact objective and
    /// `iters_used` counts every stage.
    pub report: OptimizerReport,
}

fn exact_loss(p: &ProductPoint, data: &BinaryDataset, kind: LossKind, c: f64) -> f64 {
    match kind {
        LossKind::Perceptron => perceptron_loss(p, data).0,
        LossKind::HoroSvm => horosvm_loss(p, data, c).0,
    }
}

fn run_from(
    start: ProductPoint,
    data: &BinaryDataset,
    cfg: &TrainConfig,
    kind: LossKind,
) -> Result<RestartResult, ModelError> {
    let (point, mut report) = match (kind, cfg.smoothing) {
        (LossKind::Perceptron, _) => minimize(|p| perceptron_loss(p, data), start.clone(), &cfg.optim)?,
        (LossKind::HoroSvm, None) => minimize(|p| horosvm_loss(p, data, cfg.c), start.clone(), &cfg.optim)?,
        (LossKind::HoroSvm, Some(schedule)) => {
            let mut point = start.clone();
            let mut iters = 0;
            let mut trace = Vec::new();
            let mut last = None;
            for tau in schedule.widths() {
                let (p, r) = minimize(|p| smoothed_horosvm_loss(p, data, cfg.c, tau), point, &cfg.optim)?;
                log::trace!("smoothing width {tau:e}: loss {} after {} iterations", r.final_loss, r.iters_used);
                iters += r.iters_used;
                trace.extend_from_slice(&r.loss_trace);
                point = p;
                last = Some(r);
            }
            let mut report = last.expect("schedule has at least one stage");
            report.iters_used = iters;
            report.loss_trace = trace;
            (point, report)
        }
    };
    report.final_loss = exact_loss(&point, data, kind, cfg.c);
    Ok(RestartResult { start, point, report })
}

fn random_unit(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
        if let Some(u) = normalized(&v) {
            return u;
        }
    }
}

/// Every restart, in order. Restart `r` starts from `μ = b = 1` and the
/// `r`-th direction drawn uniformly on the sphere from `cfg.seed`.
pub fn train_binary_restarts(
    data: &BinaryDataset,
    cfg: &TrainConfig,
    kind: LossKind,
) -> Result<Vec<RestartResult>, ModelError> {
    cfg.validate()?;
    if data.is_empty() {
        return Err(ModelError::EmptyDataset);
    }
    if data.positives() == 0 || data.negatives() == 0 {
        let missing = if data.positives() == 0 { "1" } else { "-1" };
        return Err(ModelError::SingleClassDataset(missing.into()));
    }
    let data = data.nudged_off_origin();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let starts: Vec<ProductPoint> = (0..cfg.restarts)
        .map(|_| ProductPoint::new(1.0, random_unit(&mut rng, data.dim()), 1.0).expect("valid start"))
        .collect();
    starts
        .into_iter()
        .enumerate()
        .map(|(r, start)| {
            let res = run_from(start, &data, cfg, kind)?;
            log::debug!(
                "restart {r}: loss {} after {} iterations ({:?})",
                res.report.final_loss,
                res.report.iters_used,
                res.report.stop_reason
            );
            Ok(res)
        })
        .collect()
}

/// Best of `cfg.restarts` runs by final loss; the earliest restart wins ties.
pub fn train_binary(
    data: &BinaryDataset,
    cfg: &TrainConfig,
    kind: LossKind,
) -> Result<(HoroClassifier, OptimizerReport), ModelError> {
    let runs = train_binary_restarts(data, cfg, kind)?;
    let best = runs
        .into_iter()
        .reduce(|a, b| if b.report.final_loss < a.report.final_loss { b } else { a })
        .expect("at least one restart");
    Ok((HoroClassifier::from_product_point(&best.point), best.report))
}

/// One HoroSVM per entry of `classes`, each trained on that class against
/// the rest with seed `cfg.seed + k`. Classes train concurrently.
pub fn train_ovr_for_classes(
    data: &LabeledDataset,
    classes: &[String],
    cfg: &TrainConfig,
) -> Result<(OvRModel, Vec<OptimizerReport>), ModelError> {
    if classes.len() < 2 {
        let only = classes.first().cloned().unwrap_or_default();
        return Err(ModelError::SingleClassDataset(only));
    }
    cfg.validate()?;
    let trained: Vec<(HoroClassifier, OptimizerReport)> = classes
        .par_iter()
        .enumerate()
        .map(|(k, class)| {
            let binary = BinaryDataset::one_vs_rest(data, class);
            if binary.positives() == 0 || binary.negatives() == 0 {
                return Err(ModelError::SingleClassDataset(class.clone()));
            }
            let class_cfg = TrainConfig {
                seed: cfg.seed.wrapping_add(k as u64),
                ..cfg.clone()
            };
            train_binary(&binary, &class_cfg, LossKind::HoroSvm)
        })
        .collect::<Result<_, _>>()?;
    let (per_class, reports) = trained.into_iter().unzip();
    Ok((OvRModel::new(classes.to_vec(), per_class)?, reports))
}

/// [`train_ovr_for_classes`] over the classes present in `data`.
pub fn train_ovr(data: &LabeledDataset, cfg: &TrainConfig) -> Result<(OvRModel, Vec<OptimizerReport>), ModelError> {
    train_ovr_for_classes(data, &data.classes(), cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{geodesic_ray, IdealPoint, PoincarePoint};
    use crate::model::margin;

    fn two_point_data() -> BinaryDataset {
        let w = IdealPoint::axis(2, 0);
        BinaryDataset::new(vec![geodesic_ray(&w, 2.0), geodesic_ray(&w, 0.5)], vec![1.0, -1.0]).unwrap()
    }

    #[test]
    fn single_class_is_rejected() {
        let d = BinaryDataset::new(vec![PoincarePoint::new(vec![0.1, 0.0]).unwrap()], vec![1.0]).unwrap();
        let err = train_binary(&d, &TrainConfig::default(), LossKind::HoroSvm).unwrap_err();
        assert!(matches!(err, ModelError::SingleClassDataset(c) if c == "-1"));
    }

    #[test]
    fn bad_config_is_rejected() {
        let cfg = TrainConfig { c: 0.0, ..TrainConfig::default() };
        assert!(matches!(train_binary(&two_point_data(), &cfg, LossKind::HoroSvm), Err(ModelError::InvalidConfig(_))));
        let cfg = TrainConfig { restarts: 0, ..TrainConfig::default() };
        assert!(matches!(train_binary(&two_point_data(), &cfg, LossKind::HoroSvm), Err(ModelError::InvalidConfig(_))));
    }

    #[test]
    fn two_points_split_at_half_gap() {
        // Levels 2.0 and 0.5 along the same direction: the widest boundary
        // sits at level 1.25, half a gap of 1.5 from each sample.
        let cfg = TrainConfig { c: 100.0, ..TrainConfig::default() };
        let data = two_point_data();
        let (clf, _) = train_binary(&data, &cfg, LossKind::HoroSvm).unwrap();
        let h = clf.boundary();
        let p = ProductPoint::new(h.mu(), h.omega().direction().to_vec(), h.b()).unwrap();
        assert!((margin(&p, &data) - 0.75).abs() < 1e-4, "margin {}", margin(&p, &data));
    }

    #[test]
    fn training_is_deterministic() {
        let cfg = TrainConfig { restarts: 2, ..TrainConfig::default() };
        let a = train_binary(&two_point_data(), &cfg, LossKind::Perceptron).unwrap();
        let b = train_binary(&two_point_data(), &cfg, LossKind::Perceptron).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.1.final_loss, 0.0);
    }

    #[test]
    fn smoothing_widths() {
        assert_eq!(Smoothing::default().widths().len(), 9);
        let s = Smoothing { start: 0.5, end: 0.5, factor: 0.1 };
        assert_eq!(s.widths(), vec![0.5]);
    }
}
