//! The `horosvm` command line and the workflows behind it.
//!
//! Every subcommand is also reachable as a library function ([`cross_validate`],
//! [`noise_bench`], [`fit`]) so that experiments can run without a process.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::data::{
    downsample_majority, evaluate, format_dataset, kfold, read_dataset, split, write_dataset, BinaryDataset,
    DataError, LabeledDataset, POSITIVE_LABEL,
};
use crate::geometry::{IdealPoint, PoincarePoint};
use crate::model::{
    convexity_probe, margin, train_binary, train_ovr, ConvexityReport, LossKind, Model, ModelError, ProbeConfig,
    TrainConfig,
};
use crate::manifold::ProductPoint;
use crate::optim::OptimError;
use crate::synth::{inject_label_noise, make_cap_dataset, make_gmm_dataset, CapSpec, NegativeRegion, NoiseSpec, SynthError};

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub msg: String,
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, msg: msg.into() }
    }

    pub fn io(msg: impl Into<String>) -> Self {
        Self { code: EXIT_IO, msg: msg.into() }
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Self { code: EXIT_NUMERICAL, msg: msg.into() }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.msg)
    }
}

impl std::error::Error for CliError {}

impl From<DataError> for CliError {
    fn from(e: DataError) -> Self {
        match e {
            DataError::InvalidArgument(_) | DataError::ClassTooSmall { .. } | DataError::NotBinary(_) => {
                Self::usage(e.to_string())
            }
            _ => Self::io(e.to_string()),
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::Data(d) => d.into(),
            ModelError::InvalidConfig(_) | ModelError::Optim(OptimError::InvalidConfig(_)) => Self::usage(e.to_string()),
            ModelError::Io(_) | ModelError::Parse { .. } | ModelError::DimensionMismatch { .. } => Self::io(e.to_string()),
            _ => Self::numerical(e.to_string()),
        }
    }
}

impl From<SynthError> for CliError {
    fn from(e: SynthError) -> Self {
        match e {
            SynthError::Data(d) => d.into(),
            _ => Self::usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::io(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "horosvm", version, about = "Horospherical large-margin classification in the Poincare ball")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SynthKind {
    Gmm,
    Cap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LossArg {
    Perceptron,
    Horosvm,
}

impl From<LossArg> for LossKind {
    fn from(l: LossArg) -> Self {
        match l {
            LossArg::Perceptron => LossKind::Perceptron,
            LossArg::Horosvm => LossKind::HoroSvm,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NegativesArg {
    Anywhere,
    Opposite,
}

/// Optimizer options shared by the training commands.
#[derive(Debug, Clone, clap::Args)]
pub struct TrainArgs {
    /// Hinge weight C.
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    #[arg(long, default_value_t = 5)]
    pub restarts: usize,
    /// Iteration cap per optimizer run.
    #[arg(long, default_value_t = 2000)]
    pub max_iters: usize,
}

impl TrainArgs {
    fn config(&self, seed: u64) -> TrainConfig {
        let mut cfg = TrainConfig { c: self.c, seed, restarts: self.restarts, ..TrainConfig::default() };
        cfg.optim.max_iters = self.max_iters;
        cfg
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic dataset.
    Synth {
        #[arg(long, value_enum, default_value_t = SynthKind::Gmm)]
        kind: SynthKind,
        /// Number of mixture components (gmm only).
        #[arg(long, default_value_t = 2)]
        classes: usize,
        #[arg(long, default_value_t = 200)]
        per_class: usize,
        /// Variance of the centroid distribution (gmm).
        #[arg(long, default_value_t = 1.5)]
        centroid_var: f64,
        /// Variance of each cluster (gmm).
        #[arg(long, default_value_t = 1.0)]
        cluster_var: f64,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Busemann level of the separating horosphere (cap).
        #[arg(long, default_value_t = 2.0)]
        level: f64,
        /// Half-width of the empty band around the boundary (cap).
        #[arg(long, default_value_t = 0.3)]
        gap: f64,
        #[arg(long, value_enum, default_value_t = NegativesArg::Anywhere)]
        negatives: NegativesArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Train a classifier; multiclass data trains one-vs-rest.
    Train {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, value_enum, default_value_t = LossArg::Horosvm)]
        loss: LossArg,
        #[command(flatten)]
        train: TrainArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Keep at most ratio × minority-size samples of the majority class.
        #[arg(long)]
        downsample_ratio: Option<f64>,
        #[arg(long)]
        model_out: Option<PathBuf>,
    },
    /// Label a dataset with a trained model.
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        /// Output dataset; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Score a trained model against labeled data.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
    },
    /// K-fold cross-validation over a grid of C values.
    Cv {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "1,5,10")]
        c_grid: Vec<f64>,
        #[arg(long, default_value_t = 5)]
        folds: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        restarts: usize,
        #[arg(long, default_value_t = 2000)]
        max_iters: usize,
    },
    /// Label-noise robustness on regenerated mixture datasets.
    NoiseBench {
        #[arg(long, default_value_t = 100)]
        datasets: usize,
        #[arg(long, value_delimiter = ',', default_value = "0,0.05,0.1,0.15,0.2,0.25,0.3,0.35,0.4,0.45,0.5")]
        etas: Vec<f64>,
        #[command(flatten)]
        train: TrainArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// CSV output; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Midpoint convexity test of the single-sample loss in the direction.
    ProbeConvexity {
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 1000)]
        geodesics: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, value_enum, default_value_t = LossArg::Perceptron)]
        loss: LossArg,
        #[arg(long, default_value_t = 1.0)]
        mu: f64,
        #[arg(long, default_value_t = 0.0)]
        b: f64,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Summary of a fitted model.
#[derive(Debug, Clone, PartialEq)]
pub struct FitSummary {
    /// One entry per trained horosphere: (class, exact loss, margin, iterations).
    pub per_class: Vec<(String, f64, f64, usize)>,
}

/// Trains on `data`: a binary model for `1`/`-1` labels, one-vs-rest otherwise.
pub fn fit(data: &LabeledDataset, cfg: &TrainConfig, kind: LossKind) -> Result<(Model, FitSummary), ModelError> {
    if data.is_binary() {
        let binary = BinaryDataset::from_labeled(data)?;
        fit_binary(&binary, cfg, kind)
    } else {
        if kind != LossKind::HoroSvm {
            return Err(ModelError::InvalidConfig("multiclass data needs the horosvm loss".into()));
        }
        let (ovr, reports) = train_ovr(data, cfg)?;
        let per_class = ovr
            .classes()
            .iter()
            .zip(ovr.per_class())
            .zip(&reports)
            .map(|((class, clf), r)| {
                let binary = BinaryDataset::one_vs_rest(data, class);
                (class.clone(), r.final_loss, margin(&to_product(clf), &binary), r.iters_used)
            })
            .collect();
        Ok((Model::OneVsRest(ovr), FitSummary { per_class }))
    }
}

fn fit_binary(data: &BinaryDataset, cfg: &TrainConfig, kind: LossKind) -> Result<(Model, FitSummary), ModelError> {
    let (clf, report) = train_binary(data, cfg, kind)?;
    let m = margin(&to_product(&clf), data);
    let summary = FitSummary { per_class: vec![(POSITIVE_LABEL.into(), report.final_loss, m, report.iters_used)] };
    Ok((Model::Binary(clf), summary))
}

fn to_product(clf: &crate::model::HoroClassifier) -> ProductPoint {
    let h = clf.boundary();
    ProductPoint::new(h.mu(), h.omega().direction().to_vec(), h.b()).expect("valid horosphere")
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CvRow {
    pub c: f64,
    /// Macro-F1 of every validation fold, in fold order.
    pub fold_f1: Vec<f64>,
    pub mean: f64,
    pub std: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CvReport {
    pub rows: Vec<CvRow>,
    pub selected_c: f64,
}

impl CvReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            writeln!(out, "C = {}: macro_f1 = {:.4} ± {:.4}", row.c, row.mean, row.std).unwrap();
        }
        writeln!(out, "selected_c = {}", self.selected_c).unwrap();
        out
    }
}

/// Stratified `folds`-fold cross-validation of HoroSVM for every C in
/// `c_grid`. The same folds are used for every C; fold `k` trains with seed
/// `base.seed + k`. The selected C has the highest mean macro-F1, the
/// smaller C winning ties.
pub fn cross_validate(
    data: &LabeledDataset,
    c_grid: &[f64],
    folds: usize,
    base: &TrainConfig,
) -> Result<CvReport, ModelError> {
    if c_grid.is_empty() {
        return Err(ModelError::InvalidConfig("empty C grid".into()));
    }
    if folds < 2 {
        return Err(ModelError::InvalidConfig(format!("need at least 2 folds, got {folds}")));
    }
    let pairs = kfold(data, folds, true, base.seed)?;
    let mut rows = Vec::with_capacity(c_grid.len());
    for &c in c_grid {
        let fold_f1 = pairs
            .par_iter()
            .enumerate()
            .map(|(k, (train, val))| {
                let cfg = TrainConfig { c, seed: base.seed.wrapping_add(k as u64), ..base.clone() };
                let (model, _) = fit(train, &cfg, LossKind::HoroSvm)?;
                let predictions = model.predict(val.points())?;
                Ok(evaluate(&predictions, val.labels())?.macro_f1)
            })
            .collect::<Result<Vec<f64>, ModelError>>()?;
        let (mean, std) = mean_std(&fold_f1);
        log::info!("C = {c}: macro-F1 {mean:.4} ± {std:.4}");
        rows.push(CvRow { c, fold_f1, mean, std });
    }
    let mut order: Vec<&CvRow> = rows.iter().collect();
    order.sort_by(|a, b| b.mean.total_cmp(&a.mean).then(a.c.total_cmp(&b.c)));
    let selected_c = order[0].c;
    Ok(CvReport { rows, selected_c })
}

/// Mixture parameters and training setup of the label-noise benchmark.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseBenchConfig {
    pub datasets: usize,
    pub etas: Vec<f64>,
    pub seed: u64,
    pub train: TrainConfig,
    pub per_class: usize,
    pub centroid_sigma: f64,
    pub cluster_sigma: f64,
    pub dim: usize,
}

impl Default for NoiseBenchConfig {
    fn default() -> Self {
        Self {
            datasets: 100,
            etas: (0..=10).map(|k| k as f64 * 0.05).collect(),
            seed: 0,
            train: TrainConfig::default(),
            per_class: 200,
            centroid_sigma: 1.5f64.sqrt(),
            cluster_sigma: 1.0,
            dim: 2,
        }
    }
}

/// Positive-class F1 at one noise level, aggregated over datasets.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseRow {
    pub eta: f64,
    /// Per-dataset F1 on the noisy training labels.
    pub train_f1: Vec<f64>,
    /// Per-dataset F1 on the clean test split.
    pub test_f1: Vec<f64>,
    pub train_f1_mean: f64,
    pub test_f1_mean: f64,
    /// Standard deviation of the test F1 across datasets.
    pub std: f64,
}

pub fn noise_rows_to_csv(rows: &[NoiseRow]) -> String {
    let mut out = String::from("eta,train_f1_mean,test_f1_mean,std\n");
    for r in rows {
        writeln!(out, "{},{:.6},{:.6},{:.6}", r.eta, r.train_f1_mean, r.test_f1_mean, r.std).unwrap();
    }
    out
}

/// Dataset `i` is drawn with seed `cfg.seed + i`, split half/half per class
/// with the same seed, and each noise level flips balanced training labels
/// with that seed again. Datasets run concurrently.
pub fn noise_bench(cfg: &NoiseBenchConfig) -> Result<Vec<NoiseRow>, ModelError> {
    if cfg.datasets == 0 || cfg.etas.is_empty() {
        return Err(ModelError::InvalidConfig("need at least one dataset and one noise level".into()));
    }
    cfg.train.validate()?;
    let invalid = |e: SynthError| ModelError::InvalidConfig(e.to_string());
    let per_dataset = (0..cfg.datasets)
        .into_par_iter()
        .map(|i| {
            let seed = cfg.seed.wrapping_add(i as u64);
            let data = make_gmm_dataset(2, cfg.per_class, cfg.centroid_sigma, cfg.cluster_sigma, cfg.dim, seed)
                .map_err(invalid)?;
            let (train, test) = split(&data, 0.5, true, seed)?;
            cfg.etas
                .iter()
                .map(|&eta| {
                    let noisy = inject_label_noise(&train, NoiseSpec::new(eta, true).map_err(invalid)?, seed)
                        .map_err(invalid)?;
                    let train_cfg = TrainConfig { seed, ..cfg.train.clone() };
                    let (model, _) = fit_binary(&BinaryDataset::from_labeled(&noisy)?, &train_cfg, LossKind::HoroSvm)?;
                    let train_f1 = evaluate(&model.predict(noisy.points())?, noisy.labels())?.f1_of(POSITIVE_LABEL);
                    let test_f1 = evaluate(&model.predict(test.points())?, test.labels())?.f1_of(POSITIVE_LABEL);
                    log::debug!("dataset {i}, eta {eta}: train F1 {train_f1:.4}, test F1 {test_f1:.4}");
                    Ok((train_f1, test_f1))
                })
                .collect::<Result<Vec<_>, ModelError>>()
        })
        .collect::<Result<Vec<_>, ModelError>>()?;
    Ok(cfg
        .etas
        .iter()
        .enumerate()
        .map(|(j, &eta)| {
            let train_f1: Vec<f64> = per_dataset.iter().map(|d| d[j].0).collect();
            let test_f1: Vec<f64> = per_dataset.iter().map(|d| d[j].1).collect();
            let (train_f1_mean, _) = mean_std(&train_f1);
            let (test_f1_mean, std) = mean_std(&test_f1);
            NoiseRow { eta, train_f1, test_f1, train_f1_mean, test_f1_mean, std }
        })
        .collect())
}

/// Runs [`convexity_probe`] at `samples` points drawn uniformly in direction
/// and in radius `[0.05, 0.95)`, alternating labels `+1, −1`.
pub fn probe_many(samples: usize, dim: usize, cfg: &ProbeConfig) -> Result<Vec<(PoincarePoint, f64, ConvexityReport)>, ModelError> {
    if dim == 0 {
        return Err(ModelError::InvalidConfig("dim must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::with_capacity(samples);
    for s in 0..samples {
        let x = loop {
            let v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
            let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            if n > 0.0 {
                let r = rand::Rng::random_range(&mut rng, 0.05..0.95);
                break PoincarePoint::new(v.iter().map(|a| a / n * r).collect())?;
            }
        };
        let y = if s % 2 == 0 { 1.0 } else { -1.0 };
        let report = convexity_probe(&x, y, &ProbeConfig { seed: cfg.seed.wrapping_add(s as u64 + 1), ..cfg.clone() })?;
        out.push((x, y, report));
    }
    Ok(out)
}

fn read(path: &PathBuf) -> Result<LabeledDataset, CliError> {
    read_dataset(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, path: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::io(format!("{}: {e}", p.display()))),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

/// Parses `args` (program name first) and runs the command, writing
/// reports to `out`. Help and version requests print and succeed.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            write!(out, "{e}")?;
            return Ok(());
        }
        Err(e) => {
            let text = e.render().to_string();
            return Err(CliError::usage(text.strip_prefix("error: ").unwrap_or(&text)));
        }
    };
    execute(cli.command, out)
}

pub fn execute(command: Command, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Synth {
            kind,
            classes,
            per_class,
            centroid_var,
            cluster_var,
            dim,
            level,
            gap,
            negatives,
            seed,
            out: path,
        } => {
            if per_class == 0 || dim == 0 {
                return Err(CliError::usage("--per-class and --dim must be positive"));
            }
            let data = match kind {
                SynthKind::Gmm => {
                    if !(centroid_var > 0.0 && cluster_var > 0.0) {
                        return Err(CliError::usage("variances must be positive"));
                    }
                    make_gmm_dataset(classes, per_class, centroid_var.sqrt(), cluster_var.sqrt(), dim, seed)?
                }
                SynthKind::Cap => {
                    let mut spec = CapSpec::new(IdealPoint::axis(dim, 0), level, gap, per_class);
                    spec.negatives = match negatives {
                        NegativesArg::Anywhere => NegativeRegion::Anywhere,
                        NegativesArg::Opposite => NegativeRegion::OppositeHemisphere,
                    };
                    make_cap_dataset(&spec, seed)?
                }
            };
            write_dataset(&path, &data).map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
            writeln!(out, "wrote {} points to {}", data.len(), path.display())?;
        }
        Command::Train { data, loss, train, seed, downsample_ratio, model_out } => {
            let data = read(&data)?;
            let cfg = train.config(seed);
            let (model, summary) = match downsample_ratio {
                Some(ratio) => {
                    if !data.is_binary() {
                        return Err(CliError::usage("--downsample-ratio needs binary (1/-1) labels"));
                    }
                    let binary = downsample_majority(&BinaryDataset::from_labeled(&data)?, ratio, seed)?;
                    log::info!("downsampled to {} samples", binary.len());
                    fit_binary(&binary, &cfg, loss.into())?
                }
                None => fit(&data, &cfg, loss.into())?,
            };
            if let Model::OneVsRest(_) = model {
                for (class, l, m, it) in &summary.per_class {
                    writeln!(out, "class {class}: loss = {l:.10e}, margin = {m:.10e}, iterations = {it}")?;
                }
            } else {
                let (_, l, m, it) = &summary.per_class[0];
                writeln!(out, "loss = {l:.10e}")?;
                writeln!(out, "margin = {m:.10e}")?;
                writeln!(out, "iterations = {it}")?;
            }
            if let Some(path) = model_out {
                model.save(&path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
            }
        }
        Command::Predict { model, data, out: path } => {
            let model = Model::load(&model).map_err(|e| CliError::io(format!("{}: {e}", model.display())))?;
            let data = read(&data)?;
            let labels = model.predict(data.points())?;
            let labeled = data.with_labels(labels)?;
            emit(out, path.as_ref(), &format_dataset(&labeled))?;
        }
        Command::Eval { model, data } => {
            let model = Model::load(&model).map_err(|e| CliError::io(format!("{}: {e}", model.display())))?;
            let data = read(&data)?;
            let report = evaluate(&model.predict(data.points())?, data.labels())?;
            out.write_all(report.to_text().as_bytes())?;
        }
        Command::Cv { data, c_grid, folds, seed, restarts, max_iters } => {
            if folds < 2 {
                return Err(CliError::usage(format!("--folds must be at least 2, got {folds}")));
            }
            let data = read(&data)?;
            let args = TrainArgs { c: 1.0, restarts, max_iters };
            let report = cross_validate(&data, &c_grid, folds, &args.config(seed))?;
            out.write_all(report.to_text().as_bytes())?;
        }
        Command::NoiseBench { datasets, etas, train, seed, out: path } => {
            let cfg = NoiseBenchConfig { datasets, etas, seed, train: train.config(seed), ..NoiseBenchConfig::default() };
            let rows = noise_bench(&cfg)?;
            emit(out, path.as_ref(), &noise_rows_to_csv(&rows))?;
        }
        Command::ProbeConvexity { samples, geodesics, dim, loss, mu, b, tolerance, seed } => {
            let cfg = ProbeConfig { kind: loss.into(), mu, b, n_geodesics: geodesics, tolerance, seed, ..ProbeConfig::default() };
            let results = probe_many(samples, dim, &cfg)?;
            let (mut conv, mut conc) = (0, 0);
            for (i, (_, y, r)) in results.iter().enumerate() {
                writeln!(
                    out,
                    "sample {i} (y = {y}): convexity_violations = {}, concavity_violations = {}, worst_excess = {:.3e}/{:.3e}",
                    r.convexity_violations, r.concavity_violations, r.worst_convexity_excess, r.worst_concavity_excess
                )?;
                conv += r.convexity_violations;
                conc += r.concavity_violations;
            }
            writeln!(out, "total convexity_violations = {conv}")?;
            writeln!(out, "total concavity_violations = {conc}")?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::LabeledDataset;

    #[test]
    fn error_codes() {
        let nf = ModelError::Optim(OptimError::NonFiniteObjective { iteration: 3 });
        assert_eq!(CliError::from(nf).code, EXIT_NUMERICAL);
        assert_eq!(CliError::from(ModelError::InvalidConfig("x".into())).code, EXIT_USAGE);
        let io = DataError::Io(std::io::Error::new(std::io::ErrorKind::NotFound, "gone"));
        assert_eq!(CliError::from(ModelError::Data(io)).code, EXIT_IO);
        assert_eq!(CliError::from(DataError::Parse { line: 2, reason: "x".into() }).code, EXIT_IO);
    }

    #[test]
    fn mean_and_sample_std() {
        let (m, s) = mean_std(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((s - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(mean_std(&[0.7]), (0.7, 0.0));
    }

    fn separable() -> LabeledDataset {
        let spec = CapSpec::new(IdealPoint::axis(2, 0), 1.5, 0.4, 15);
        make_cap_dataset(&spec, 1).unwrap()
    }

    #[test]
    fn cv_ties_go_to_the_smaller_c() {
        let mut cfg = TrainConfig { restarts: 1, ..TrainConfig::default() };
        cfg.optim.max_iters = 300;
        let report = cross_validate(&separable(), &[10.0, 5.0, 1.0], 3, &cfg).unwrap();
        assert!(report.rows.iter().all(|r| r.mean == 1.0), "{report:?}");
        assert_eq!(report.selected_c, 1.0);
        assert_eq!(report.rows[0].fold_f1.len(), 3);
    }

    #[test]
    fn cv_rejects_bad_arguments() {
        let cfg = TrainConfig::default();
        assert!(matches!(cross_validate(&separable(), &[], 3, &cfg), Err(ModelError::InvalidConfig(_))));
        assert!(matches!(cross_validate(&separable(), &[1.0], 1, &cfg), Err(ModelError::InvalidConfig(_))));
    }

    #[test]
    fn noise_bench_is_deterministic() {
        let mut train = TrainConfig { restarts: 1, ..TrainConfig::default() };
        train.optim.max_iters = 100;
        let cfg = NoiseBenchConfig { datasets: 3, etas: vec![0.0, 0.2], per_class: 20, train, ..NoiseBenchConfig::default() };
        let a = noise_bench(&cfg).unwrap();
        assert_eq!(a.len(), 2);
        assert_eq!(a[1].train_f1.len(), 3);
        assert_eq!(a, noise_bench(&cfg).unwrap());
        assert!(noise_rows_to_csv(&a).starts_with("eta,train_f1_mean,test_f1_mean,std\n0,"));
    }

    #[test]
    fn run_prints_help() {
        let mut out = Vec::new();
        run(["horosvm", "help"], &mut out).unwrap();
        assert!(String::from_utf8(out).unwrap().contains("probe-convexity"));
        let err = run(["horosvm", "cv"], &mut Vec::new()).unwrap_err();
        assert_eq!(err.code, EXIT_USAGE);
    }
}
