use serde::{Deserialize, Serialize};
use std::fmt;
use std::time::Instant;

use super::kfold::stratified_kfold;
use super::train::{train, TrainConfig};
use crate::error::HarnessError;
use crate::graph::Graph;
use crate::nn::ModelVariant;
use crate::tu::Dataset;

/// What a learner may know about the dataset beyond its training split.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TaskMeta {
    pub node_dim: usize,
    pub edge_dim: usize,
    pub num_classes: usize,
}

/// Fits on one training split and predicts the held-out graphs. Test
/// labels are never passed in.
pub trait Learner: Sync {
    fn describe(&self) -> serde_json::Value;

    fn fit_predict(
        &self,
        train: &[&Graph],
        train_labels: &[usize],
        test: &[&Graph],
        meta: TaskMeta,
    ) -> Result<Vec<usize>, HarnessError>;
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CvReport {
    pub dataset: String,
    pub learner: serde_json::Value,
    pub k: usize,
    pub seed: u64,
    pub fold_accuracies: Vec<f64>,
    pub mean: f64,
    pub std: f64,
    /// Always `"population"`: the deviation divides by `k`.
    pub std_kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_clock_secs: Option<f64>,
}

impl CvReport {
    pub fn from_folds(
        dataset: &str,
        learner: serde_json::Value,
        k: usize,
        seed: u64,
        fold_accuracies: Vec<f64>,
    ) -> Self {
        let (mean, std) = mean_std(&fold_accuracies);
        CvReport {
            dataset: dataset.to_string(),
            learner,
            k,
            seed,
            fold_accuracies,
            mean,
            std,
            std_kind: "population".to_string(),
            wall_clock_secs: None,
        }
    }

    /// JSON without the timing field, for byte-level comparisons.
    pub fn deterministic_json(&self) -> String {
        let mut c = self.clone();
        c.wall_clock_secs = None;
        serde_json::to_string_pretty(&c).expect("report serializes")
    }

    /// `"92.5 ± 3.1"`: percent, one decimal.
    pub fn summary(&self) -> String {
        format!("{:.1} ± {:.1}", 100.0 * self.mean, 100.0 * self.std)
    }
}

impl fmt::Display for CvReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.learner.get("name").and_then(|v| v.as_str()).unwrap_or("model").to_string();
        writeln!(f, "{:<18} {:<14}", "model", self.dataset)?;
        writeln!(f, "{:<18} {:<14}", name, self.summary())?;
        let folds: Vec<String> = self.fold_accuracies.iter().map(|a| format!("{:.1}", 100.0 * a)).collect();
        write!(f, "folds: {}", folds.join(" "))
    }
}

/// Arithmetic mean and population standard deviation.
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (0.0, 0.0);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Runs the learner on every fold. Folds may run on up to `jobs` threads;
/// results are assembled in fold order.
pub fn cross_validate_with(
    d: &Dataset,
    learner: &dyn Learner,
    k: usize,
    seed: u64,
    jobs: usize,
) -> Result<CvReport, HarnessError> {
    let start = Instant::now();
    let folds = stratified_kfold(&d.class_labels, k, seed)?;
    let meta = TaskMeta { node_dim: d.node_dim(), edge_dim: d.edge_dim(), num_classes: d.num_classes };
    let run_fold = |fold: &super::kfold::Fold| -> Result<f64, HarnessError> {
        let (train_graphs, train_labels) = d.subset(&fold.train);
        let (test_graphs, test_labels) = d.subset(&fold.test);
        let predictions = learner.fit_predict(&train_graphs, &train_labels, &test_graphs, meta)?;
        let correct = predictions.iter().zip(&test_labels).filter(|(p, y)| p == y).count();
        Ok(correct as f64 / test_labels.len() as f64)
    };
    let accuracies: Vec<f64> = if jobs > 1 {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| HarnessError::Config(e.to_string()))?;
        pool.install(|| folds.par_iter().map(run_fold).collect::<Result<Vec<_>, _>>())?
    } else {
        folds.iter().map(run_fold).collect::<Result<Vec<_>, _>>()?
    };
    let mut report = CvReport::from_folds(&d.name, learner.describe(), k, seed, accuracies);
    report.wall_clock_secs = Some(start.elapsed().as_secs_f64());
    Ok(report)
}

/// Trains an edge-featured GIN per fold.
pub struct EginLearner {
    pub config: TrainConfig,
}

impl Learner for EginLearner {
    fn describe(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(&self.config).expect("config serializes");
        let name = match (self.config.variant, self.config.use_epsilon) {
            (ModelVariant::GinDegenerate, _) => "GIN (no edges)".to_string(),
            (variant, true) => format!("{}-eps", variant.name().to_uppercase()),
            (variant, false) => variant.name().to_uppercase(),
        };
        v["name"] = serde_json::Value::String(name);
        v
    }

    fn fit_predict(
        &self,
        train_graphs: &[&Graph],
        train_labels: &[usize],
        test: &[&Graph],
        meta: TaskMeta,
    ) -> Result<Vec<usize>, HarnessError> {
        let outcome = train(&self.config, train_graphs, train_labels, meta.num_classes)?;
        test.iter().map(|g| outcome.model.predict(g).map_err(HarnessError::from)).collect()
    }
}

pub fn cross_validate(d: &Dataset, config: &TrainConfig, jobs: usize) -> Result<CvReport, HarnessError> {
    config.validate()?;
    cross_validate_with(d, &EginLearner { config: config.clone() }, config.folds, config.seed, jobs)
}

/// Always predicts the most frequent training class (lowest index on ties).
pub struct MajorityLearner;

impl Learner for MajorityLearner {
    fn describe(&self) -> serde_json::Value {
        serde_json::json!({ "name": "majority" })
    }

    fn fit_predict(
        &self,
        _train: &[&Graph],
        train_labels: &[usize],
        test: &[&Graph],
        meta: TaskMeta,
    ) -> Result<Vec<usize>, HarnessError> {
        let mut counts = vec![0usize; meta.num_classes];
        for &y in train_labels {
            counts[y] += 1;
        }
        let best = (0..counts.len()).fold(0, |b, c| if counts[c] > counts[b] { c } else { b });
        Ok(vec![best; test.len()])
    }
}
