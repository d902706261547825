//! WL subtree histograms with a one-vs-rest logistic regression.

use std::collections::HashMap;

use super::cv::{cross_validate_with, CvReport, Learner, TaskMeta};
use super::train::Adam;
use crate::error::HarnessError;
use crate::graph::Graph;
use crate::tu::Dataset;
use crate::wl::{feature_vectors, Variant};

pub const BASELINE_EPOCHS: usize = 300;
pub const BASELINE_LR: f64 = 0.1;
pub const BASELINE_L2: f64 = 1e-4;

pub struct WlLearner {
    pub variant: Variant,
    pub depth: usize,
}

/// Sparse row as `(column, value)` pairs.
type Row = Vec<(usize, f64)>;

impl Learner for WlLearner {
    fn describe(&self) -> serde_json::Value {
        serde_json::json!({
            "name": format!("{}-features", self.variant),
            "variant": self.variant,
            "depth": self.depth,
            "epochs": BASELINE_EPOCHS,
            "learning_rate": BASELINE_LR,
            "l2": BASELINE_L2,
        })
    }

    fn fit_predict(
        &self,
        train: &[&Graph],
        train_labels: &[usize],
        test: &[&Graph],
        meta: TaskMeta,
    ) -> Result<Vec<usize>, HarnessError> {
        // Colors are unsupervised, so train and test graphs share one
        // refinement session; the vocabulary comes from training graphs only.
        let all: Vec<Graph> = train.iter().chain(test).map(|&g| g.clone()).collect();
        let features = feature_vectors(&all, self.variant, self.depth)?;
        let mut vocab: HashMap<u32, usize> = HashMap::new();
        for f in &features[..train.len()] {
            for &c in f.keys() {
                let next = vocab.len();
                vocab.entry(c).or_insert(next);
            }
        }
        let rows: Vec<Row> = features
            .iter()
            .map(|f| {
                let mut row: Row = f.iter().filter_map(|(c, &n)| vocab.get(c).map(|&j| (j, n as f64))).collect();
                row.sort_unstable_by_key(|&(j, _)| j);
                let norm = row.iter().map(|(_, v)| v * v).sum::<f64>().sqrt();
                if norm > 0.0 {
                    row.iter_mut().for_each(|(_, v)| *v /= norm);
                }
                row
            })
            .collect();
        let (train_rows, test_rows) = rows.split_at(train.len());
        let model = OneVsRest::fit(train_rows, train_labels, meta.num_classes, vocab.len());
        Ok(test_rows.iter().map(|r| model.predict(r)).collect())
    }
}

struct OneVsRest {
    /// Per class: weights followed by a bias.
    weights: Vec<Vec<f64>>,
}

impl OneVsRest {
    fn fit(rows: &[Row], labels: &[usize], num_classes: usize, dim: usize) -> Self {
        let weights = (0..num_classes)
            .map(|class| {
                let mut w = vec![0.0; dim + 1];
                let mut adam = Adam::new(dim + 1, BASELINE_LR);
                let n = rows.len() as f64;
                for _ in 0..BASELINE_EPOCHS {
                    let mut grad: Vec<f64> = w.iter().map(|&x| BASELINE_L2 * x).collect();
                    grad[dim] = 0.0;
                    for (row, &y) in rows.iter().zip(labels) {
                        let target = if y == class { 1.0 } else { 0.0 };
                        let err = (sigmoid(score(&w, row)) - target) / n;
                        for &(j, v) in row {
                            grad[j] += err * v;
                        }
                        grad[dim] += err;
                    }
                    adam.step(&mut w, &grad);
                }
                w
            })
            .collect();
        OneVsRest { weights }
    }

    fn predict(&self, row: &Row) -> usize {
        let scores: Vec<f64> = self.weights.iter().map(|w| score(w, row)).collect();
        crate::nn::argmax(&scores)
    }
}

fn score(w: &[f64], row: &Row) -> f64 {
    row.iter().map(|&(j, v)| w[j] * v).sum::<f64>() + w[w.len() - 1]
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

pub fn wl_baseline_cv(
    d: &Dataset,
    variant: Variant,
    depth: usize,
    k: usize,
    seed: u64,
) -> Result<CvReport, HarnessError> {
    cross_validate_with(d, &WlLearner { variant, depth }, k, seed, 1)
}
