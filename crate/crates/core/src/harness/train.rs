use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::HarnessError;
use crate::graph::Graph;
use crate::nn::{cross_entropy, EginModel, ModelConfig, ModelVariant};

pub const HIDDEN_DIM_GRID: [usize; 3] = [32, 64, 128];
pub const EMBEDDING_DIM_GRID: [usize; 3] = [8, 16, 32];
/// Datasets up to this size train full-batch; larger ones use minibatches.
pub const FULL_BATCH_LIMIT: usize = 500;
pub const MINIBATCH_SIZE: usize = 32;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub variant: ModelVariant,
    pub use_epsilon: bool,
    pub hidden_dim: usize,
    pub embedding_dim: usize,
    pub num_layers: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    pub seed: u64,
    pub folds: usize,
    /// Forces a batch size; `None` picks full-batch or minibatch by dataset size.
    pub batch_size: Option<usize>,
    /// Allows dimensions outside the standard grids.
    pub off_grid: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            variant: ModelVariant::Egin,
            use_epsilon: false,
            hidden_dim: 32,
            embedding_dim: 16,
            num_layers: 3,
            epochs: 100,
            learning_rate: 0.01,
            seed: 0,
            folds: 10,
            batch_size: None,
            off_grid: false,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if !self.off_grid {
            if !HIDDEN_DIM_GRID.contains(&self.hidden_dim) {
                return Err(HarnessError::Config(format!(
                    "hidden dim {} not in {:?}",
                    self.hidden_dim, HIDDEN_DIM_GRID
                )));
            }
            if self.variant == ModelVariant::EginE && !EMBEDDING_DIM_GRID.contains(&self.embedding_dim) {
                return Err(HarnessError::Config(format!(
                    "embedding dim {} not in {:?}",
                    self.embedding_dim, EMBEDDING_DIM_GRID
                )));
            }
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(HarnessError::Config("learning rate must be positive".into()));
        }
        if self.folds < 2 {
            return Err(HarnessError::BadK(self.folds));
        }
        if self.batch_size == Some(0) {
            return Err(HarnessError::Config("batch size must be positive".into()));
        }
        Ok(())
    }

    pub fn model_config(&self, node_dim: usize, edge_dim: usize, num_classes: usize) -> ModelConfig {
        ModelConfig {
            variant: self.variant,
            use_epsilon: self.use_epsilon,
            node_dim,
            edge_dim,
            hidden_dim: self.hidden_dim,
            embedding_dim: self.embedding_dim,
            num_layers: self.num_layers,
            num_classes,
            seed: self.seed,
        }
    }
}

/// Adam with the usual defaults (0.9, 0.999, 1e-8).
pub struct Adam {
    lr: f64,
    beta1: f64,
    beta2: f64,
    eps: f64,
    m: Vec<f64>,
    v: Vec<f64>,
    t: i32,
}

impl Adam {
    pub fn new(len: usize, lr: f64) -> Self {
        Adam { lr, beta1: 0.9, beta2: 0.999, eps: 1e-8, m: vec![0.0; len], v: vec![0.0; len], t: 0 }
    }

    pub fn step(&mut self, params: &mut [f64], grads: &[f64]) {
        self.t += 1;
        let c1 = 1.0 - self.beta1.powi(self.t);
        let c2 = 1.0 - self.beta2.powi(self.t);
        for (((p, &g), m), v) in params.iter_mut().zip(grads).zip(&mut self.m).zip(&mut self.v) {
            *m = self.beta1 * *m + (1.0 - self.beta1) * g;
            *v = self.beta2 * *v + (1.0 - self.beta2) * g * g;
            *p -= self.lr * (*m / c1) / ((*v / c2).sqrt() + self.eps);
        }
    }
}

#[derive(Clone, Debug)]
pub struct TrainOutcome {
    pub model: EginModel,
    /// Mean training loss of each epoch, measured during the pass.
    pub epoch_losses: Vec<f64>,
}

/// Mean loss and summed-then-averaged gradient over a batch.
pub fn batch_gradient(model: &EginModel, graphs: &[&Graph], labels: &[usize]) -> Result<(f64, Vec<f64>), HarnessError> {
    let mut grad = vec![0.0; model.parameter_count()];
    let mut loss = 0.0;
    for (g, &y) in graphs.iter().zip(labels) {
        let (logits, cache) = model.forward(g)?;
        let (l, dl) = cross_entropy(&logits, y);
        loss += l;
        for (a, b) in grad.iter_mut().zip(model.backward(&cache, &dl)?.flatten()) {
            *a += b;
        }
    }
    let n = graphs.len() as f64;
    grad.iter_mut().for_each(|v| *v /= n);
    Ok((loss / n, grad))
}

/// Minimises mean cross-entropy with Adam. Deterministic given the seed.
pub fn train(
    config: &TrainConfig,
    graphs: &[&Graph],
    labels: &[usize],
    num_classes: usize,
) -> Result<TrainOutcome, HarnessError> {
    config.validate()?;
    let first = graphs.first().ok_or(HarnessError::EmptyTrainSet)?;
    let mut model = EginModel::new(config.model_config(first.node_dim(), first.edge_dim(), num_classes))?;
    let batch =
        config.batch_size.unwrap_or(if graphs.len() <= FULL_BATCH_LIMIT { graphs.len() } else { MINIBATCH_SIZE });
    let mut params = model.flatten();
    let mut adam = Adam::new(params.len(), config.learning_rate);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x005e_ed0f_7a1a);
    let mut order: Vec<usize> = (0..graphs.len()).collect();
    let mut epoch_losses = Vec::with_capacity(config.epochs);
    for epoch in 0..config.epochs {
        if batch < graphs.len() {
            order.shuffle(&mut rng);
        }
        let mut total = 0.0;
        for chunk in order.chunks(batch) {
            let bg: Vec<&Graph> = chunk.iter().map(|&i| graphs[i]).collect();
            let bl: Vec<usize> = chunk.iter().map(|&i| labels[i]).collect();
            let (loss, grad) = match batch_gradient(&model, &bg, &bl) {
                Ok(r) => r,
                Err(HarnessError::Model(crate::error::ModelError::NonFinite(_))) => {
                    return Err(HarnessError::NonFiniteLoss { epoch })
                }
                Err(e) => return Err(e),
            };
            if !loss.is_finite() || grad.iter().any(|g| !g.is_finite()) {
                return Err(HarnessError::NonFiniteLoss { epoch });
            }
            total += loss * chunk.len() as f64;
            adam.step(&mut params, &grad);
            model.load_flat(&params)?;
        }
        let mean = total / graphs.len() as f64;
        log::debug!("epoch {epoch}: loss {mean:.6}");
        epoch_losses.push(mean);
    }
    Ok(TrainOutcome { model, epoch_losses })
}

pub fn accuracy(model: &EginModel, graphs: &[&Graph], labels: &[usize]) -> Result<f64, HarnessError> {
    let mut correct = 0;
    for (g, &y) in graphs.iter().zip(labels) {
        if model.predict(g)? == y {
            correct += 1;
        }
    }
    Ok(correct as f64 / graphs.len().max(1) as f64)
}
