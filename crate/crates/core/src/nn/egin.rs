//! Edge-featured GIN layers.
//!
//! Every layer computes, for each node `i`,
//!
//! ```text
//! z_i = s * T(h_i, self_edge) + sum_{j in N(i)} T(h_j, x_ij)
//! h'_i = MLP(z_i)
//! ```
//!
//! where `s` is `1 + eps` (learnable, initialised to zero) or exactly `1`,
//! and the variant fixes `T` and the self edge:
//!
//! | variant          | `T`                        | self edge       |
//! |------------------|----------------------------|-----------------|
//! | `Egin`           | concatenation              | all zeros       |
//! | `EginC`          | flattened outer product    | all ones        |
//! | `EginE`          | concat with `MLP2(x)`      | `MLP2(zeros)`   |
//! | `GinDegenerate`  | `h` alone                  | none            |
//!
//! The graph embedding is the sum of final-layer node rows, followed by a
//! linear classifier.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use super::mlp::{Linear, Mlp, MlpCache};
use super::tensor::{axpy, dot, Tensor2};
use crate::error::ModelError;
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelVariant {
    Egin,
    EginC,
    EginE,
    /// Edge features removed from the tuple; recovers the plain GIN update.
    GinDegenerate,
}

impl ModelVariant {
    pub fn name(self) -> &'static str {
        match self {
            ModelVariant::Egin => "egin",
            ModelVariant::EginC => "egin-c",
            ModelVariant::EginE => "egin-e",
            ModelVariant::GinDegenerate => "gin",
        }
    }
}

impl fmt::Display for ModelVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "egin" => Ok(ModelVariant::Egin),
            "egin-c" => Ok(ModelVariant::EginC),
            "egin-e" => Ok(ModelVariant::EginE),
            "gin" | "gin-degenerate" => Ok(ModelVariant::GinDegenerate),
            _ => Err(format!("unknown model variant `{s}` (expected egin, egin-c, egin-e or gin)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub variant: ModelVariant,
    pub use_epsilon: bool,
    pub node_dim: usize,
    pub edge_dim: usize,
    pub hidden_dim: usize,
    /// Edge embedding width; used by `EginE` only.
    pub embedding_dim: usize,
    pub num_layers: usize,
    pub num_classes: usize,
    pub seed: u64,
}

impl ModelConfig {
    pub fn validate(&self) -> Result<(), ModelError> {
        let bad = |msg: &str| Err(ModelError::Config(msg.to_string()));
        if self.hidden_dim == 0 {
            return bad("hidden_dim must be positive");
        }
        if self.num_classes == 0 {
            return bad("num_classes must be positive");
        }
        if self.variant == ModelVariant::EginC && (self.edge_dim == 0 || self.node_dim == 0) {
            return bad("egin-c needs non-empty node and edge features");
        }
        if self.variant == ModelVariant::EginE && self.embedding_dim == 0 {
            return bad("egin-e needs a positive embedding_dim");
        }
        Ok(())
    }

    /// Width of the edge part of a tuple fed into layer MLPs.
    fn edge_part_dim(&self) -> usize {
        match self.variant {
            ModelVariant::Egin | ModelVariant::EginC => self.edge_dim,
            ModelVariant::EginE => self.embedding_dim,
            ModelVariant::GinDegenerate => 0,
        }
    }

    pub fn tuple_dim(&self, input_dim: usize) -> usize {
        match self.variant {
            ModelVariant::Egin | ModelVariant::EginE => input_dim + self.edge_part_dim(),
            ModelVariant::EginC => input_dim * self.edge_dim,
            ModelVariant::GinDegenerate => input_dim,
        }
    }
}

/// `h` followed by `e`.
pub fn tuple_concat(h: &[f64], e: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(h.len() + e.len());
    out.extend_from_slice(h);
    out.extend_from_slice(e);
    out
}

/// Flattened outer product `[h0*e0, h0*e1, .., h0*e(q-1), h1*e0, ..]`.
pub fn cross_update(h: &[f64], e: &[f64]) -> Result<Vec<f64>, ModelError> {
    if h.is_empty() || e.is_empty() {
        return Err(ModelError::EmptyCross);
    }
    Ok(h.iter().flat_map(|&a| e.iter().map(move |&b| a * b)).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EginLayer {
    pub mlp: Mlp,
    pub epsilon: f64,
    pub edge_mlp: Option<Mlp>,
}

impl EginLayer {
    fn zeros_like(&self) -> Self {
        EginLayer { mlp: self.mlp.zeros_like(), epsilon: 0.0, edge_mlp: self.edge_mlp.as_ref().map(Mlp::zeros_like) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EginModel {
    config: ModelConfig,
    pub layers: Vec<EginLayer>,
    pub classifier: Linear,
}

struct LayerCache {
    input: Tensor2,
    self_edge: Vec<f64>,
    edge_repr: Tensor2,
    mlp: MlpCache,
    edge_mlp: Option<(MlpCache, MlpCache)>,
}

/// Activations retained by [`EginModel::forward`] for the backward pass.
pub struct ForwardCache {
    graph: Graph,
    config: ModelConfig,
    layers: Vec<LayerCache>,
    embedding: Vec<f64>,
}

impl ForwardCache {
    pub fn embedding(&self) -> &[f64] {
        &self.embedding
    }
}

impl EginModel {
    /// Seeded initialisation; every epsilon starts at zero.
    pub fn new(config: ModelConfig) -> Result<Self, ModelError> {
        config.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut layers = Vec::with_capacity(config.num_layers);
        for k in 0..config.num_layers {
            let input = if k == 0 { config.node_dim } else { config.hidden_dim };
            let mlp = Mlp::init(config.tuple_dim(input), config.hidden_dim, config.hidden_dim, &mut rng);
            let edge_mlp = (config.variant == ModelVariant::EginE)
                .then(|| Mlp::init(config.edge_dim, config.embedding_dim, config.embedding_dim, &mut rng));
            layers.push(EginLayer { mlp, epsilon: 0.0, edge_mlp });
        }
        let readout_dim = if config.num_layers == 0 { config.node_dim } else { config.hidden_dim };
        let classifier = Linear::init(readout_dim, config.num_classes, &mut rng);
        Ok(EginModel { config, layers, classifier })
    }

    pub fn config(&self) -> &ModelConfig {
        &self.config
    }

    /// Same shape, all parameters zero. Used as a gradient accumulator.
    pub fn zeros_like(&self) -> Self {
        EginModel {
            config: self.config.clone(),
            layers: self.layers.iter().map(EginLayer::zeros_like).collect(),
            classifier: self.classifier.zeros_like(),
        }
    }

    fn scale(&self, layer: &EginLayer) -> f64 {
        if self.config.use_epsilon {
            1.0 + layer.epsilon
        } else {
            1.0
        }
    }

    fn tuple(&self, h: &[f64], e: &[f64]) -> Vec<f64> {
        match self.config.variant {
            ModelVariant::EginC => cross_update(h, e).expect("validated non-empty dims"),
            ModelVariant::GinDegenerate => h.to_vec(),
            _ => tuple_concat(h, e),
        }
    }

    /// Gradients of `T(h, e)` given `dL/dT`.
    fn tuple_backward(&self, h: &[f64], e: &[f64], dz: &[f64]) -> (Vec<f64>, Vec<f64>) {
        match self.config.variant {
            ModelVariant::EginC => {
                let q = e.len();
                let dh = (0..h.len()).map(|a| dot(&dz[a * q..(a + 1) * q], e)).collect();
                let de = (0..q).map(|b| (0..h.len()).map(|a| dz[a * q + b] * h[a]).sum()).collect();
                (dh, de)
            }
            ModelVariant::GinDegenerate => (dz.to_vec(), vec![0.0; e.len()]),
            _ => (dz[..h.len()].to_vec(), dz[h.len()..].to_vec()),
        }
    }

    fn check_graph(&self, g: &Graph) -> Result<(), ModelError> {
        if g.node_dim() != self.config.node_dim {
            return Err(ModelError::Dimension {
                what: "node features",
                expected: self.config.node_dim,
                found: g.node_dim(),
            });
        }
        if g.edge_dim() != self.config.edge_dim {
            return Err(ModelError::Dimension {
                what: "edge features",
                expected: self.config.edge_dim,
                found: g.edge_dim(),
            });
        }
        if g.node_count() == 0 {
            return Err(ModelError::EmptyGraph);
        }
        Ok(())
    }

    fn edge_inputs(g: &Graph) -> Tensor2 {
        let mut t = Tensor2::zeros(g.edge_count(), g.edge_dim());
        for e in 0..g.edge_count() {
            t.row_mut(e).copy_from_slice(g.edge_feature(e));
        }
        t
    }

    fn layer_forward(&self, layer: &EginLayer, g: &Graph, h: &Tensor2) -> Result<(Tensor2, LayerCache), ModelError> {
        let expected = self.config.tuple_dim(h.cols());
        if layer.mlp.input_dim() != expected {
            return Err(ModelError::Dimension {
                what: "layer input",
                expected: layer.mlp.input_dim(),
                found: expected,
            });
        }
        if h.rows() != g.node_count() {
            return Err(ModelError::Dimension { what: "node rows", expected: g.node_count(), found: h.rows() });
        }
        let (self_edge, edge_repr, edge_mlp) = match self.config.variant {
            ModelVariant::Egin => (vec![0.0; self.config.edge_dim], Self::edge_inputs(g), None),
            ModelVariant::EginC => (vec![1.0; self.config.edge_dim], Self::edge_inputs(g), None),
            ModelVariant::GinDegenerate => (Vec::new(), Tensor2::zeros(g.edge_count(), 0), None),
            ModelVariant::EginE => {
                let mlp2 = layer.edge_mlp.as_ref().ok_or(ModelError::CacheMismatch)?;
                let (emb, edge_cache) = mlp2.forward(&Self::edge_inputs(g));
                let (void, void_cache) = mlp2.forward(&Tensor2::zeros(1, self.config.edge_dim));
                (void.row(0).to_vec(), emb, Some((edge_cache, void_cache)))
            }
        };
        let scale = self.scale(layer);
        let mut z = Tensor2::zeros(g.node_count(), expected);
        for i in 0..g.node_count() {
            let row = z.row_mut(i);
            axpy(scale, &self.tuple(h.row(i), &self_edge), row);
            for &(j, e) in g.neighbors(i) {
                axpy(1.0, &self.tuple(h.row(j), edge_repr.row(e)), row);
            }
        }
        if !z.is_finite() {
            return Err(ModelError::NonFinite("aggregated tuples"));
        }
        let (out, mlp_cache) = layer.mlp.forward(&z);
        if !out.is_finite() {
            return Err(ModelError::NonFinite("layer output"));
        }
        Ok((out, LayerCache { input: h.clone(), self_edge, edge_repr, mlp: mlp_cache, edge_mlp }))
    }

    /// Node representations after every layer, then sum readout and the
    /// classifier.
    pub fn forward(&self, g: &Graph) -> Result<(Vec<f64>, ForwardCache), ModelError> {
        self.check_graph(g)?;
        let mut h = Tensor2::zeros(g.node_count(), g.node_dim());
        for i in 0..g.node_count() {
            h.row_mut(i).copy_from_slice(g.node_feature(i));
        }
        let mut caches = Vec::with_capacity(self.layers.len());
        for layer in &self.layers {
            let (next, cache) = self.layer_forward(layer, g, &h)?;
            caches.push(cache);
            h = next;
        }
        let embedding = readout_sum(&h)?;
        let logits = self.classifier.forward(&Tensor2::from_vec(1, embedding.len(), embedding.clone()));
        Ok((
            logits.values().to_vec(),
            ForwardCache { graph: g.clone(), config: self.config.clone(), layers: caches, embedding },
        ))
    }

    pub fn logits(&self, g: &Graph) -> Result<Vec<f64>, ModelError> {
        self.forward(g).map(|(l, _)| l)
    }

    /// Graph embedding before the classifier.
    pub fn embed(&self, g: &Graph) -> Result<Vec<f64>, ModelError> {
        self.forward(g).map(|(_, c)| c.embedding)
    }

    /// Predicted class; ties go to the lowest index.
    pub fn predict(&self, g: &Graph) -> Result<usize, ModelError> {
        Ok(argmax(&self.logits(g)?))
    }

    /// Reverse-mode gradients of a scalar loss given `dL/dlogits`.
    pub fn backward(&self, cache: &ForwardCache, logits_grad: &[f64]) -> Result<EginModel, ModelError> {
        if cache.config != self.config || cache.layers.len() != self.layers.len() {
            return Err(ModelError::CacheMismatch);
        }
        if logits_grad.len() != self.config.num_classes {
            return Err(ModelError::Dimension {
                what: "logits gradient",
                expected: self.config.num_classes,
                found: logits_grad.len(),
            });
        }
        let mut grads = self.zeros_like();
        let g = &cache.graph;
        let embedding = Tensor2::from_vec(1, cache.embedding.len(), cache.embedding.clone());
        let dembed = self.classifier.backward(
            &embedding,
            &Tensor2::from_vec(1, logits_grad.len(), logits_grad.to_vec()),
            &mut grads.classifier,
        );
        // Sum readout: every node row receives the embedding gradient.
        let mut dh = Tensor2::zeros(g.node_count(), dembed.cols());
        for i in 0..g.node_count() {
            dh.row_mut(i).copy_from_slice(dembed.row(0));
        }
        for (k, (layer, lc)) in self.layers.iter().zip(&cache.layers).enumerate().rev() {
            dh = self.layer_backward(layer, lc, g, &dh, &mut grads.layers[k])?;
        }
        Ok(grads)
    }

    fn layer_backward(
        &self,
        layer: &EginLayer,
        lc: &LayerCache,
        g: &Graph,
        dout: &Tensor2,
        grad: &mut EginLayer,
    ) -> Result<Tensor2, ModelError> {
        let dz = layer.mlp.backward(&lc.mlp, dout, &mut grad.mlp);
        let scale = self.scale(layer);
        let h = &lc.input;
        let mut dh = Tensor2::zeros(h.rows(), h.cols());
        let mut dedge = Tensor2::zeros(lc.edge_repr.rows(), lc.edge_repr.cols());
        let mut dself = vec![0.0; lc.self_edge.len()];
        for i in 0..g.node_count() {
            let dzi = dz.row(i);
            let (dh_self, de_self) = self.tuple_backward(h.row(i), &lc.self_edge, dzi);
            axpy(scale, &dh_self, dh.row_mut(i));
            axpy(scale, &de_self, &mut dself);
            if self.config.use_epsilon {
                grad.epsilon += dot(dzi, &self.tuple(h.row(i), &lc.self_edge));
            }
            for &(j, e) in g.neighbors(i) {
                let (dhj, de) = self.tuple_backward(h.row(j), lc.edge_repr.row(e), dzi);
                axpy(1.0, &dhj, dh.row_mut(j));
                axpy(1.0, &de, dedge.row_mut(e));
            }
        }
        if let (Some(mlp2), Some((edge_cache, void_cache))) = (&layer.edge_mlp, &lc.edge_mlp) {
            let gmlp2 = grad.edge_mlp.as_mut().ok_or(ModelError::CacheMismatch)?;
            mlp2.backward(edge_cache, &dedge, gmlp2);
            mlp2.backward(void_cache, &Tensor2::from_vec(1, dself.len(), dself), gmlp2);
        }
        Ok(dh)
    }

    pub fn parameter_count(&self) -> usize {
        self.flatten().len()
    }

    /// All trainable parameters in a fixed order: per layer the MLP, then
    /// epsilon (only when enabled), then the edge MLP; finally the
    /// classifier.
    pub fn flatten(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for layer in &self.layers {
            layer.mlp.flatten_into(&mut out);
            if self.config.use_epsilon {
                out.push(layer.epsilon);
            }
            if let Some(m) = &layer.edge_mlp {
                m.flatten_into(&mut out);
            }
        }
        self.classifier.flatten_into(&mut out);
        out
    }

    pub fn load_flat(&mut self, params: &[f64]) -> Result<(), ModelError> {
        let expected = self.parameter_count();
        if params.len() != expected {
            return Err(ModelError::Dimension { what: "parameter vector", expected, found: params.len() });
        }
        let use_eps = self.config.use_epsilon;
        let mut it = params.iter().copied();
        for layer in &mut self.layers {
            layer.mlp.load_from(&mut it).ok_or(ModelError::CacheMismatch)?;
            if use_eps {
                layer.epsilon = it.next().ok_or(ModelError::CacheMismatch)?;
            }
            if let Some(m) = &mut layer.edge_mlp {
                m.load_from(&mut it).ok_or(ModelError::CacheMismatch)?;
            }
        }
        self.classifier.load_from(&mut it).ok_or(ModelError::CacheMismatch)?;
        Ok(())
    }
}

/// Column sums of the final node representations.
pub fn readout_sum(h: &Tensor2) -> Result<Vec<f64>, ModelError> {
    if h.rows() == 0 {
        return Err(ModelError::EmptyGraph);
    }
    Ok(h.column_sums())
}

pub fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x > v[best] {
            best = i;
        }
    }
    best
}

/// Softmax cross-entropy and its gradient with respect to the logits.
pub fn cross_entropy(logits: &[f64], label: usize) -> (f64, Vec<f64>) {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|&l| (l - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    let loss = sum.ln() + max - logits[label];
    let mut grad: Vec<f64> = exps.iter().map(|e| e / sum).collect();
    grad[label] -= 1.0;
    (loss, grad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    pub(crate) fn config(variant: ModelVariant, use_epsilon: bool) -> ModelConfig {
        ModelConfig {
            variant,
            use_epsilon,
            node_dim: 1,
            edge_dim: 2,
            hidden_dim: 8,
            embedding_dim: 4,
            num_layers: 2,
            num_classes: 2,
            seed: 7,
        }
    }

    #[test]
    fn tuple_concat_examples() {
        assert_eq!(tuple_concat(&[1.0, 2.0], &[3.0]), vec![1.0, 2.0, 3.0]);
        assert_eq!(tuple_concat(&[4.0], &[0.0, 0.0]), vec![4.0, 0.0, 0.0]);
        assert_eq!(tuple_concat(&[], &[5.0]), vec![5.0]);
    }

    #[test]
    fn cross_update_examples() {
        assert_eq!(cross_update(&[2.0, 3.0], &[1.0]).unwrap(), vec![2.0, 3.0]);
        assert_eq!(cross_update(&[1.0, 2.0], &[3.0, 4.0]).unwrap(), vec![3.0, 4.0, 6.0, 8.0]);
        assert_eq!(cross_update(&[5.0, 6.0], &[1.0, 1.0]).unwrap(), vec![5.0, 5.0, 6.0, 6.0]);
        assert_eq!(cross_update(&[], &[1.0]), Err(ModelError::EmptyCross));
    }

    #[test]
    fn isolated_node_uses_only_the_self_term() {
        for variant in [ModelVariant::Egin, ModelVariant::EginC, ModelVariant::EginE] {
            let mut cfg = config(variant, true);
            cfg.num_layers = 1;
            let mut m = EginModel::new(cfg).unwrap();
            m.layers[0].epsilon = 0.3;
            let g = Graph::with_dims(1, 1, 2, vec![], vec![vec![2.0]], vec![]).unwrap();
            let (_, cache) = m.forward(&g).unwrap();
            let self_edge = &cache.layers[0].self_edge;
            let z = m.tuple(&[2.0], self_edge).iter().map(|v| 1.3 * v).collect::<Vec<_>>();
            let (expected, _) = m.layers[0].mlp.forward(&Tensor2::from_vec(1, z.len(), z));
            assert_eq!(cache.embedding, expected.values().to_vec());
        }
    }

    #[test]
    fn zero_weights_give_classifier_bias() {
        let mut cfg = config(ModelVariant::Egin, false);
        cfg.num_layers = 1;
        let mut m = EginModel::new(cfg).unwrap();
        let mut p = vec![0.0; m.parameter_count()];
        let n = p.len();
        p[n - 2] = 0.25;
        p[n - 1] = -0.5;
        m.load_flat(&p).unwrap();
        let g = Graph::with_dims(1, 1, 2, vec![], vec![vec![1.0]], vec![]).unwrap();
        assert_eq!(m.logits(&g).unwrap(), vec![0.25, -0.5]);
    }

    #[test]
    fn epsilon_zero_is_bitwise_neutral() {
        let (g, _) = fixtures::strictness_pair();
        for variant in [ModelVariant::Egin, ModelVariant::EginC, ModelVariant::EginE] {
            let with = EginModel::new(config(variant, true)).unwrap();
            let without = EginModel::new(config(variant, false)).unwrap();
            assert_eq!(with.logits(&g).unwrap(), without.logits(&g).unwrap());
        }
    }

    #[test]
    fn zero_upstream_gradient() {
        let (g, _) = fixtures::strictness_pair();
        let m = EginModel::new(config(ModelVariant::EginE, true)).unwrap();
        let (_, cache) = m.forward(&g).unwrap();
        let grads = m.backward(&cache, &[0.0, 0.0]).unwrap();
        assert!(grads.flatten().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn epsilon_gradient_vanishes_on_zero_inputs() {
        // One layer, zero node features: the self term is (0, delta) for
        // EGIN, which is the zero vector.
        let mut cfg = config(ModelVariant::Egin, true);
        cfg.num_layers = 1;
        let m = EginModel::new(cfg).unwrap();
        let g = Graph::with_dims(2, 1, 2, vec![(0, 1)], vec![vec![0.0]; 2], vec![vec![1.0, 0.0]]).unwrap();
        let (logits, cache) = m.forward(&g).unwrap();
        let (_, dl) = cross_entropy(&logits, 1);
        let grads = m.backward(&cache, &dl).unwrap();
        assert_eq!(grads.layers[0].epsilon, 0.0);
    }

    #[test]
    fn cache_mismatch_and_bad_dims() {
        let (g, _) = fixtures::strictness_pair();
        let a = EginModel::new(config(ModelVariant::Egin, false)).unwrap();
        let b = EginModel::new(config(ModelVariant::EginC, false)).unwrap();
        let (_, cache) = a.forward(&g).unwrap();
        assert!(matches!(b.backward(&cache, &[1.0, 0.0]), Err(ModelError::CacheMismatch)));
        let wrong = Graph::new(1, vec![], vec![vec![1.0, 2.0]], vec![]).unwrap();
        assert!(matches!(a.forward(&wrong), Err(ModelError::Dimension { .. })));
        let empty = Graph::with_dims(0, 1, 2, vec![], vec![], vec![]).unwrap();
        assert!(matches!(a.forward(&empty), Err(ModelError::EmptyGraph)));
        let mut cfg = config(ModelVariant::EginC, false);
        cfg.edge_dim = 0;
        assert!(matches!(EginModel::new(cfg), Err(ModelError::Config(_))));
    }

    #[test]
    fn readout_examples() {
        let h = Tensor2::from_vec(1, 2, vec![1.5, -2.0]);
        assert_eq!(readout_sum(&h).unwrap(), vec![1.5, -2.0]);
        assert!(readout_sum(&Tensor2::zeros(0, 2)).is_err());
    }

    #[test]
    fn argmax_ties_go_low() {
        assert_eq!(argmax(&[1.0, 1.0, 0.5]), 0);
        assert_eq!(argmax(&[0.0, 2.0, 2.0]), 1);
    }

    #[test]
    fn cross_entropy_gradient_sums_to_zero() {
        let (loss, g) = cross_entropy(&[1.0, 2.0, 0.5], 1);
        assert!(loss > 0.0);
        assert!(g.iter().sum::<f64>().abs() < 1e-12);
    }
}
