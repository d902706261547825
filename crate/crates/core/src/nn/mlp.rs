use rand::Rng;
use serde::{Deserialize, Serialize};

use super::tensor::Tensor2;

/// Affine map `y = W x + b` with `W` stored as `out x in`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Linear {
    pub weight: Tensor2,
    pub bias: Vec<f64>,
}

impl Linear {
    /// Uniform init in `±1/sqrt(fan_in)`.
    pub fn init<R: Rng + ?Sized>(input: usize, output: usize, rng: &mut R) -> Self {
        let bound = if input == 0 { 1.0 } else { 1.0 / (input as f64).sqrt() };
        let mut draw = || rng.gen_range(-bound..=bound);
        let weight = Tensor2::from_vec(output, input, (0..output * input).map(|_| draw()).collect());
        let bias = (0..output).map(|_| draw()).collect();
        Linear { weight, bias }
    }

    pub fn zeros_like(&self) -> Self {
        Linear { weight: Tensor2::zeros(self.weight.rows(), self.weight.cols()), bias: vec![0.0; self.bias.len()] }
    }

    pub fn input_dim(&self) -> usize {
        self.weight.cols()
    }

    pub fn output_dim(&self) -> usize {
        self.weight.rows()
    }

    pub fn forward(&self, x: &Tensor2) -> Tensor2 {
        let mut y = x.matmul_t(&self.weight);
        for i in 0..y.rows() {
            for (v, b) in y.row_mut(i).iter_mut().zip(&self.bias) {
                *v += b;
            }
        }
        y
    }

    /// Accumulates parameter gradients into `grad` and returns `dL/dx`.
    pub fn backward(&self, x: &Tensor2, dy: &Tensor2, grad: &mut Linear) -> Tensor2 {
        grad.weight.add_assign(&dy.t_matmul(x));
        for (g, s) in grad.bias.iter_mut().zip(dy.column_sums()) {
            *g += s;
        }
        dy.matmul(&self.weight)
    }

    pub fn parameter_count(&self) -> usize {
        self.weight.values().len() + self.bias.len()
    }

    pub fn flatten_into(&self, out: &mut Vec<f64>) {
        out.extend_from_slice(self.weight.values());
        out.extend_from_slice(&self.bias);
    }

    pub fn load_from(&mut self, it: &mut impl Iterator<Item = f64>) -> Option<()> {
        for v in self.weight.values_mut().iter_mut().chain(self.bias.iter_mut()) {
            *v = it.next()?;
        }
        Some(())
    }
}

/// Two affine layers with a ReLU between them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mlp {
    pub first: Linear,
    pub second: Linear,
}

#[derive(Clone, Debug)]
pub struct MlpCache {
    input: Tensor2,
    pre: Tensor2,
    hidden: Tensor2,
}

impl Mlp {
    pub fn init<R: Rng + ?Sized>(input: usize, hidden: usize, output: usize, rng: &mut R) -> Self {
        Mlp { first: Linear::init(input, hidden, rng), second: Linear::init(hidden, output, rng) }
    }

    pub fn zeros_like(&self) -> Self {
        Mlp { first: self.first.zeros_like(), second: self.second.zeros_like() }
    }

    pub fn input_dim(&self) -> usize {
        self.first.input_dim()
    }

    pub fn output_dim(&self) -> usize {
        self.second.output_dim()
    }

    pub fn forward(&self, x: &Tensor2) -> (Tensor2, MlpCache) {
        let pre = self.first.forward(x);
        let mut hidden = pre.clone();
        for v in hidden.values_mut() {
            *v = v.max(0.0);
        }
        let out = self.second.forward(&hidden);
        (out, MlpCache { input: x.clone(), pre, hidden })
    }

    pub fn backward(&self, cache: &MlpCache, dout: &Tensor2, grad: &mut Mlp) -> Tensor2 {
        let mut dh = self.second.backward(&cache.hidden, dout, &mut grad.second);
        for (d, &p) in dh.values_mut().iter_mut().zip(cache.pre.values()) {
            if p <= 0.0 {
                *d = 0.0;
            }
        }
        self.first.backward(&cache.input, &dh, &mut grad.first)
    }

    pub fn parameter_count(&self) -> usize {
        self.first.parameter_count() + self.second.parameter_count()
    }

    pub fn flatten_into(&self, out: &mut Vec<f64>) {
        self.first.flatten_into(out);
        self.second.flatten_into(out);
    }

    pub fn load_from(&mut self, it: &mut impl Iterator<Item = f64>) -> Option<()> {
        self.first.load_from(it)?;
        self.second.load_from(it)
    }
}
