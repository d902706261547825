use super::egin::{cross_entropy, EginModel};
use crate::error::ModelError;
use crate::graph::Graph;

pub const DEFAULT_STEP: f64 = 1e-5;

/// Largest relative disagreement between the analytic gradient of the
/// cross-entropy loss and a central difference, over every parameter:
/// `|a - n| / max(|a|, |n|, 1e-8)`.
pub fn grad_check(model: &EginModel, g: &Graph, label: usize) -> Result<f64, ModelError> {
    grad_check_with_step(model, g, label, DEFAULT_STEP)
}

pub fn grad_check_with_step(model: &EginModel, g: &Graph, label: usize, step: f64) -> Result<f64, ModelError> {
    let (logits, cache) = model.forward(g)?;
    let (_, dlogits) = cross_entropy(&logits, label);
    let analytic = model.backward(&cache, &dlogits)?.flatten();

    let base = model.flatten();
    let mut probe = model.clone();
    let mut loss_at = |params: &[f64]| -> Result<f64, ModelError> {
        probe.load_flat(params)?;
        Ok(cross_entropy(&probe.logits(g)?, label).0)
    };
    let mut worst: f64 = 0.0;
    let mut params = base.clone();
    for k in 0..base.len() {
        params[k] = base[k] + step;
        let plus = loss_at(&params)?;
        params[k] = base[k] - step;
        let minus = loss_at(&params)?;
        params[k] = base[k];
        let numeric = (plus - minus) / (2.0 * step);
        let denom = analytic[k].abs().max(numeric.abs()).max(1e-8);
        worst = worst.max((analytic[k] - numeric).abs() / denom);
    }
    Ok(worst)
}
