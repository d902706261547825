//! JSON model checkpoints.
//!
//! ```json
//! {
//!   "format": "edgewl-egin",
//!   "version": 1,
//!   "config": { "variant": "egin-e", "use_epsilon": true, "node_dim": 7, ... , "seed": 0 },
//!   "parameters": [0.12, -0.3, ...]
//! }
//! ```
//!
//! `parameters` follows [`EginModel::flatten`]. Floats are written in
//! shortest round-trip form, so save/load is bit-exact.

use serde::{Deserialize, Serialize};

use super::egin::{EginModel, ModelConfig};
use crate::error::ModelError;

pub const FORMAT: &str = "edgewl-egin";
pub const VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub format: String,
    pub version: u32,
    pub config: ModelConfig,
    pub parameters: Vec<f64>,
}

impl Checkpoint {
    pub fn from_model(model: &EginModel) -> Self {
        Checkpoint {
            format: FORMAT.to_string(),
            version: VERSION,
            config: model.config().clone(),
            parameters: model.flatten(),
        }
    }

    pub fn to_model(&self) -> Result<EginModel, ModelError> {
        if self.format != FORMAT || self.version != VERSION {
            return Err(ModelError::Checkpoint(format!("unsupported format {} v{}", self.format, self.version)));
        }
        if self.parameters.iter().any(|v| !v.is_finite()) {
            return Err(ModelError::NonFinite("checkpoint parameters"));
        }
        let mut model = EginModel::new(self.config.clone())?;
        model.load_flat(&self.parameters)?;
        Ok(model)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("checkpoint serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, ModelError> {
        serde_json::from_str(s).map_err(|e| ModelError::Checkpoint(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nn::egin::ModelVariant;

    #[test]
    fn rejects_foreign_format() {
        let cfg = ModelConfig {
            variant: ModelVariant::Egin,
            use_epsilon: false,
            node_dim: 2,
            edge_dim: 2,
            hidden_dim: 4,
            embedding_dim: 0,
            num_layers: 1,
            num_classes: 2,
            seed: 1,
        };
        let mut c = Checkpoint::from_model(&EginModel::new(cfg).unwrap());
        c.format = "other".into();
        assert!(c.to_model().is_err());
        c.format = FORMAT.into();
        c.parameters.pop();
        assert!(matches!(c.to_model(), Err(ModelError::Dimension { .. })));
    }
}
