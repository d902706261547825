//! Dense tensors, MLPs with hand-written backward passes, and the
//! edge-featured GIN model family.

pub mod checkpoint;
pub mod egin;
pub mod gradcheck;
pub mod mlp;
pub mod tensor;

pub use checkpoint::Checkpoint;
pub use egin::{
    argmax, cross_entropy, cross_update, readout_sum, tuple_concat, EginLayer, EginModel, ForwardCache, ModelConfig,
    ModelVariant,
};
pub use gradcheck::grad_check;
pub use tensor::Tensor2;
