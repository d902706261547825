//! Cross-validation, training, and the WL-feature baseline.

pub mod baseline;
pub mod cv;
pub mod kfold;
pub mod train;

pub use baseline::{wl_baseline_cv, WlLearner};
pub use cv::{
    cross_validate, cross_validate_with, mean_std, CvReport, EginLearner, Learner, MajorityLearner, TaskMeta,
};
pub use kfold::{stratified_kfold, Fold};
pub use train::{accuracy, train, Adam, TrainConfig, TrainOutcome, EMBEDDING_DIM_GRID, HIDDEN_DIM_GRID};
