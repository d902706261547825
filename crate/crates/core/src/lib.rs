//! Edge-aware Weisfeiler-Lehman refinement and edge-featured graph
//! isomorphism networks.
//!
//! * [`graph`]: attributed undirected graphs and permutations
//! * [`tu`]: TU benchmark dataset reader and statistics
//! * [`wl`]: 1-WL, EWL and EWLEA color refinement, signatures, subtree features
//! * [`iso`]: exhaustive attributed isomorphism for small graphs
//! * [`nn`]: EGIN, EGIN-C, EGIN-E layers with exact gradients
//! * [`harness`]: stratified cross-validation and training
//! * [`properties`]: randomized checks relating the refiners and the oracle

pub mod error;
pub mod fixtures;
pub mod graph;
pub mod harness;
pub mod iso;
pub mod nn;
pub mod properties;
pub mod tu;
pub mod wl;

pub use error::{GraphError, HarnessError, IsoError, ModelError, TuError, WlError};
pub use graph::{Graph, GraphData, GraphWarning, Permutation};
pub use iso::{brute_force_isomorphic, IsoResult};
pub use tu::{dataset_stats, parse_tu_dataset, Dataset, DatasetStats};
pub use wl::{distinguishable, refine, wl_feature_vector, GraphSignature, RefinementTrace, Variant};
