//! Community detection for graphs that carry extra relational evidence:
//! several independent sources may each report positive (affinity) and
//! negative (discrepancy) information about the nodes, encoded as bipolar
//! fuzzy measures or directly as relation matrices.
//!
//! The crate provides:
//!
//! - fuzzy measures on finite ground sets with exact, restricted and
//!   sampled Shapley values ([`measure`]);
//! - the aggregation-operator toolkit (min/max/mean/OWA and the standard
//!   negation) ([`aggregation`]);
//! - the construction that turns measures into symmetric relation matrices
//!   and collapses all evidence into a single modularity matrix
//!   ([`pipeline`]);
//! - modularity, modularity gains, and the two-matrix local-moving
//!   optimizer, where one matrix supplies the move candidates and another
//!   the objective ([`community`]);
//! - a planted-partition benchmark generator with gold partitions
//!   ([`benchmark`]), NMI-based scoring ([`metrics`]) and a batch grid
//!   runner ([`reproduce`]);
//! - file formats for matrices, measures, configs and partitions ([`io`]).

pub mod aggregation;
pub mod benchmark;
pub mod community;
pub mod error;
pub mod graph;
pub mod io;
pub mod measure;
pub mod metrics;
pub mod pipeline;
pub mod reproduce;

pub use aggregation::{negate_matrix, AggregationClass, AggregatorSpec, NegationSpec};
pub use community::{
    coarsen, duo_louvain, louvain, modularity, multiple_bipolar_duo_louvain, Detection,
    LouvainResult, LouvainState, Partition, RelationSource,
};
pub use error::{Error, Result};
pub use graph::WeightedGraph;
pub use measure::{BipolarFuzzyMeasure, FuzzyMeasure, Game, GroundSet, SampledShapley};
pub use metrics::{entropy, mutual_information, nmi, ContingencyTable};
pub use pipeline::{
    aggregate_side, associated_matrix, bipolar_associated, build_modularity_matrix, build_multi,
    combine_bipolar, theta_combine, BipolarMultiGraph, ExtendedMultipleBipolarFuzzyGraph,
    PipelineConfig, ShapleyMode,
};
