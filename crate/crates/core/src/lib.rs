//! Simulation and inference for random graphs whose edges form a Markov
//! chain along a latent order of node pairs.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases at the crate root fix the precision used by the CLI and the
//! experiment harness.

pub mod assignment;
pub mod degrees;
pub mod dependence;
pub mod error;
pub mod estimation;
pub mod experiments;
pub mod generators;
pub mod graph;
pub mod matrix;
pub mod ordering;
pub mod rng;
pub mod scalar;
pub mod spectral;

pub use assignment::CommunityAssignment;
pub use error::{Error, Result};
pub use graph::{chain_from_graph, degrees_from_chain, graph_from_chain, EdgeChain, Graph, Truth};
pub use matrix::Matrix;
pub use ordering::{Ordering, OrderingKind};
pub use scalar::Scalar;

pub type Graph64 = Graph<f64>;
pub type Matrix64 = Matrix<f64>;
pub type MecltgParams64 = generators::MecltgParams<f64>;
pub type CsbmParams64 = generators::CsbmParams<f64>;
pub type GraphonSpec64 = generators::GraphonSpec<f64>;
pub type ModelSpec64 = generators::ModelSpec<f64>;
pub type BlockEstimate64 = estimation::BlockEstimate<f64>;
pub type ExperimentConfig64 = experiments::ExperimentConfig;
pub type Model64 = generators::Model<f64>;
