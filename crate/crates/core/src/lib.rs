//! Multi-scale graph convolutions on skeleton sequences.
//!
//! The crate provides, in rough dependency order:
//!
//! - [`graph`]: skeleton topologies, adjacency normalization, and the
//!   exact-distance (`k`-adjacency) families that disentangle multi-scale
//!   aggregation.
//! - [`spacetime`]: sliding-window spatial-temporal graphs whose block
//!   adjacency gives every joint direct edges to its neighbors across all
//!   frames of a window.
//! - [`tensor`]: a dense tensor type with reverse-mode differentiation,
//!   plus the neural building blocks (temporal convolution, batch norm,
//!   softmax losses) and a finite-difference gradient checker.
//! - [`layers`]: the graph convolution operators (spatial, powered baseline,
//!   spatial-temporal), multi-scale temporal convolutions, and the full
//!   multi-pathway network.
//! - [`data`]: sequence ingestion, preprocessing, bone features, a synthetic
//!   action generator, and two-stream score fusion.
//! - [`train`]: a small SGD training harness with deterministic seeding.
//!
//! Everything numeric is generic over [`scalar::Scalar`] (`f32` or `f64`);
//! the aliases below fix common choices.

pub mod checkpoint;
pub mod data;
pub mod error;
pub mod graph;
pub mod layers;
pub mod optim;
pub mod scalar;
pub mod spacetime;
pub mod tensor;
pub mod train;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Double-precision tensor, the default for tests and verification.
pub type Tensor64 = tensor::Tensor<f64>;
/// Single-precision tensor for faster training runs.
pub type Tensor32 = tensor::Tensor<f32>;
/// Double-precision adjacency matrix.
pub type Adjacency64 = graph::AdjacencyMatrix<f64>;
/// Single-precision adjacency matrix.
pub type Adjacency32 = graph::AdjacencyMatrix<f32>;
