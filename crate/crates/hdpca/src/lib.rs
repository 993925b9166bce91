//! Principal component scores in the high-dimension, low-sample-size regime.
//!
//! When the dimension d is much larger than the sample size n and the
//! leading population eigenvalues grow with d, standard PCA still recovers
//! usable component scores, but they carry a systematic bias: sample scores
//! are stretched and prediction scores are shrunk by per-component factors
//! ρ_k = √(1 + τ²/λ_k(𝒲)), and both are rotated by a common orthogonal
//! matrix. This crate computes those quantities, estimates the scaling
//! factors from data by several routes (plug-in, three jackknife variants,
//! a random-matrix closed form, and a Procrustes best fit against known
//! truth), adjusts scores, and ships a Monte-Carlo harness that reproduces
//! the reference simulation tables at desk scale.
//!
//! Modules follow the pipeline:
//!
//! - [`numerics`] - dense matrix, Gram-trick thin SVD, symmetric
//!   eigensolver, seeded sampling.
//! - [`simulate`] - spike and mixture data generators with oracle truth.
//! - [`pca`] - fits, sample/prediction scores, leave-one-out refits.
//! - [`bias`] - theoretical bias quantities and the estimators.
//! - [`procrustes`] - diagonal-scale-plus-orthogonal alignment.
//! - [`experiments`] - repetition harness and reports.
//! - [`report`] - CSV export and import.
//! - [`cli`] - command-line front end (`simulate`, `scores`, `reproduce`).
//!
//! See the `examples/` directory for one runnable walkthrough per
//! capability.

pub mod error;
pub mod numerics;
pub mod simulate;
pub mod pca;
pub mod bias;
pub mod procrustes;
pub mod experiments;
pub mod report;
pub mod cli;

pub use error::{Error, Result};
