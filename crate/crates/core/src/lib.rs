//! Magnitude, weighting, maximum diversity and diversifier of finite point
//! clouds in Euclidean space, executable checks of their continuity bounds,
//! and a time-series feature pipeline built on weighting integrals of
//! time-delay embeddings.

pub mod continuity;
pub mod datasets;
pub mod error;
pub mod experiments;
pub mod features;
pub mod linalg;
pub mod magnitude;
pub mod metric;
pub mod seed;
pub mod signal;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
pub use magnitude::{
    diversifier, diversifier_oracle, diversifier_with, kkt_residual, magnitude_profile, w_inner, weighting,
    weighting_with, MagnitudeResult, SolverConfig, WeightKind, WeightVector,
};
pub use metric::{dedup, distance_matrix, similarity_matrix, PointCloud, SimilarityMatrix};
