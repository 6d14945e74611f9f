//! Affinity networks and modularity-based community detection.
//!
//! Build weighted [`graph::WeightedGraph`]s from edge lists or GML, turn them
//! into affinity networks with [`affinity`], partition them with the
//! algorithms in [`community`] and score the result with [`metrics`].
//! [`experiments`] runs parameter sweeps over the bundled benchmark datasets.

pub mod affinity;
pub mod community;
pub mod experiments;
pub mod graph;
pub mod io;
pub mod metrics;

pub use affinity::{AffinityError, AffinityFn, AffinityMatrix, CombinationParams, Provenance, Symmetrization};
pub use community::{Algorithm, CommunityError, Partition};
pub use graph::{GraphError, NodeLabels, WeightedGraph};
