//! Modularity-based community detection: Louvain, Girvan-Newman and greedy
//! agglomeration. All three accept any undirected weighted graph, including
//! disconnected ones and affinity networks.

mod betweenness;
mod girvan_newman;
mod greedy;
mod louvain;
mod partition;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::WeightedGraph;

pub use betweenness::{edge_betweenness, PathMetric};
pub use girvan_newman::{girvan_newman, girvan_newman_run, GirvanNewmanRun};
pub use greedy::{greedy_modularity, greedy_modularity_run, GreedyRun, Merge};
pub use louvain::{louvain, louvain_run, LouvainConfig, LouvainRun};
pub use partition::{best_partition, Dendrogram, Partition, Snapshot};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CommunityError {
    #[error("community detection needs at least one edge (modularity is undefined when 2m = 0)")]
    NoEdges,
    #[error("dendrogram has no snapshots")]
    EmptyDendrogram,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("node sets differ: {0}")]
    NodeMismatch(String),
    #[error("unknown algorithm {0:?}; expected one of louvain, girvan_newman, greedy")]
    UnknownAlgorithm(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Louvain,
    GirvanNewman,
    Greedy,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Louvain, Algorithm::GirvanNewman, Algorithm::Greedy];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Louvain => "louvain",
            Algorithm::GirvanNewman => "girvan_newman",
            Algorithm::Greedy => "greedy",
        }
    }

    /// Label used in report tables.
    pub fn title(self) -> &'static str {
        match self {
            Algorithm::Louvain => "Louvain",
            Algorithm::GirvanNewman => "Girvan-Newman",
            Algorithm::Greedy => "Greedy Mod.",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = CommunityError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "louvain" => Ok(Algorithm::Louvain),
            "girvan_newman" | "gn" => Ok(Algorithm::GirvanNewman),
            "greedy" | "greedy_modularity" => Ok(Algorithm::Greedy),
            _ => Err(CommunityError::UnknownAlgorithm(s.to_owned())),
        }
    }
}

/// Settings shared by [`detect`].
#[derive(Debug, Clone, Default)]
pub struct DetectConfig {
    pub louvain: LouvainConfig,
    pub path_metric: PathMetric,
}

/// Runs `algorithm` and returns its final partition (the best dendrogram
/// snapshot for Girvan-Newman).
pub fn detect(g: &WeightedGraph, algorithm: Algorithm, cfg: &DetectConfig) -> Result<Partition, CommunityError> {
    match algorithm {
        Algorithm::Louvain => louvain(g, &cfg.louvain),
        Algorithm::GirvanNewman => best_partition(&girvan_newman(g, cfg.path_metric)?),
        Algorithm::Greedy => greedy_modularity(g),
    }
}

fn require_edges(g: &WeightedGraph) -> Result<(), CommunityError> {
    if g.edge_count() == 0 {
        Err(CommunityError::NoEdges)
    } else {
        Ok(())
    }
}

fn modularity_of(g: &WeightedGraph, p: &Partition) -> f64 {
    crate::metrics::modularity(g, p).expect("partition built over the graph's nodes")
}
