use affinet_core::community::CommunityError;
use affinet_core::experiments::ExperimentError;
use affinet_core::graph::GraphError;
use affinet_core::metrics::MetricError;
use affinet_core::AffinityError;
use thiserror::Error;

/// Failure classes mapped onto process exit codes.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, unparsable input or violated constraints (exit 1).
    #[error("{0}")]
    Invalid(String),
    /// Unreadable input or unwritable output (exit 2).
    #[error("{0}")]
    Io(String),
    /// Valid input the algorithms cannot handle, e.g. an edgeless graph (exit 3).
    #[error("{0}")]
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::Io(_) => 2,
            CliError::Domain(_) => 3,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::Io(_) | GraphError::Export(_) => CliError::Io(e.to_string()),
            GraphError::Domain(_) => CliError::Domain(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<AffinityError> for CliError {
    fn from(e: AffinityError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<CommunityError> for CliError {
    fn from(e: CommunityError) -> Self {
        match e {
            CommunityError::NoEdges | CommunityError::EmptyDendrogram => CliError::Domain(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<MetricError> for CliError {
    fn from(e: MetricError) -> Self {
        match e {
            MetricError::NoEdges => CliError::Domain(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        let class = match e.root() {
            ExperimentError::MissingData { .. } | ExperimentError::MissingLabels { .. } | ExperimentError::Io(_) => 2,
            ExperimentError::Graph(GraphError::Io(_)) => 2,
            ExperimentError::Community(CommunityError::NoEdges) | ExperimentError::Metric(MetricError::NoEdges) => 3,
            _ => 1,
        };
        let msg = e.to_string();
        match class {
            2 => CliError::Io(msg),
            3 => CliError::Domain(msg),
            _ => CliError::Invalid(msg),
        }
    }
}
