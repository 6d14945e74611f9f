use std::env;
use std::fs;
use std::path::{Path, PathBuf};

use crate::graph::{GraphBuilder, NodeLabels, WeightedGraph};
use crate::io::{load_graph_file, parse_partition_csv};

use super::ExperimentError;

pub const DATASET_NAMES: [&str; 3] = ["zachary", "dolphin", "polbooks"];

/// Environment variable overriding where `dolphins.gml` and `polbooks.gml`
/// are looked up (default `./data`).
pub const DATA_DIR_VAR: &str = "AFFINET_DATA_DIR";

const NETDATA_URL: &str = "http://www-personal.umich.edu/~mejn/netdata/";

/// A benchmark graph with its ground-truth communities.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetBundle {
    pub name: String,
    pub graph: WeightedGraph,
    pub labels: NodeLabels,
    pub expected_k: usize,
}

impl DatasetBundle {
    pub fn new(name: impl Into<String>, graph: WeightedGraph, labels: NodeLabels) -> Result<Self, ExperimentError> {
        let name = name.into();
        if labels.len() != graph.node_count() {
            return Err(ExperimentError::Config(format!(
                "dataset {name}: {} labels for {} nodes",
                labels.len(),
                graph.node_count()
            )));
        }
        Ok(Self {
            expected_k: labels.class_count(),
            name,
            graph,
            labels,
        })
    }
}

const ZACHARY_EDGES: [(u8, u8); 78] = [
    (1, 2), (1, 3), (1, 4), (1, 5), (1, 6), (1, 7), (1, 8), (1, 9), (1, 11), (1, 12),
    (1, 13), (1, 14), (1, 18), (1, 20), (1, 22), (1, 32), (2, 3), (2, 4), (2, 8), (2, 14),
    (2, 18), (2, 20), (2, 22), (2, 31), (3, 4), (3, 8), (3, 9), (3, 10), (3, 14), (3, 28),
    (3, 29), (3, 33), (4, 8), (4, 13), (4, 14), (5, 7), (5, 11), (6, 7), (6, 11), (6, 17),
    (7, 17), (9, 31), (9, 33), (9, 34), (10, 34), (14, 34), (15, 33), (15, 34), (16, 33), (16, 34),
    (19, 33), (19, 34), (20, 34), (21, 33), (21, 34), (23, 33), (23, 34), (24, 26), (24, 28), (24, 30),
    (24, 33), (24, 34), (25, 26), (25, 28), (25, 32), (26, 32), (27, 30), (27, 34), (28, 34), (29, 32),
    (29, 34), (30, 33), (30, 34), (31, 33), (31, 34), (32, 33), (32, 34), (33, 34),
];

/// Faction after the split, by member number 1..=34 (`H` = instructor,
/// `O` = administrator).
const ZACHARY_FACTIONS: &str = "HHHHHHHHHOHHHHOOHHOHOHOOOOOOOOOOOO";

/// Zachary's karate club: 34 members labelled "1".."34", unit weights.
pub fn zachary() -> DatasetBundle {
    let mut b = GraphBuilder::new();
    for v in 1..=34 {
        b.add_node(&v.to_string());
    }
    for (u, v) in ZACHARY_EDGES {
        b.add_edge(usize::from(u) - 1, usize::from(v) - 1, 1.0)
            .expect("static edge list is valid");
    }
    let names: Vec<&str> = ZACHARY_FACTIONS
        .chars()
        .map(|c| if c == 'H' { "Mr. Hi" } else { "Officer" })
        .collect();
    DatasetBundle::new("zachary", b.build(), NodeLabels::from_values(&names)).expect("consistent sizes")
}

/// `$AFFINET_DATA_DIR`, or `./data`.
pub fn data_dir() -> PathBuf {
    env::var_os(DATA_DIR_VAR).map_or_else(|| PathBuf::from("data"), PathBuf::from)
}

/// Loads a dataset by name, reading file-based ones from [`data_dir`].
pub fn builtin_dataset(name: &str) -> Result<DatasetBundle, ExperimentError> {
    builtin_dataset_in(name, &data_dir())
}

/// Like [`builtin_dataset`] with an explicit data directory.
///
/// `polbooks.gml` carries its labels in the node `value` attribute. The
/// dolphin file usually has none, so they are read from a sidecar
/// `dolphins_labels.csv` (`node_label,community_id`) when the GML lacks them.
pub fn builtin_dataset_in(name: &str, dir: &Path) -> Result<DatasetBundle, ExperimentError> {
    match name.trim().to_ascii_lowercase().as_str() {
        "zachary" => Ok(zachary()),
        "dolphin" => load_file_dataset("dolphin", dir, "dolphins", 62),
        "polbooks" => load_file_dataset("polbooks", dir, "polbooks", 105),
        _ => Err(ExperimentError::UnknownDataset {
            name: name.to_owned(),
            valid: DATASET_NAMES.join(", "),
        }),
    }
}

fn load_file_dataset(name: &str, dir: &Path, stem: &str, expected_nodes: usize) -> Result<DatasetBundle, ExperimentError> {
    let path = dir.join(format!("{stem}.gml"));
    if !path.is_file() {
        return Err(ExperimentError::MissingData {
            name: name.to_owned(),
            path,
            hint: format!(
                "download {stem}.gml from {NETDATA_URL} into {} or point {DATA_DIR_VAR} at its directory",
                dir.display()
            ),
        });
    }
    let (graph, labels) = load_graph_file(&path)?;
    if graph.node_count() != expected_nodes {
        log::warn!(
            "{}: expected {expected_nodes} nodes, found {}",
            path.display(),
            graph.node_count()
        );
    }
    let labels = match labels {
        Some(labels) => labels,
        None => sidecar_labels(name, dir, stem, &graph)?,
    };
    DatasetBundle::new(name, graph, labels)
}

fn sidecar_labels(name: &str, dir: &Path, stem: &str, g: &WeightedGraph) -> Result<NodeLabels, ExperimentError> {
    let path = dir.join(format!("{stem}_labels.csv"));
    if !path.is_file() {
        return Err(ExperimentError::MissingLabels {
            name: name.to_owned(),
            hint: format!(
                "{stem}.gml has no `value` attributes; supply ground truth in {} as node_label,community_id rows",
                path.display()
            ),
        });
    }
    let rows = parse_partition_csv(&fs::read_to_string(&path)?)?;
    let mut values: Vec<Option<String>> = vec![None; g.node_count()];
    for (node, class) in rows {
        let v = g.require(&node)?;
        if values[v].replace(class).is_some() {
            return Err(ExperimentError::Config(format!("{}: node {node} listed twice", path.display())));
        }
    }
    let values = values
        .into_iter()
        .enumerate()
        .map(|(v, c)| c.ok_or_else(|| ExperimentError::Config(format!("{}: node {} has no label", path.display(), g.label(v)))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(NodeLabels::from_values(&values))
}
