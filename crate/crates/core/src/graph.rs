//! Undirected weighted graph with dense node indices.
//!
//! External node labels are mapped to indices `0..n` in order of first
//! appearance. Adjacency lists are kept sorted by neighbor index so that every
//! traversal is deterministic.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: edge weight must be positive and finite, got {weight}")]
    Weight { line: usize, weight: f64 },
    #[error("unknown node {0}")]
    UnknownNode(String),
    #[error("{0}")]
    Domain(String),
    #[error("cannot export graph: {0}")]
    Export(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Accumulates nodes and edges, merging duplicate edges by summing weights.
#[derive(Debug, Default, Clone)]
pub struct GraphBuilder {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    edges: BTreeMap<(usize, usize), f64>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builder pre-populated with the node set of `g` and no edges.
    pub fn with_nodes_of(g: &WeightedGraph) -> Self {
        Self {
            labels: g.labels.clone(),
            index: g.index.clone(),
            edges: BTreeMap::new(),
        }
    }

    /// Returns the index of `label`, inserting it if absent.
    pub fn add_node(&mut self, label: &str) -> usize {
        if let Some(&i) = self.index.get(label) {
            return i;
        }
        let i = self.labels.len();
        self.labels.push(label.to_owned());
        self.index.insert(label.to_owned(), i);
        i
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    /// Adds `w` to the weight of the unordered pair `{u, v}`.
    ///
    /// Self-loops are dropped with a warning and reported as `Ok(false)`.
    pub fn add_edge(&mut self, u: usize, v: usize, w: f64) -> Result<bool, GraphError> {
        let n = self.labels.len();
        if u >= n {
            return Err(GraphError::UnknownNode(u.to_string()));
        }
        if v >= n {
            return Err(GraphError::UnknownNode(v.to_string()));
        }
        if !(w.is_finite() && w > 0.0) {
            return Err(GraphError::Weight { line: 0, weight: w });
        }
        if u == v {
            log::warn!("dropping self-loop on node {}", self.labels[u]);
            return Ok(false);
        }
        let key = if u < v { (u, v) } else { (v, u) };
        *self.edges.entry(key).or_insert(0.0) += w;
        Ok(true)
    }

    pub fn add_labeled_edge(&mut self, a: &str, b: &str, w: f64) -> Result<bool, GraphError> {
        let u = self.add_node(a);
        let v = self.add_node(b);
        self.add_edge(u, v, w)
    }

    pub fn build(self) -> WeightedGraph {
        let n = self.labels.len();
        let mut adjacency = vec![Vec::new(); n];
        for (&(u, v), &w) in &self.edges {
            adjacency[u].push((v, w));
            adjacency[v].push((u, w));
        }
        for row in &mut adjacency {
            row.sort_unstable_by_key(|&(v, _)| v);
        }
        WeightedGraph {
            labels: self.labels,
            index: self.index,
            adjacency,
            edge_count: self.edges.len(),
        }
    }
}

/// Node-labelled undirected graph with strictly positive edge weights and no
/// self-loops. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    adjacency: Vec<Vec<(usize, f64)>>,
    edge_count: usize,
}

impl WeightedGraph {
    /// Graph on nodes labelled `"0".."n-1"` with the given edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self, GraphError> {
        let mut b = GraphBuilder::new();
        for i in 0..n {
            b.add_node(&i.to_string());
        }
        for &(u, v, w) in edges {
            b.add_edge(u, v, w)?;
        }
        Ok(b.build())
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn require(&self, label: &str) -> Result<usize, GraphError> {
        self.index_of(label)
            .ok_or_else(|| GraphError::UnknownNode(label.to_owned()))
    }

    /// Neighbors of `v` with edge weights, sorted by neighbor index.
    pub fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.adjacency[v]
    }

    /// `C(u, v)`; zero when the pair is not adjacent.
    pub fn weight(&self, u: usize, v: usize) -> f64 {
        let row = &self.adjacency[u];
        match row.binary_search_by_key(&v, |&(x, _)| x) {
            Ok(i) => row[i].1,
            Err(_) => 0.0,
        }
    }

    fn check(&self, v: usize) -> Result<(), GraphError> {
        if v < self.node_count() {
            Ok(())
        } else {
            Err(GraphError::UnknownNode(v.to_string()))
        }
    }

    /// Number of incident edges, ignoring weights.
    pub fn degree(&self, v: usize) -> Result<usize, GraphError> {
        self.check(v)?;
        Ok(self.adjacency[v].len())
    }

    /// Sum of incident edge weights.
    pub fn strength(&self, v: usize) -> Result<f64, GraphError> {
        self.check(v)?;
        Ok(self.adjacency[v].iter().map(|&(_, w)| w).sum())
    }

    /// Fraction of the `n(n-1)/2` possible node pairs that are adjacent.
    pub fn density(&self) -> Result<f64, GraphError> {
        let n = self.node_count();
        if n < 2 {
            return Err(GraphError::Domain(format!(
                "density needs at least 2 nodes, graph has {n}"
            )));
        }
        Ok(self.edge_count as f64 / (n * (n - 1) / 2) as f64)
    }

    /// Edges as `(u, v, w)` with `u < v`, in ascending `(u, v)` order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, row)| {
            row.iter()
                .filter(move |&&(v, _)| u < v)
                .map(move |&(v, w)| (u, v, w))
        })
    }

    /// Total edge weight `m` (each edge counted once).
    pub fn total_weight(&self) -> f64 {
        self.edges().map(|(_, _, w)| w).sum()
    }

    /// Dense symmetric adjacency matrix `C`.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.node_count();
        let mut m = vec![vec![0.0; n]; n];
        for (u, v, w) in self.edges() {
            m[u][v] = w;
            m[v][u] = w;
        }
        m
    }

    /// Same topology with every weight set to 1.
    pub fn binarized(&self) -> WeightedGraph {
        let mut g = self.clone();
        for row in &mut g.adjacency {
            for e in row.iter_mut() {
                e.1 = 1.0;
            }
        }
        g
    }
}

/// Ground-truth community label for every node of a companion graph.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeLabels {
    classes: Vec<usize>,
    names: Vec<String>,
}

impl NodeLabels {
    /// Maps raw per-node values to class ids in order of first appearance.
    pub fn from_values<S: AsRef<str>>(values: &[S]) -> Self {
        let mut names: Vec<String> = Vec::new();
        let mut lookup: HashMap<String, usize> = HashMap::new();
        let classes = values
            .iter()
            .map(|v| {
                let v = v.as_ref();
                *lookup.entry(v.to_owned()).or_insert_with(|| {
                    names.push(v.to_owned());
                    names.len() - 1
                })
            })
            .collect();
        Self { classes, names }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_of(&self, v: usize) -> usize {
        self.classes[v]
    }

    pub fn classes(&self) -> &[usize] {
        &self.classes
    }

    /// Raw value of each class id.
    pub fn class_names(&self) -> &[String] {
        &self.names
    }

    pub fn class_count(&self) -> usize {
        self.names.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> WeightedGraph {
        WeightedGraph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap()
    }

    #[test]
    fn triangle_degree_and_strength() {
        let g = triangle();
        for v in 0..3 {
            assert_eq!(g.degree(v).unwrap(), 2);
            assert_eq!(g.strength(v).unwrap(), 2.0);
        }
        assert_eq!(g.density().unwrap(), 1.0);
    }

    #[test]
    fn isolated_node() {
        let g = WeightedGraph::from_edges(3, &[(0, 1, 1.0)]).unwrap();
        assert_eq!(g.degree(2).unwrap(), 0);
        assert_eq!(g.strength(2).unwrap(), 0.0);
    }

    #[test]
    fn strength_sums_weights() {
        let g = WeightedGraph::from_edges(3, &[(0, 1, 2.0), (0, 2, 3.0)]).unwrap();
        assert_eq!(g.strength(0).unwrap(), 5.0);
        assert_eq!(g.degree(0).unwrap(), 2);
    }

    #[test]
    fn path_density() {
        let g = WeightedGraph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        assert!((g.density().unwrap() - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn density_needs_two_nodes() {
        let g = WeightedGraph::from_edges(1, &[]).unwrap();
        assert!(matches!(g.density(), Err(GraphError::Domain(_))));
    }

    #[test]
    fn unknown_node_lookup() {
        let g = triangle();
        assert!(matches!(g.degree(3), Err(GraphError::UnknownNode(_))));
        assert!(matches!(g.strength(7), Err(GraphError::UnknownNode(_))));
        assert!(g.require("nope").is_err());
    }

    #[test]
    fn builder_merges_and_drops_loops() {
        let mut b = GraphBuilder::new();
        b.add_labeled_edge("a", "b", 2.0).unwrap();
        b.add_labeled_edge("b", "a", 1.0).unwrap();
        assert!(!b.add_labeled_edge("a", "a", 1.0).unwrap());
        let g = b.build();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.weight(0, 1), 3.0);
        assert_eq!(g.weight(1, 0), 3.0);
    }

    #[test]
    fn builder_rejects_bad_weights() {
        let mut b = GraphBuilder::new();
        assert!(b.add_labeled_edge("a", "b", 0.0).is_err());
        assert!(b.add_labeled_edge("a", "b", -1.0).is_err());
        assert!(b.add_labeled_edge("a", "b", f64::NAN).is_err());
    }

    #[test]
    fn labels_first_appearance() {
        let l = NodeLabels::from_values(&["n", "c", "n", "l"]);
        assert_eq!(l.classes(), &[0, 1, 0, 2]);
        assert_eq!(l.class_count(), 3);
        assert_eq!(l.class_names()[2], "l");
    }
}
