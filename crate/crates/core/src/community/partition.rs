use std::collections::HashMap;
use std::fmt::Write as _;

use crate::graph::{NodeLabels, WeightedGraph};

use super::CommunityError;

/// Assignment of every node to exactly one community; ids are dense in
/// `0..k` and numbered in order of first appearance.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    assignment: Vec<usize>,
    k: usize,
}

impl Partition {
    /// Relabels arbitrary community ids densely by first appearance.
    pub fn from_assignment(raw: &[usize]) -> Self {
        let mut ids: HashMap<usize, usize> = HashMap::new();
        let assignment = raw
            .iter()
            .map(|c| {
                let next = ids.len();
                *ids.entry(*c).or_insert(next)
            })
            .collect();
        Self {
            assignment,
            k: ids.len(),
        }
    }

    /// Builds a partition over `nodes` from `(node_label, community)` pairs.
    /// The pairs must name every node exactly once.
    pub fn from_labelled<S: AsRef<str>>(
        pairs: &[(S, S)],
        nodes: &[String],
    ) -> Result<Self, CommunityError> {
        let index: HashMap<&str, usize> = nodes
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect();
        let mut community: Vec<Option<&str>> = vec![None; nodes.len()];
        for (node, c) in pairs {
            let node = node.as_ref();
            let &i = index
                .get(node)
                .ok_or_else(|| CommunityError::NodeMismatch(format!("unknown node {node:?}")))?;
            if community[i].replace(c.as_ref()).is_some() {
                return Err(CommunityError::NodeMismatch(format!(
                    "node {node:?} listed twice"
                )));
            }
        }
        let mut names: HashMap<&str, usize> = HashMap::new();
        let mut raw = Vec::with_capacity(nodes.len());
        for (i, c) in community.into_iter().enumerate() {
            let c = c.ok_or_else(|| {
                CommunityError::NodeMismatch(format!("node {:?} has no community", nodes[i]))
            })?;
            let next = names.len();
            raw.push(*names.entry(c).or_insert(next));
        }
        Ok(Self::from_assignment(&raw))
    }

    pub fn singletons(n: usize) -> Self {
        Self {
            assignment: (0..n).collect(),
            k: n,
        }
    }

    pub fn whole(n: usize) -> Self {
        Self {
            assignment: vec![0; n],
            k: usize::from(n > 0),
        }
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    /// Number of communities.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn community_of(&self, v: usize) -> usize {
        self.assignment[v]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Members of each community, ascending.
    pub fn communities(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k];
        for (v, &c) in self.assignment.iter().enumerate() {
            out[c].push(v);
        }
        out
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.k];
        for &c in &self.assignment {
            out[c] += 1;
        }
        out
    }

    /// `node_label,community_id` rows in ascending node index.
    pub fn to_csv(&self, g: &WeightedGraph) -> String {
        crate::io::partition_csv_string(g, self)
    }
}

impl From<&NodeLabels> for Partition {
    fn from(labels: &NodeLabels) -> Self {
        Partition::from_assignment(labels.classes())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub partition: Partition,
    pub modularity: f64,
}

/// Partitions recorded at each split or merge event, in event order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Dendrogram {
    snapshots: Vec<Snapshot>,
}

impl Dendrogram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, partition: Partition, modularity: f64) {
        self.snapshots.push(Snapshot {
            partition,
            modularity,
        });
    }

    pub fn snapshots(&self) -> &[Snapshot] {
        &self.snapshots
    }

    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    /// Highest modularity; ties go to fewer communities, then the earlier
    /// snapshot.
    pub fn best(&self) -> Result<&Snapshot, CommunityError> {
        let mut best: Option<&Snapshot> = None;
        for s in &self.snapshots {
            best = match best {
                None => Some(s),
                Some(b) if s.modularity > b.modularity => Some(s),
                Some(b) if s.modularity == b.modularity && s.partition.k() < b.partition.k() => Some(s),
                keep => keep,
            };
        }
        best.ok_or(CommunityError::EmptyDendrogram)
    }

    /// `snapshot_index,k,modularity` rows.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("snapshot_index,k,modularity\n");
        for (i, snap) in self.snapshots.iter().enumerate() {
            writeln!(s, "{},{},{:.6}", i, snap.partition.k(), snap.modularity).unwrap();
        }
        s
    }
}

pub fn best_partition(d: &Dendrogram) -> Result<Partition, CommunityError> {
    d.best().map(|s| s.partition.clone())
}
