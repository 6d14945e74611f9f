use std::collections::BTreeMap;

use crate::graph::WeightedGraph;

use super::{modularity_of, require_edges, CommunityError, Dendrogram, Partition};

/// One agglomeration step: community `absorbed` joins `into`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Merge {
    pub into: usize,
    pub absorbed: usize,
    pub delta_q: f64,
}

#[derive(Debug, Clone)]
pub struct GreedyRun {
    /// Singletons first, then one snapshot per merge.
    pub dendrogram: Dendrogram,
    pub merges: Vec<Merge>,
}

/// Incrementally maintained merge gains between adjacent communities.
pub(crate) struct MergeState {
    /// `gains[i][j]` is the modularity change of merging `i` and `j`.
    pub(crate) gains: Vec<BTreeMap<usize, f64>>,
    /// Fraction of edge ends attached to each community.
    pub(crate) ends: Vec<f64>,
    pub(crate) members: Vec<Vec<usize>>,
    pub(crate) alive: Vec<bool>,
}

impl MergeState {
    pub(crate) fn new(g: &WeightedGraph) -> Self {
        let n = g.node_count();
        let m = g.total_weight();
        let two_m = 2.0 * m;
        let ends: Vec<f64> = (0..n)
            .map(|v| g.neighbors(v).iter().map(|&(_, w)| w).sum::<f64>() / two_m)
            .collect();
        let gains = (0..n)
            .map(|i| {
                g.neighbors(i)
                    .iter()
                    .map(|&(j, w)| (j, w / m - 2.0 * ends[i] * ends[j]))
                    .collect()
            })
            .collect();
        Self {
            gains,
            ends,
            members: (0..n).map(|v| vec![v]).collect(),
            alive: vec![true; n],
        }
    }

    /// Largest gain over adjacent pairs; ties go to the smallest `(i, j)`.
    pub(crate) fn best_pair(&self) -> Option<(usize, usize, f64)> {
        let mut best: Option<(usize, usize, f64)> = None;
        for (i, row) in self.gains.iter().enumerate() {
            for (&j, &dq) in row.range(i + 1..) {
                if best.is_none_or(|(_, _, b)| dq > b) {
                    best = Some((i, j, dq));
                }
            }
        }
        best
    }

    /// Merges `j` into `i` (`i < j`) and updates every affected gain.
    pub(crate) fn merge(&mut self, i: usize, j: usize) {
        let row_i = std::mem::take(&mut self.gains[i]);
        let row_j = std::mem::take(&mut self.gains[j]);
        let (ai, aj) = (self.ends[i], self.ends[j]);
        let mut merged = BTreeMap::new();
        for (&k, &dik) in &row_i {
            if k == j {
                continue;
            }
            let value = match row_j.get(&k) {
                Some(&djk) => dik + djk,
                None => dik - 2.0 * aj * self.ends[k],
            };
            merged.insert(k, value);
        }
        for (&k, &djk) in &row_j {
            if k == i || row_i.contains_key(&k) {
                continue;
            }
            merged.insert(k, djk - 2.0 * ai * self.ends[k]);
        }
        for (&k, &value) in &merged {
            let row = &mut self.gains[k];
            row.remove(&j);
            row.insert(i, value);
        }
        self.gains[i] = merged;
        self.ends[i] += aj;
        self.ends[j] = 0.0;
        let absorbed = std::mem::take(&mut self.members[j]);
        self.members[i].extend(absorbed);
        self.alive[j] = false;
    }

    pub(crate) fn partition(&self, n: usize) -> Partition {
        let mut raw = vec![0; n];
        for (c, members) in self.members.iter().enumerate() {
            for &v in members {
                raw[v] = c;
            }
        }
        Partition::from_assignment(&raw)
    }
}

/// Agglomerates from singletons, always merging the adjacent pair with the
/// largest modularity gain, until no adjacent pair is left.
pub fn greedy_modularity_run(g: &WeightedGraph) -> Result<GreedyRun, CommunityError> {
    require_edges(g)?;
    let n = g.node_count();
    let mut state = MergeState::new(g);
    let mut dendrogram = Dendrogram::new();
    let start = Partition::singletons(n);
    dendrogram.push(start.clone(), modularity_of(g, &start));
    let mut merges = Vec::new();
    while let Some((i, j, delta_q)) = state.best_pair() {
        state.merge(i, j);
        merges.push(Merge {
            into: i,
            absorbed: j,
            delta_q,
        });
        let p = state.partition(n);
        let q = modularity_of(g, &p);
        dendrogram.push(p, q);
    }
    Ok(GreedyRun { dendrogram, merges })
}

/// Highest-modularity partition along the greedy merge sequence.
pub fn greedy_modularity(g: &WeightedGraph) -> Result<Partition, CommunityError> {
    let run = greedy_modularity_run(g)?;
    super::best_partition(&run.dendrogram)
}
