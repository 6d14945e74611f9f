//! Brandes edge betweenness over unordered node pairs.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap, VecDeque};

use crate::graph::WeightedGraph;

use super::CommunityError;

/// How path length is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PathMetric {
    /// Edge length `1 / w`: heavier ties are closer.
    #[default]
    InverseWeight,
    /// Every edge has length 1.
    Hops,
}

impl PathMetric {
    pub fn name(self) -> &'static str {
        match self {
            PathMetric::InverseWeight => "inverse-weight",
            PathMetric::Hops => "hops",
        }
    }
}

impl std::str::FromStr for PathMetric {
    type Err = CommunityError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inverse-weight" | "weighted" => Ok(PathMetric::InverseWeight),
            "hops" | "unweighted" => Ok(PathMetric::Hops),
            other => Err(CommunityError::Config(format!(
                "path metric must be inverse-weight or hops, got {other:?}"
            ))),
        }
    }
}

/// Relative slack under which two path lengths count as equal.
const TIE_TOLERANCE: f64 = 1e-12;

fn same_length(a: f64, b: f64) -> bool {
    (a - b).abs() <= TIE_TOLERANCE * a.abs().max(b.abs()).max(1.0)
}

#[derive(Clone, Copy, PartialEq)]
struct Pending {
    dist: f64,
    node: usize,
}

impl Eq for Pending {}

impl Ord for Pending {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Pending {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Reusable buffers for single-source shortest-path counting.
pub(crate) struct Brandes {
    sigma: Vec<f64>,
    delta: Vec<f64>,
    dist: Vec<f64>,
    done: Vec<bool>,
    preds: Vec<Vec<usize>>,
    order: Vec<usize>,
}

impl Brandes {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            sigma: vec![0.0; n],
            delta: vec![0.0; n],
            dist: vec![f64::INFINITY; n],
            done: vec![false; n],
            preds: vec![Vec::new(); n],
            order: Vec::with_capacity(n),
        }
    }

    fn reset(&mut self) {
        for &v in &self.order {
            self.sigma[v] = 0.0;
            self.delta[v] = 0.0;
            self.dist[v] = f64::INFINITY;
            self.done[v] = false;
            self.preds[v].clear();
        }
        self.order.clear();
    }

    fn hops(&mut self, adj: &[Vec<(usize, f64)>], s: usize) {
        let mut queue = VecDeque::new();
        self.dist[s] = 0.0;
        self.sigma[s] = 1.0;
        self.done[s] = true;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            self.order.push(v);
            for &(w, _) in &adj[v] {
                if !self.done[w] {
                    self.done[w] = true;
                    self.dist[w] = self.dist[v] + 1.0;
                    queue.push_back(w);
                }
                if self.dist[w] == self.dist[v] + 1.0 {
                    self.sigma[w] += self.sigma[v];
                    self.preds[w].push(v);
                }
            }
        }
    }

    fn dijkstra(&mut self, adj: &[Vec<(usize, f64)>], s: usize) {
        // `dist` holds tentative distances until a node is settled.
        let mut heap = BinaryHeap::new();
        self.dist[s] = 0.0;
        self.sigma[s] = 1.0;
        heap.push(Pending { dist: 0.0, node: s });
        while let Some(Pending { dist, node: v }) = heap.pop() {
            if self.done[v] || dist > self.dist[v] {
                continue;
            }
            self.done[v] = true;
            self.order.push(v);
            for &(w, weight) in &adj[v] {
                if self.done[w] {
                    continue;
                }
                let through = dist + 1.0 / weight;
                let current = self.dist[w];
                if current.is_infinite() || (through < current && !same_length(through, current)) {
                    self.dist[w] = through;
                    self.sigma[w] = self.sigma[v];
                    self.preds[w].clear();
                    self.preds[w].push(v);
                    heap.push(Pending { dist: through, node: w });
                } else if same_length(through, current) {
                    self.sigma[w] += self.sigma[v];
                    self.preds[w].push(v);
                }
            }
        }
    }

    /// Adds the dependency of source `s` onto every edge it reaches.
    pub(crate) fn accumulate(
        &mut self,
        adj: &[Vec<(usize, f64)>],
        s: usize,
        metric: PathMetric,
        out: &mut HashMap<(usize, usize), f64>,
    ) {
        self.reset();
        match metric {
            PathMetric::Hops => self.hops(adj, s),
            PathMetric::InverseWeight => self.dijkstra(adj, s),
        }
        for &w in self.order.iter().rev() {
            let coeff = (1.0 + self.delta[w]) / self.sigma[w];
            for &v in &self.preds[w] {
                let c = self.sigma[v] * coeff;
                let key = if v < w { (v, w) } else { (w, v) };
                *out.entry(key).or_insert(0.0) += c;
                self.delta[v] += c;
            }
        }
    }
}

/// Betweenness of every edge of `adj` restricted to the given sources, halved
/// so each unordered pair counts once.
pub(crate) fn betweenness_from(
    adj: &[Vec<(usize, f64)>],
    sources: impl IntoIterator<Item = usize>,
    metric: PathMetric,
) -> HashMap<(usize, usize), f64> {
    let mut out = HashMap::new();
    let mut b = Brandes::new(adj.len());
    for s in sources {
        b.accumulate(adj, s, metric, &mut out);
    }
    for v in out.values_mut() {
        *v *= 0.5;
    }
    out
}

pub(crate) fn adjacency_of(g: &WeightedGraph) -> Vec<Vec<(usize, f64)>> {
    (0..g.node_count()).map(|v| g.neighbors(v).to_vec()).collect()
}

/// Unnormalized edge betweenness: for each edge, the sum over unordered node
/// pairs of the fraction of shortest paths that use it. Returned as
/// `(u, v, value)` with `u < v` in ascending order.
pub fn edge_betweenness(
    g: &WeightedGraph,
    metric: PathMetric,
) -> Result<Vec<(usize, usize, f64)>, CommunityError> {
    if g.edge_count() == 0 {
        return Err(CommunityError::NoEdges);
    }
    let adj = adjacency_of(g);
    let values = betweenness_from(&adj, 0..g.node_count(), metric);
    Ok(g.edges()
        .map(|(u, v, _)| (u, v, values.get(&(u, v)).copied().unwrap_or(0.0)))
        .collect())
}
