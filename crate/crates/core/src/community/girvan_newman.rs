use std::collections::VecDeque;

use crate::graph::WeightedGraph;

use super::betweenness::{adjacency_of, betweenness_from, PathMetric};
use super::{modularity_of, require_edges, CommunityError, Dendrogram, Partition};

/// Full record of a divisive run.
#[derive(Debug, Clone)]
pub struct GirvanNewmanRun {
    pub dendrogram: Dendrogram,
    /// Edges in removal order, `(u, v)` with `u < v`.
    pub removals: Vec<(usize, usize)>,
}

/// Relative slack for treating two betweenness values as tied.
const TIE_TOLERANCE: f64 = 1e-12;

fn component_labels(adj: &[Vec<(usize, f64)>]) -> Vec<usize> {
    let n = adj.len();
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    let mut queue = VecDeque::new();
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        label[s] = next;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            for &(w, _) in &adj[v] {
                if label[w] == usize::MAX {
                    label[w] = next;
                    queue.push_back(w);
                }
            }
        }
        next += 1;
    }
    label
}

fn reachable(adj: &[Vec<(usize, f64)>], s: usize) -> Vec<usize> {
    let mut seen = vec![false; adj.len()];
    let mut out = vec![s];
    seen[s] = true;
    let mut i = 0;
    while i < out.len() {
        let v = out[i];
        i += 1;
        for &(w, _) in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                out.push(w);
            }
        }
    }
    out.sort_unstable();
    out
}

fn remove_edge(adj: &mut [Vec<(usize, f64)>], u: usize, v: usize) {
    adj[u].retain(|&(x, _)| x != v);
    adj[v].retain(|&(x, _)| x != u);
}

/// Repeatedly removes the edge of highest betweenness, recording a snapshot
/// whenever the number of connected components grows. Ties go to the
/// lexicographically smallest edge.
pub fn girvan_newman_run(g: &WeightedGraph, metric: PathMetric) -> Result<GirvanNewmanRun, CommunityError> {
    require_edges(g)?;
    let mut adj = adjacency_of(g);
    let mut dendrogram = Dendrogram::new();
    let initial = Partition::from_assignment(&component_labels(&adj));
    dendrogram.push(initial.clone(), modularity_of(g, &initial));
    let mut components = initial.k();

    let mut scores: Vec<((usize, usize), f64)> = betweenness_from(&adj, 0..adj.len(), metric).into_iter().collect();
    let mut removals = Vec::with_capacity(g.edge_count());

    while !scores.is_empty() {
        let top = scores.iter().map(|&(_, b)| b).fold(f64::NEG_INFINITY, f64::max);
        let cut = top - TIE_TOLERANCE * top.abs().max(1.0);
        let (u, v) = scores
            .iter()
            .filter(|&&(_, b)| b >= cut)
            .map(|&(e, _)| e)
            .min()
            .expect("non-empty");
        remove_edge(&mut adj, u, v);
        removals.push((u, v));

        // Only paths inside the touched component(s) change.
        let mut touched = reachable(&adj, u);
        if touched.binary_search(&v).is_err() {
            components += 1;
            let p = Partition::from_assignment(&component_labels(&adj));
            debug_assert_eq!(p.k(), components);
            let q = modularity_of(g, &p);
            dendrogram.push(p, q);
            touched.extend(reachable(&adj, v));
            touched.sort_unstable();
        }
        let mut in_touched = vec![false; adj.len()];
        for &t in &touched {
            in_touched[t] = true;
        }
        scores.retain(|&((a, _), _)| !in_touched[a]);
        let fresh = betweenness_from(&adj, touched.iter().copied(), metric);
        for &a in &touched {
            for &(b, _) in &adj[a] {
                if a < b {
                    scores.push(((a, b), fresh.get(&(a, b)).copied().unwrap_or(0.0)));
                }
            }
        }
    }

    Ok(GirvanNewmanRun { dendrogram, removals })
}

pub fn girvan_newman(g: &WeightedGraph, metric: PathMetric) -> Result<Dendrogram, CommunityError> {
    girvan_newman_run(g, metric).map(|r| r.dendrogram)
}

#[cfg(test)]
mod tests {
    use super::super::best_partition;
    use super::*;

    fn unit(n: usize, edges: &[(usize, usize)]) -> WeightedGraph {
        let e: Vec<_> = edges.iter().map(|&(u, v)| (u, v, 1.0)).collect();
        WeightedGraph::from_edges(n, &e).unwrap()
    }

    fn barbell() -> WeightedGraph {
        unit(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])
    }

    #[test]
    fn barbell_cuts_bridge_first() {
        let run = girvan_newman_run(&barbell(), PathMetric::InverseWeight).unwrap();
        assert_eq!(run.removals[0], (2, 3));
        let first_split = &run.dendrogram.snapshots()[1];
        assert_eq!(first_split.partition.assignment(), &[0, 0, 0, 1, 1, 1]);
        assert_eq!(run.removals.len(), 7);
        let last = run.dendrogram.snapshots().last().unwrap();
        assert_eq!(last.partition, Partition::singletons(6));
        assert_eq!(
            best_partition(&run.dendrogram).unwrap().assignment(),
            &[0, 0, 0, 1, 1, 1]
        );
    }

    #[test]
    fn single_edge() {
        let g = unit(2, &[(0, 1)]);
        let d = girvan_newman(&g, PathMetric::InverseWeight).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.snapshots()[0].partition.k(), 1);
        assert_eq!(d.snapshots()[1].partition.k(), 2);
        assert_eq!(d.snapshots()[0].modularity, 0.0);
        assert_eq!(d.snapshots()[1].modularity, -0.5);
        assert_eq!(best_partition(&d).unwrap(), Partition::whole(2));
    }

    #[test]
    fn disconnected_input() {
        let g = unit(5, &[(0, 1), (2, 3)]);
        let d = girvan_newman(&g, PathMetric::Hops).unwrap();
        assert_eq!(d.snapshots()[0].partition.k(), 3);
        assert_eq!(d.snapshots().last().unwrap().partition.k(), 5);
        assert_eq!(d.len(), 3);
    }

    #[test]
    fn edgeless_is_error() {
        assert!(matches!(
            girvan_newman(&unit(3, &[]), PathMetric::Hops),
            Err(CommunityError::NoEdges)
        ));
    }

    #[test]
    fn incremental_scores_match_full_recompute() {
        // After each removal the kept scores must equal a fresh computation.
        let g = unit(8, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3), (5, 6), (6, 7), (7, 0), (1, 6)]);
        let run = girvan_newman_run(&g, PathMetric::InverseWeight).unwrap();
        let mut adj = adjacency_of(&g);
        for &(u, v) in &run.removals {
            let full = betweenness_from(&adj, 0..adj.len(), PathMetric::InverseWeight);
            let top = full.values().copied().fold(f64::NEG_INFINITY, f64::max);
            let best = full
                .iter()
                .filter(|(_, &b)| b >= top - 1e-12 * top.max(1.0))
                .map(|(&e, _)| e)
                .min()
                .unwrap();
            assert_eq!(best, (u, v));
            remove_edge(&mut adj, u, v);
        }
    }
}
