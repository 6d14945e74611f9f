mod common;

use affinet_core::community::{
    edge_betweenness, girvan_newman, greedy_modularity, greedy_modularity_run, louvain, LouvainConfig, Partition,
    PathMetric,
};
use affinet_core::metrics::{modularity, nmi};
use affinet_core::WeightedGraph;
use rand::Rng;

use common::*;

const WEIGHTS: [f64; 4] = [1.0, 2.0, 0.5, 3.0];

#[test]
fn modularity_matches_pairwise_form() {
    let mut r = rng(1);
    let mut checked = 0;
    while checked < 100 {
        let n = r.random_range(2..=30);
        let p = r.random_range(0.05..0.6);
        let edges = random_graph(&mut r, n, p, &[1.0, 0.25, 2.5, 7.0]);
        if edges.is_empty() {
            continue;
        }
        let g = WeightedGraph::from_edges(n, &edges).unwrap();
        let a = dense(n, &edges);
        for _ in 0..3 {
            let k = r.random_range(1..=n);
            let raw: Vec<usize> = (0..n).map(|_| r.random_range(0..k)).collect();
            let p = Partition::from_assignment(&raw);
            let q = modularity(&g, &p).unwrap();
            let oracle = pairwise_modularity(&a, &raw);
            assert!((q - oracle).abs() < 1e-10, "n={n}: {q} vs {oracle}");
        }
        checked += 1;
    }
}

fn check_betweenness(n: usize, edges: &[(usize, usize, f64)], metric: PathMetric) {
    let g = WeightedGraph::from_edges(n, edges).unwrap();
    let oracle = enumerated_betweenness(&dense(n, edges), metric == PathMetric::Hops);
    let got = edge_betweenness(&g, metric).unwrap();
    assert_eq!(got.len(), oracle.len());
    for (u, v, b) in got {
        let want = oracle[&(u, v)];
        assert!((b - want).abs() < 1e-9, "edge ({u},{v}) {metric:?}: {b} vs {want} in {edges:?}");
    }
}

#[test]
fn betweenness_matches_path_enumeration() {
    let mut r = rng(2);
    for _ in 0..60 {
        let n = r.random_range(2..=12);
        let p = r.random_range(0.15..0.35);
        let edges = random_graph(&mut r, n, p, &WEIGHTS);
        if edges.is_empty() {
            continue;
        }
        check_betweenness(n, &edges, PathMetric::Hops);
        check_betweenness(n, &edges, PathMetric::InverseWeight);
    }
}

#[test]
fn betweenness_with_equal_length_weighted_paths() {
    // three routes from 0 to 3, all of length 1
    let edges = vec![(0, 1, 2.0), (1, 3, 2.0), (0, 2, 2.0), (2, 3, 2.0), (0, 3, 1.0)];
    check_betweenness(4, &edges, PathMetric::InverseWeight);
}

fn small_connected_graphs(seed: u64, count: usize) -> Vec<(usize, Vec<(usize, usize, f64)>)> {
    let mut r = rng(seed);
    (0..count)
        .map(|i| {
            let n = 2 + i % 7;
            let weights: &[f64] = if i % 2 == 0 { &[1.0] } else { &WEIGHTS };
            let extra = r.random_range(0.0..0.6);
            let edges = random_connected(&mut r, n, extra, weights);
            (n, edges)
        })
        .collect()
}

#[test]
fn louvain_and_greedy_bounded_by_exhaustive_optimum() {
    for (n, edges) in small_connected_graphs(3, 120) {
        let g = WeightedGraph::from_edges(n, &edges).unwrap();
        let a = dense(n, &edges);
        let (best, _) = optimum_modularity(&a);
        let floor = pairwise_modularity(&a, &(0..n).collect::<Vec<_>>());
        for seed in [1, 42] {
            let q = modularity(&g, &louvain(&g, &LouvainConfig::with_seed(seed)).unwrap()).unwrap();
            assert!(q >= floor - 1e-12 && q <= best + 1e-10, "louvain {q} outside [{floor}, {best}]");
        }
        let q = modularity(&g, &greedy_modularity(&g).unwrap()).unwrap();
        assert!(q >= floor - 1e-12 && q <= best + 1e-10, "greedy {q} outside [{floor}, {best}]");
        let d = girvan_newman(&g, PathMetric::InverseWeight).unwrap();
        for s in d.snapshots() {
            assert!(s.modularity <= best + 1e-10);
            assert!((s.modularity - pairwise_modularity(&a, s.partition.assignment())).abs() < 1e-10);
        }
    }
}

#[test]
fn louvain_finds_the_optimum_on_clear_structure() {
    // two 4-cliques joined by one edge: optimum splits the cliques
    let mut edges = Vec::new();
    for b in [0, 4] {
        for i in 0..4 {
            for j in i + 1..4 {
                edges.push((b + i, b + j, 1.0));
            }
        }
    }
    edges.push((3, 4, 1.0));
    let g = WeightedGraph::from_edges(8, &edges).unwrap();
    let (best, arg) = optimum_modularity(&dense(8, &edges));
    let p = louvain(&g, &LouvainConfig::default()).unwrap();
    assert!((modularity(&g, &p).unwrap() - best).abs() < 1e-12);
    assert_eq!(p.assignment(), arg.as_slice());
}

/// Best modularity over partitions whose blocks are connected in `edges`.
fn best_connected_blocks(n: usize, edges: &[(usize, usize, f64)]) -> f64 {
    let a = dense(n, edges);
    all_partitions(n)
        .into_iter()
        .filter(|p| {
            (0..=*p.iter().max().unwrap()).all(|c| {
                let members: Vec<usize> = (0..n).filter(|&v| p[v] == c).collect();
                let mut seen = vec![members[0]];
                let mut i = 0;
                while i < seen.len() {
                    let v = seen[i];
                    i += 1;
                    for &u in &members {
                        if a[v][u] > 0.0 && !seen.contains(&u) {
                            seen.push(u);
                        }
                    }
                }
                seen.len() == members.len()
            })
        })
        .map(|p| pairwise_modularity(&a, &p))
        .fold(f64::NEG_INFINITY, f64::max)
}

#[test]
fn star_greedy_matches_connected_block_optimum() {
    // star with centre 0 and four leaves: every connected block holds the centre
    let edges: Vec<_> = (1..5).map(|v| (0, v, 1.0)).collect();
    let g = WeightedGraph::from_edges(5, &edges).unwrap();
    let run = greedy_modularity_run(&g).unwrap();
    let best = run
        .dendrogram
        .snapshots()
        .iter()
        .map(|s| s.modularity)
        .fold(f64::NEG_INFINITY, f64::max);
    assert!((best - best_connected_blocks(5, &edges)).abs() < 1e-12);
    assert!(best.abs() < 1e-12, "{best}");
}

#[test]
fn complete_graph_stays_whole() {
    let edges: Vec<_> = (0..4).flat_map(|u| (u + 1..4).map(move |v| (u, v, 1.0))).collect();
    let g = WeightedGraph::from_edges(4, &edges).unwrap();
    assert_eq!(louvain(&g, &LouvainConfig::default()).unwrap().k(), 1);
    assert_eq!(greedy_modularity(&g).unwrap().k(), 1);
    assert_eq!(
        affinet_core::community::best_partition(&girvan_newman(&g, PathMetric::Hops).unwrap())
            .unwrap()
            .k(),
        1
    );
}

#[test]
fn nmi_matches_conditional_entropy_form() {
    let mut r = rng(4);
    for _ in 0..300 {
        let n = r.random_range(1..=60);
        let (ka, kb) = (r.random_range(1..=n.min(8)), r.random_range(1..=n.min(8)));
        let a: Vec<usize> = (0..n).map(|_| r.random_range(0..ka)).collect();
        let b: Vec<usize> = (0..n).map(|_| r.random_range(0..kb)).collect();
        let got = nmi(&Partition::from_assignment(&a), &Partition::from_assignment(&b)).unwrap();
        let want = nmi_via_conditional_entropy(&a, &b).clamp(0.0, 1.0);
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        let back = nmi(&Partition::from_assignment(&b), &Partition::from_assignment(&a)).unwrap();
        assert_eq!(got, back);
    }
}
