//! Independent reference implementations used as test oracles. They work on
//! plain edge lists and dense matrices and share no code with the library.
#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Edges = Vec<(usize, usize, f64)>;

/// Symmetric dense matrix; duplicate edges are summed like the library does.
pub fn dense(n: usize, edges: &[(usize, usize, f64)]) -> Vec<Vec<f64>> {
    let mut a = vec![vec![0.0; n]; n];
    for &(u, v, w) in edges {
        if u != v {
            a[u][v] += w;
            a[v][u] += w;
        }
    }
    a
}

/// `Q = 1/2m * sum_ij (A_ij - k_i k_j / 2m) [c_i = c_j]`.
pub fn pairwise_modularity(a: &[Vec<f64>], communities: &[usize]) -> f64 {
    let n = a.len();
    let k: Vec<f64> = a.iter().map(|row| row.iter().sum()).collect();
    let two_m: f64 = k.iter().sum();
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if communities[i] == communities[j] {
                q += a[i][j] - k[i] * k[j] / two_m;
            }
        }
    }
    q / two_m
}

/// Every set partition of `0..n` as restricted growth strings.
pub fn all_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(i: usize, n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for c in 0..=max + 1 {
            if i == 0 && c > 0 {
                break;
            }
            cur.push(c);
            go(i + 1, n, if i == 0 { 0 } else { max.max(c) }, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        go(0, n, 0, &mut Vec::new(), &mut out);
    }
    out
}

pub fn optimum_modularity(a: &[Vec<f64>]) -> (f64, Vec<usize>) {
    all_partitions(a.len())
        .into_iter()
        .map(|p| (pairwise_modularity(a, &p), p))
        .fold((f64::NEG_INFINITY, Vec::new()), |best, cand| if cand.0 > best.0 { cand } else { best })
}

/// Edge betweenness by listing every simple path between every pair.
/// `unit` selects hop counting, otherwise edge length is `1 / w`.
pub fn enumerated_betweenness(a: &[Vec<f64>], unit: bool) -> BTreeMap<(usize, usize), f64> {
    let n = a.len();
    let len = |u: usize, v: usize| if unit { 1.0 } else { 1.0 / a[u][v] };
    let mut score = BTreeMap::new();
    for u in 0..n {
        for v in u + 1..n {
            if a[u][v] > 0.0 {
                score.insert((u, v), 0.0);
            }
        }
    }
    for s in 0..n {
        for t in s + 1..n {
            let mut paths: Vec<(f64, Vec<usize>)> = Vec::new();
            let mut stack = vec![s];
            let mut on = vec![false; n];
            on[s] = true;
            fn dfs(
                a: &[Vec<f64>],
                t: usize,
                stack: &mut Vec<usize>,
                on: &mut [bool],
                length: f64,
                len: &dyn Fn(usize, usize) -> f64,
                paths: &mut Vec<(f64, Vec<usize>)>,
            ) {
                let here = *stack.last().unwrap();
                if here == t {
                    paths.push((length, stack.clone()));
                    return;
                }
                for next in 0..a.len() {
                    if a[here][next] > 0.0 && !on[next] {
                        on[next] = true;
                        stack.push(next);
                        dfs(a, t, stack, on, length + len(here, next), len, paths);
                        stack.pop();
                        on[next] = false;
                    }
                }
            }
            dfs(a, t, &mut stack, &mut on, 0.0, &len, &mut paths);
            if paths.is_empty() {
                continue;
            }
            let best = paths.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
            let shortest: Vec<&Vec<usize>> = paths
                .iter()
                .filter(|p| p.0 <= best + 1e-9 * best.max(1.0))
                .map(|p| &p.1)
                .collect();
            let share = 1.0 / shortest.len() as f64;
            for path in shortest {
                for hop in path.windows(2) {
                    let key = (hop[0].min(hop[1]), hop[0].max(hop[1]));
                    *score.get_mut(&key).unwrap() += share;
                }
            }
        }
    }
    score
}

fn entropy_direct(labels: &[usize]) -> f64 {
    let n = labels.len() as f64;
    let mut counts: BTreeMap<usize, f64> = BTreeMap::new();
    for &l in labels {
        *counts.entry(l).or_default() += 1.0;
    }
    counts.values().map(|&c| -(c / n) * (c / n).ln()).sum()
}

/// `I = H(X) - H(X | Y)`, `NMI = 2 I / (H(X) + H(Y))`.
pub fn nmi_via_conditional_entropy(x: &[usize], y: &[usize]) -> f64 {
    let n = x.len() as f64;
    let hx = entropy_direct(x);
    let hy = entropy_direct(y);
    let mut by_y: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (&a, &b) in x.iter().zip(y) {
        by_y.entry(b).or_default().push(a);
    }
    let h_x_given_y: f64 = by_y.values().map(|xs| xs.len() as f64 / n * entropy_direct(xs)).sum();
    let mi = hx - h_x_given_y;
    if hx + hy == 0.0 {
        0.0
    } else {
        2.0 * mi / (hx + hy)
    }
}

/// Erdos-Renyi style graph with weights drawn from `weights`.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64, weights: &[f64]) -> Edges {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v, weights[rng.random_range(0..weights.len())]));
            }
        }
    }
    edges
}

/// Random spanning tree plus extra edges, so the result is connected.
pub fn random_connected(rng: &mut ChaCha8Rng, n: usize, extra: f64, weights: &[f64]) -> Edges {
    let mut edges = Vec::new();
    for v in 1..n {
        let u = rng.random_range(0..v);
        edges.push((u, v, weights[rng.random_range(0..weights.len())]));
    }
    for (u, v, w) in random_graph(rng, n, extra, weights) {
        if !edges.iter().any(|&(a, b, _)| (a, b) == (u, v)) {
            edges.push((u, v, w));
        }
    }
    edges
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
