//! Partition quality: weighted modularity and normalized mutual information.
//!
//! Entropies are in nats and use `0 ln 0 = 0`.

use thiserror::Error;

use crate::community::Partition;
use crate::graph::WeightedGraph;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("partition covers {partition} nodes but the other side has {expected}")]
    SizeMismatch { partition: usize, expected: usize },
    #[error("modularity is undefined on a graph without edges")]
    NoEdges,
    #[error("empty partition")]
    Empty,
}

/// `Q = sum_i (e_ii - a_i^2)` with `e_ii` the fraction of edge weight inside
/// community `i` and `a_i` the fraction of edge ends attached to it.
pub fn modularity(g: &WeightedGraph, p: &Partition) -> Result<f64, MetricError> {
    if p.len() != g.node_count() {
        return Err(MetricError::SizeMismatch {
            partition: p.len(),
            expected: g.node_count(),
        });
    }
    let m = g.total_weight();
    if m <= 0.0 {
        return Err(MetricError::NoEdges);
    }
    let mut inside = vec![0.0; p.k()];
    let mut ends = vec![0.0; p.k()];
    for (u, v, w) in g.edges() {
        let (cu, cv) = (p.community_of(u), p.community_of(v));
        if cu == cv {
            inside[cu] += w;
        }
        ends[cu] += w;
        ends[cv] += w;
    }
    let two_m = 2.0 * m;
    Ok(inside
        .iter()
        .zip(&ends)
        .map(|(&e, &a)| e / m - (a / two_m) * (a / two_m))
        .sum())
}

/// Joint community counts of two partitions over the same nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct ContingencyTable {
    counts: Vec<Vec<usize>>,
    rows: Vec<usize>,
    cols: Vec<usize>,
    total: usize,
}

impl ContingencyTable {
    pub fn new(p1: &Partition, p2: &Partition) -> Result<Self, MetricError> {
        if p1.len() != p2.len() {
            return Err(MetricError::SizeMismatch {
                partition: p2.len(),
                expected: p1.len(),
            });
        }
        if p1.is_empty() {
            return Err(MetricError::Empty);
        }
        let mut counts = vec![vec![0; p2.k()]; p1.k()];
        for (&a, &b) in p1.assignment().iter().zip(p2.assignment()) {
            counts[a][b] += 1;
        }
        Ok(Self {
            rows: p1.sizes(),
            cols: p2.sizes(),
            total: p1.len(),
            counts,
        })
    }

    pub fn counts(&self) -> &[Vec<usize>] {
        &self.counts
    }

    pub fn row_marginals(&self) -> &[usize] {
        &self.rows
    }

    pub fn col_marginals(&self) -> &[usize] {
        &self.cols
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn mutual_information(&self) -> f64 {
        let n = self.total as f64;
        let mut mi = 0.0;
        for (i, row) in self.counts.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let c = c as f64;
                mi += c / n * (n * c / (self.rows[i] as f64 * self.cols[j] as f64)).ln();
            }
        }
        mi.max(0.0)
    }
}

fn entropy_of_sizes(sizes: &[usize], n: usize) -> f64 {
    let n = n as f64;
    -sizes
        .iter()
        .filter(|&&s| s > 0)
        .map(|&s| {
            let p = s as f64 / n;
            p * p.ln()
        })
        .sum::<f64>()
}

/// Shannon entropy of the community-size distribution.
pub fn entropy(p: &Partition) -> Result<f64, MetricError> {
    if p.is_empty() {
        return Err(MetricError::Empty);
    }
    Ok(entropy_of_sizes(&p.sizes(), p.len()).max(0.0))
}

/// Orders the pair canonically so symmetric metrics are bit-identical.
fn canonical<'a>(p1: &'a Partition, p2: &'a Partition) -> (&'a Partition, &'a Partition) {
    if p1.assignment() <= p2.assignment() {
        (p1, p2)
    } else {
        (p2, p1)
    }
}

pub fn mutual_information(p1: &Partition, p2: &Partition) -> Result<f64, MetricError> {
    let (a, b) = canonical(p1, p2);
    Ok(ContingencyTable::new(a, b)?.mutual_information())
}

/// `2 I / (H1 + H2)`. Two single-community partitions give 0 with a warning.
pub fn nmi(p1: &Partition, p2: &Partition) -> Result<f64, MetricError> {
    let (a, b) = canonical(p1, p2);
    let table = ContingencyTable::new(a, b)?;
    let h = entropy(a)? + entropy(b)?;
    if h == 0.0 {
        log::warn!("nmi of two trivial partitions is undefined; reporting 0");
        return Ok(0.0);
    }
    Ok((2.0 * table.mutual_information() / h).clamp(0.0, 1.0))
}
