use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::WeightedGraph;

use super::{modularity_of, require_edges, CommunityError, Partition, Snapshot};

/// Loop control for [`louvain`]. Resolution is fixed at 1.
#[derive(Debug, Clone, PartialEq)]
pub struct LouvainConfig {
    /// A node only moves when modularity rises by at least this much.
    pub min_modularity_gain: f64,
    /// Seeds the node visiting order.
    pub node_order_seed: u64,
    /// Upper bound on move-then-aggregate passes.
    pub max_passes: usize,
}

impl Default for LouvainConfig {
    fn default() -> Self {
        Self {
            min_modularity_gain: 1e-7,
            node_order_seed: 42,
            max_passes: 100,
        }
    }
}

impl LouvainConfig {
    pub fn new(min_modularity_gain: f64, node_order_seed: u64, max_passes: usize) -> Result<Self, CommunityError> {
        let cfg = Self {
            min_modularity_gain,
            node_order_seed,
            max_passes,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_seed(seed: u64) -> Self {
        Self {
            node_order_seed: seed,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<(), CommunityError> {
        if !(self.min_modularity_gain.is_finite() && self.min_modularity_gain > 0.0) {
            return Err(CommunityError::Config(format!(
                "min_modularity_gain must be > 0, got {}",
                self.min_modularity_gain
            )));
        }
        if self.max_passes == 0 {
            return Err(CommunityError::Config("max_passes must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct LouvainRun {
    /// Partition of the original nodes after each pass that moved something.
    pub levels: Vec<Snapshot>,
    /// Smallest modularity gain of any accepted move.
    pub min_accepted_gain: Option<f64>,
    pub partition: Partition,
}

/// Graph of communities with self-loop weight kept per node.
struct Level {
    adj: Vec<Vec<(usize, f64)>>,
    /// Weight of edges internal to each super node (loops count once).
    internal: Vec<f64>,
}

impl Level {
    fn from_graph(g: &WeightedGraph) -> Self {
        Self {
            adj: (0..g.node_count()).map(|v| g.neighbors(v).to_vec()).collect(),
            internal: vec![0.0; g.node_count()],
        }
    }

    fn len(&self) -> usize {
        self.adj.len()
    }

    fn strength(&self, v: usize) -> f64 {
        self.adj[v].iter().map(|&(_, w)| w).sum::<f64>() + 2.0 * self.internal[v]
    }

    /// Collapses each community (dense ids) into one node.
    fn aggregate(&self, community: &[usize], k: usize) -> Level {
        let mut internal = vec![0.0; k];
        let mut rows: Vec<std::collections::BTreeMap<usize, f64>> = vec![Default::default(); k];
        for v in 0..self.len() {
            let cv = community[v];
            internal[cv] += self.internal[v];
            for &(u, w) in &self.adj[v] {
                let cu = community[u];
                if cu == cv {
                    // each internal edge is seen from both ends
                    internal[cv] += 0.5 * w;
                } else {
                    *rows[cv].entry(cu).or_insert(0.0) += w;
                }
            }
        }
        Level {
            adj: rows.into_iter().map(|r| r.into_iter().collect()).collect(),
            internal,
        }
    }
}

/// Local moving phase. Returns whether any node moved.
fn move_nodes(
    level: &Level,
    community: &mut [usize],
    two_m: f64,
    cfg: &LouvainConfig,
    rng: &mut ChaCha8Rng,
    min_gain: &mut Option<f64>,
) -> bool {
    let n = level.len();
    let strength: Vec<f64> = (0..n).map(|v| level.strength(v)).collect();
    let mut total: Vec<f64> = strength.clone();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);

    let mut link = vec![0.0; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut any = false;
    loop {
        let mut moved = false;
        for &v in &order {
            let home = community[v];
            let kv = strength[v];
            for &(u, w) in &level.adj[v] {
                let c = community[u];
                if link[c] == 0.0 && !touched.contains(&c) {
                    touched.push(c);
                }
                link[c] += w;
            }
            total[home] -= kv;
            // modularity gain of inserting v into c, up to the factor 2 / 2m
            let score = |c: usize, link: &[f64]| link[c] - total[c] * kv / two_m;
            let stay = score(home, &link);
            let mut best = home;
            let mut best_score = stay;
            for &c in &touched {
                let s = score(c, &link);
                if s > best_score {
                    best = c;
                    best_score = s;
                }
            }
            let gain = 2.0 * (best_score - stay) / two_m;
            let target = if best != home && gain >= cfg.min_modularity_gain {
                *min_gain = Some(min_gain.map_or(gain, |g: f64| g.min(gain)));
                moved = true;
                best
            } else {
                home
            };
            community[v] = target;
            total[target] += kv;
            for c in touched.drain(..) {
                link[c] = 0.0;
            }
            link[home] = 0.0;
        }
        if !moved {
            break;
        }
        any = true;
    }
    any
}

fn relabel(community: &mut [usize]) -> usize {
    let p = Partition::from_assignment(community);
    community.copy_from_slice(p.assignment());
    p.k()
}

/// Multi-level Louvain modularity optimization.
pub fn louvain_run(g: &WeightedGraph, cfg: &LouvainConfig) -> Result<LouvainRun, CommunityError> {
    require_edges(g)?;
    cfg.validate()?;
    let two_m = 2.0 * g.total_weight();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.node_order_seed);
    let mut level = Level::from_graph(g);
    // community of each original node
    let mut membership: Vec<usize> = (0..g.node_count()).collect();
    let mut levels = Vec::new();
    let mut min_accepted_gain = None;

    for _ in 0..cfg.max_passes {
        let mut community: Vec<usize> = (0..level.len()).collect();
        if !move_nodes(&level, &mut community, two_m, cfg, &mut rng, &mut min_accepted_gain) {
            break;
        }
        let k = relabel(&mut community);
        for c in membership.iter_mut() {
            *c = community[*c];
        }
        let partition = Partition::from_assignment(&membership);
        let modularity = modularity_of(g, &partition);
        levels.push(Snapshot { partition, modularity });
        if k == level.len() {
            break;
        }
        level = level.aggregate(&community, k);
    }

    let partition = Partition::from_assignment(&membership);
    Ok(LouvainRun {
        levels,
        min_accepted_gain,
        partition,
    })
}

pub fn louvain(g: &WeightedGraph, cfg: &LouvainConfig) -> Result<Partition, CommunityError> {
    louvain_run(g, cfg).map(|r| r.partition)
}
