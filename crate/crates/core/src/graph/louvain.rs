//! Two-phase Louvain community detection with a resolution parameter.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

const MIN_GAIN: f64 = 1e-12;

/// Working graph for one aggregation level. Self-loops (internal weight of
/// an aggregated community) are tracked separately; they contribute `2w` to
/// a node's degree but never to move gains.
struct LevelGraph {
    adj: Vec<Vec<(usize, f64)>>,
    self_loop: Vec<f64>,
}

impl LevelGraph {
    fn len(&self) -> usize {
        self.adj.len()
    }

    fn degree(&self, i: usize) -> f64 {
        self.adj[i].iter().map(|&(_, w)| w).sum::<f64>() + 2.0 * self.self_loop[i]
    }

    fn total_weight_2m(&self) -> f64 {
        (0..self.len()).map(|i| self.degree(i)).sum()
    }
}

/// Runs Louvain modularity optimization and returns a dense community id
/// per node, deterministic for a fixed seed (the seed drives the node
/// visiting order of every local-moving pass).
pub fn louvain(graph: &Graph, resolution: f64, seed: u64) -> Result<Vec<usize>> {
    if resolution <= 0.0 || !resolution.is_finite() {
        return Err(Error::Invalid(format!(
            "resolution must be > 0, got {resolution}"
        )));
    }
    let n = graph.node_count();
    let mut level = LevelGraph {
        adj: (0..n).map(|u| graph.neighbors(u).to_vec()).collect(),
        self_loop: vec![0.0; n],
    };
    // node -> community, composed across levels.
    let mut assignment: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    loop {
        let moved = local_moving(&level, resolution, &mut rng);
        let communities = densify(&moved);
        let count = communities.iter().max().map(|&c| c + 1).unwrap_or(0);
        for a in assignment.iter_mut() {
            *a = communities[*a];
        }
        if count == level.len() {
            break;
        }
        level = aggregate(&level, &communities, count);
    }

    Ok(densify(&assignment))
}

/// One local-moving phase: repeatedly offer each node its best neighboring
/// community until a full pass makes no move. Returns the community per
/// level-node.
fn local_moving(level: &LevelGraph, resolution: f64, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let k = level.len();
    let mut community: Vec<usize> = (0..k).collect();
    let degree: Vec<f64> = (0..k).map(|i| level.degree(i)).collect();
    let mut comm_total = degree.clone();
    let two_m = level.total_weight_2m();
    if two_m <= 0.0 {
        return community;
    }
    let scale = resolution / two_m;

    let mut order: Vec<usize> = (0..k).collect();
    let mut neighbor_weight: Vec<f64> = vec![0.0; k];
    let mut touched: Vec<usize> = Vec::new();

    loop {
        let mut moves = 0usize;
        order.shuffle(rng);
        for &i in &order {
            let current = community[i];
            for &(j, w) in &level.adj[i] {
                let c = community[j];
                if neighbor_weight[c] == 0.0 {
                    touched.push(c);
                }
                neighbor_weight[c] += w;
            }

            comm_total[current] -= degree[i];
            // Stay put unless some community is strictly better; equal-gain
            // alternatives break toward the smallest community id.
            let mut best = current;
            let mut best_gain = neighbor_weight[current] - scale * degree[i] * comm_total[current];
            for &c in &touched {
                if c == current {
                    continue;
                }
                let gain = neighbor_weight[c] - scale * degree[i] * comm_total[c];
                let better = gain > best_gain + MIN_GAIN;
                let tie = (gain - best_gain).abs() <= MIN_GAIN && best != current && c < best;
                if better || tie {
                    best = c;
                    best_gain = best_gain.max(gain);
                }
            }
            comm_total[best] += degree[i];
            if best != current {
                community[i] = best;
                moves += 1;
            }

            for &c in &touched {
                neighbor_weight[c] = 0.0;
            }
            touched.clear();
        }
        if moves == 0 {
            break;
        }
    }
    community
}

/// Collapses each community into one node; parallel edges merge and
/// internal edges become self-loops.
fn aggregate(level: &LevelGraph, communities: &[usize], count: usize) -> LevelGraph {
    let mut self_loop = vec![0.0; count];
    let mut weights: Vec<std::collections::HashMap<usize, f64>> =
        vec![std::collections::HashMap::new(); count];

    for i in 0..level.len() {
        let ci = communities[i];
        self_loop[ci] += level.self_loop[i];
        for &(j, w) in &level.adj[i] {
            let cj = communities[j];
            if ci == cj {
                if i < j {
                    self_loop[ci] += w;
                }
            } else {
                *weights[ci].entry(cj).or_insert(0.0) += w;
            }
        }
    }

    let adj = weights
        .into_iter()
        .map(|m| {
            let mut v: Vec<(usize, f64)> = m.into_iter().collect();
            v.sort_unstable_by_key(|a| a.0);
            v
        })
        .collect();
    LevelGraph { adj, self_loop }
}

/// Renumbers community ids to 0.. in order of first appearance.
fn densify(assignment: &[usize]) -> Vec<usize> {
    let max = assignment.iter().max().map(|&c| c + 1).unwrap_or(0);
    let mut map = vec![usize::MAX; max];
    let mut next = 0;
    assignment
        .iter()
        .map(|&c| {
            if map[c] == usize::MAX {
                map[c] = next;
                next += 1;
            }
            map[c]
        })
        .collect()
}
