//! Stochastic block model sampling.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Parameters of a planted-partition SBM: equal connection probability
/// `p_in` inside every block and `p_out` across blocks.
#[derive(Debug, Clone)]
pub struct SbmParams {
    pub block_sizes: Vec<usize>,
    pub p_in: f64,
    pub p_out: f64,
    pub seed: u64,
}

impl SbmParams {
    pub fn new(block_sizes: Vec<usize>, p_in: f64, p_out: f64, seed: u64) -> Result<Self> {
        if block_sizes.is_empty() || block_sizes.contains(&0) {
            return Err(Error::Invalid(
                "block sizes must be nonempty and positive".into(),
            ));
        }
        for (name, p) in [("p_in", p_in), ("p_out", p_out)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Invalid(format!("{name} = {p} outside [0, 1]")));
            }
        }
        Ok(SbmParams {
            block_sizes,
            p_in,
            p_out,
            seed,
        })
    }

    /// Homophilous instance: additionally requires `p_out <= p_in`.
    pub fn homophilous(block_sizes: Vec<usize>, p_in: f64, p_out: f64, seed: u64) -> Result<Self> {
        if p_out > p_in {
            return Err(Error::Invalid(format!(
                "homophilous SBM needs p_out <= p_in, got {p_out} > {p_in}"
            )));
        }
        Self::new(block_sizes, p_in, p_out, seed)
    }

    pub fn node_count(&self) -> usize {
        self.block_sizes.iter().sum()
    }
}

/// Samples each unordered pair `{i, j}` independently as
/// `Bernoulli(p_in or p_out)` and labels nodes by block id. Reproducible
/// from the seed.
pub fn sbm_sample(params: &SbmParams) -> Result<Graph> {
    let n = params.node_count();
    let mut block = Vec::with_capacity(n);
    for (b, &size) in params.block_sizes.iter().enumerate() {
        block.extend(std::iter::repeat_n(b, size));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let p = if block[i] == block[j] {
                params.p_in
            } else {
                params.p_out
            };
            if rng.random::<f64>() < p {
                edges.push((i, j, 1.0));
            }
        }
    }

    let mut g = Graph::from_weighted_edges(n, &edges)?;
    g.set_labels(
        block.iter().map(|&b| Some(b)).collect(),
        (0..params.block_sizes.len())
            .map(|b| b.to_string())
            .collect(),
    );
    Ok(g)
}
