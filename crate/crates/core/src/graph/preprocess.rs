//! Dataset preprocessing: rating, degree, and group-size filters plus
//! largest-connected-component extraction.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Thresholds for [`preprocess`]. Zero disables the corresponding filter.
#[derive(Debug, Clone, Copy)]
pub struct PreprocessConfig {
    /// Keep nodes with at least this many distinct neighbors.
    pub min_degree: usize,
    /// Keep groups with at least this many members; positive values also
    /// drop unlabeled nodes (their group size is unknown).
    pub min_group_size: usize,
    /// Keep users with at least this many ratings (needs a ratings map).
    pub min_ratings: u64,
    /// Keep only the largest connected component.
    pub take_largest_cc: bool,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        PreprocessConfig {
            min_degree: 0,
            min_group_size: 0,
            min_ratings: 0,
            take_largest_cc: true,
        }
    }
}

/// Applies the filters once each, in order: ratings, degree, group size,
/// largest connected component. Degrees and group sizes are measured on the
/// graph as it stands when the filter runs; filters are not iterated to a
/// fixpoint. Ratings are keyed by original node name so filtered graphs can
/// be re-filtered consistently.
pub fn preprocess(
    graph: &Graph,
    cfg: &PreprocessConfig,
    ratings: Option<&HashMap<String, u64>>,
) -> Result<Graph> {
    let mut g = graph.clone();

    if cfg.min_ratings > 0 {
        let ratings = ratings
            .ok_or_else(|| Error::Invalid("min_ratings > 0 requires a ratings map".into()))?;
        let keep: Vec<bool> = (0..g.node_count())
            .map(|i| ratings.get(g.node_name(i)).copied().unwrap_or(0) >= cfg.min_ratings)
            .collect();
        g = stage(g.induced_subgraph(&keep), "ratings filter")?;
    }

    if cfg.min_degree > 0 {
        let keep: Vec<bool> = (0..g.node_count())
            .map(|i| g.degree(i) >= cfg.min_degree)
            .collect();
        g = stage(g.induced_subgraph(&keep), "degree filter")?;
    }

    if cfg.min_group_size > 0 {
        let sizes = g.group_sizes();
        let keep: Vec<bool> = match g.labels() {
            Some(labels) => labels
                .iter()
                .map(|l| l.map(|gr| sizes[gr] >= cfg.min_group_size).unwrap_or(false))
                .collect(),
            None => {
                return Err(Error::Invalid(
                    "min_group_size > 0 requires a labeled graph".into(),
                ))
            }
        };
        g = stage(g.induced_subgraph(&keep), "group-size filter")?;
    }

    if cfg.take_largest_cc {
        let comp = g.connected_components();
        let count = comp.iter().max().map(|&c| c + 1).unwrap_or(0);
        let mut sizes = vec![0usize; count];
        for &c in &comp {
            sizes[c] += 1;
        }
        // Ties break toward the component appearing first (smallest node id).
        let best = (0..count)
            .max_by_key(|&c| (sizes[c], usize::MAX - c))
            .unwrap();
        let keep: Vec<bool> = comp.iter().map(|&c| c == best).collect();
        g = stage(g.induced_subgraph(&keep), "largest component")?;
    }

    Ok(g)
}

fn stage(result: Result<Graph>, name: &str) -> Result<Graph> {
    result.map_err(|e| match e {
        Error::EmptyGraph(_) => Error::EmptyGraph(format!("{name} removed every node")),
        other => other,
    })
}
