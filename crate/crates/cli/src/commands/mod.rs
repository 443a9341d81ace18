pub mod assort;
pub mod bounds;
pub mod classify;
pub mod influence;
pub mod kernel;
pub mod rank;

use std::collections::HashMap;

use homofair::graph::{
    load_edge_list, load_labels, load_ratings, preprocess, sbm_sample, PreprocessConfig, SbmParams,
};
use homofair::Graph;

use crate::manifest::RunManifest;
use crate::{Failure, GraphArgs};

/// Loads (or samples) a graph per the shared flags, applies the
/// preprocessing filters, and records input digests on the manifest.
pub fn load_graph(
    args: &GraphArgs,
    seed: u64,
    manifest: &mut RunManifest,
) -> Result<Graph, Failure> {
    let mut graph = if let Some(path) = &args.graph {
        if !path.exists() {
            return Err(Failure::Data(format!(
                "input file {} does not exist",
                path.display()
            )));
        }
        manifest.digest_input(path)?;
        let g = load_edge_list(path, args.directed)?;
        match &args.labels {
            Some(labels) => {
                if !labels.exists() {
                    return Err(Failure::Data(format!(
                        "label file {} does not exist",
                        labels.display()
                    )));
                }
                manifest.digest_input(labels)?;
                load_labels(labels, g)?
            }
            None => g,
        }
    } else if !args.sbm_blocks.is_empty() {
        let params = SbmParams::new(args.sbm_blocks.clone(), args.p_in, args.p_out, seed)
            .map_err(|e| Failure::Usage(e.to_string()))?;
        sbm_sample(&params)?
    } else {
        return Err(Failure::Usage(
            "provide either --graph or --sbm-blocks".into(),
        ));
    };

    let ratings: Option<HashMap<String, u64>> = match &args.ratings {
        Some(path) => {
            if !path.exists() {
                return Err(Failure::Data(format!(
                    "ratings file {} does not exist",
                    path.display()
                )));
            }
            manifest.digest_input(path)?;
            Some(load_ratings(path)?)
        }
        None => None,
    };

    let cfg = PreprocessConfig {
        min_degree: args.min_degree,
        min_group_size: args.min_group_size,
        min_ratings: args.min_ratings,
        take_largest_cc: !args.keep_disconnected,
    };
    graph = preprocess(&graph, &cfg, ratings.as_ref())?;
    Ok(graph)
}

/// Parses a `--kernel` flavor string into a kernel builder.
pub fn parse_kernel_kind(
    name: &str,
    dim: usize,
    resolution: f64,
    seed: u64,
) -> Result<homofair::kernel::KernelKind, Failure> {
    use homofair::kernel::KernelKind;
    match name {
        "laplacian" => Ok(KernelKind::Laplacian { dim }),
        "ground-truth" => Ok(KernelKind::GroundTruth),
        "identity" => Ok(KernelKind::Identity),
        "louvain" => Ok(KernelKind::Louvain { resolution, seed }),
        other => Err(Failure::Usage(format!(
            "unknown kernel kind `{other}` (expected laplacian|ground-truth|identity|louvain)"
        ))),
    }
}
