use std::path::PathBuf;

use clap::Args;
use homofair::graph::GraphManifest;

use crate::manifest::{write_atomic, RunManifest};
use crate::{resolve_seed, Failure, GraphArgs};

#[derive(Args, Debug, serde::Serialize)]
pub struct AssortArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub graph: GraphArgs,

    #[arg(long)]
    pub seed: Option<u64>,

    /// Graph summary JSON (n, |E|, group sizes, assortativity).
    #[arg(long)]
    pub out: PathBuf,

    /// Also export the preprocessed edge list.
    #[arg(long)]
    pub export_edges: Option<PathBuf>,
}

pub fn run(args: AssortArgs) -> Result<(), Failure> {
    let seed = resolve_seed(args.seed);
    let mut manifest = RunManifest::new(
        "assort",
        serde_json::to_value(&args).expect("args serialize"),
        seed,
    );
    let graph = super::load_graph(&args.graph, seed, &mut manifest)?;
    let summary = GraphManifest::describe(&graph);
    let json = serde_json::to_string_pretty(&summary).map_err(|e| Failure::Data(e.to_string()))?;
    write_atomic(&args.out, &json)?;
    manifest.write_for(&args.out)?;
    if let Some(path) = &args.export_edges {
        graph.export_edge_list(path)?;
    }
    println!(
        "assort: n={} |E|={} groups={:?} r={}",
        summary.nodes,
        summary.edges,
        summary.group_sizes,
        summary
            .assortativity
            .map(|r| format!("{r:.4}"))
            .unwrap_or_else(|| "n/a".into())
    );
    Ok(())
}
