use std::path::PathBuf;

use clap::Args;
use homofair::kernel::{cosine_kernel, laplacian_eigenmaps, KernelConfig};

use crate::manifest::RunManifest;
use crate::{resolve_seed, Failure, GraphArgs};

#[derive(Args, Debug, serde::Serialize)]
pub struct KernelArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub graph: GraphArgs,

    /// Embedding dimension (number of non-zero Laplacian eigenvalues kept).
    #[arg(long, default_value_t = 3)]
    pub dim: usize,

    /// RNG seed (overrides HOMOFAIR_SEED).
    #[arg(long)]
    pub seed: Option<u64>,

    /// Also write the compact binary kernel (`<prefix>.kernel.bin`).
    #[arg(long)]
    pub binary: bool,

    /// Output prefix: writes `<prefix>.embedding.csv`,
    /// `<prefix>.embedding.json`, `<prefix>.kernel.csv`, and
    /// `<prefix>.manifest.json`.
    #[arg(long)]
    pub out_prefix: PathBuf,
}

pub fn run(args: KernelArgs) -> Result<(), Failure> {
    let seed = resolve_seed(args.seed);
    let mut manifest = RunManifest::new(
        "kernel",
        serde_json::to_value(&args).expect("args serialize"),
        seed,
    );
    let graph = super::load_graph(&args.graph, seed, &mut manifest)?;

    let cfg = KernelConfig::new(args.dim);
    let embedding = laplacian_eigenmaps(&graph, &cfg)?;
    let kernel = cosine_kernel(&embedding)?;

    let prefix = args.out_prefix.display();
    embedding.write_csv(
        format!("{prefix}.embedding.csv"),
        format!("{prefix}.embedding.json"),
        &cfg,
    )?;
    kernel.write_csv(format!("{prefix}.kernel.csv"))?;
    if args.binary {
        kernel.write_binary(format!("{prefix}.kernel.bin"))?;
    }
    manifest.write_for(PathBuf::from(format!("{prefix}.kernel.csv")))?;
    println!(
        "kernel: n={} dim={} written to {prefix}.kernel.csv",
        kernel.n(),
        embedding.dim()
    );
    Ok(())
}
