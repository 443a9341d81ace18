use std::collections::HashMap;
use std::path::PathBuf;

use clap::Args;
use homofair::ranking::{als_complete, tradeoff_sweep, PositionWeights};

use crate::manifest::{write_atomic, RunManifest};
use crate::{resolve_seed, Failure, GraphArgs};

#[derive(Args, Debug, serde::Serialize)]
pub struct RankArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub graph: GraphArgs,

    /// Kernel flavor for the optimized penalty:
    /// laplacian|ground-truth|identity|louvain.
    #[arg(long, default_value = "laplacian")]
    pub kernel: String,

    /// Embedding dimension for the laplacian kernel.
    #[arg(long, default_value_t = 2)]
    pub dim: usize,

    /// Louvain resolution (louvain kernel only).
    #[arg(long, default_value_t = 1.0)]
    pub resolution: f64,

    /// Trade-off weights to sweep.
    #[arg(long, value_delimiter = ',', default_value = "0,0.5,1,2,4")]
    pub beta_grid: Vec<f64>,

    /// Dispersion smoothing.
    #[arg(long, default_value_t = 0.1)]
    pub eta: f64,

    /// Ranking slots with nonzero position weight (capped at the item
    /// count).
    #[arg(long, default_value_t = 40)]
    pub kbar: usize,

    /// Frank-Wolfe iterations per beta.
    #[arg(long, default_value_t = 200)]
    pub iters: usize,

    /// ALS factorization rank.
    #[arg(long, default_value_t = 32)]
    pub als_rank: usize,

    /// ALS alternations.
    #[arg(long, default_value_t = 15)]
    pub als_iters: usize,

    /// ALS ridge regularization.
    #[arg(long, default_value_t = 0.1)]
    pub als_reg: f64,

    #[arg(long)]
    pub seed: Option<u64>,

    #[arg(long)]
    pub out: PathBuf,
}

/// Reads user-item interactions for the graph's surviving users; items are
/// remapped densely in order of first appearance.
fn load_interactions(
    path: &PathBuf,
    graph: &homofair::Graph,
) -> Result<(Vec<(usize, usize)>, usize), Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Data(format!("reading {}: {e}", path.display())))?;
    let mut items: HashMap<String, usize> = HashMap::new();
    let mut interactions = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line
            .split([',', '\t', ' '])
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .collect();
        if fields.len() < 2 {
            return Err(Failure::Data(format!(
                "{} line {}: expected `user_id,item_id[,count]`",
                path.display(),
                idx + 1
            )));
        }
        if idx == 0 && fields.iter().all(|f| f.chars().any(|c| c.is_alphabetic())) {
            // tolerate a header row
            if fields[0].eq_ignore_ascii_case("user_id") || fields[0].eq_ignore_ascii_case("user") {
                continue;
            }
        }
        let Some(user) = graph.node_index(fields[0]) else {
            continue; // user filtered out during preprocessing
        };
        let next = items.len();
        let item = *items.entry(fields[1].to_string()).or_insert(next);
        interactions.push((user, item));
    }
    Ok((interactions, items.len()))
}

pub fn run(args: RankArgs) -> Result<(), Failure> {
    let seed = resolve_seed(args.seed);
    let mut manifest = RunManifest::new(
        "rank",
        serde_json::to_value(&args).expect("args serialize"),
        seed,
    );
    let graph = super::load_graph(&args.graph, seed, &mut manifest)?;
    let ratings_path = args
        .graph
        .ratings
        .as_ref()
        .ok_or_else(|| Failure::Usage("rank requires --ratings".into()))?;

    let (interactions, n_items) = load_interactions(ratings_path, &graph)?;
    if n_items == 0 {
        return Err(Failure::Data(
            "no usable interactions for the surviving users".into(),
        ));
    }
    let rank = args.als_rank.min(n_items.min(graph.node_count()));
    let rho = als_complete(
        &interactions,
        graph.node_count(),
        n_items,
        rank,
        args.als_iters,
        args.als_reg,
        seed,
    )
    .map_err(|e| {
        Failure::Data(format!(
            "{e} (users without ratings survive preprocessing; try --min-ratings 1)"
        ))
    })?;

    let kbar = args.kbar.min(n_items);
    let weights =
        PositionWeights::log_discount(n_items, kbar).map_err(|e| Failure::Usage(e.to_string()))?;
    let kind = super::parse_kernel_kind(&args.kernel, args.dim, args.resolution, seed)?;
    let rows = tradeoff_sweep(
        &rho,
        &graph,
        &[kind],
        &args.beta_grid,
        &weights,
        args.eta,
        args.iters,
    )?;

    let mut csv = String::from("beta,kernel,avg_utility,gt_unfairness,iterations\n");
    for row in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            row.beta, args.kernel, row.avg_utility, row.gt_unfairness, row.iterations
        ));
    }
    write_atomic(&args.out, &csv)?;
    manifest.write_for(&args.out)?;
    println!(
        "rank: {} beta value(s) with the {} kernel written to {}",
        rows.len(),
        args.kernel,
        args.out.display()
    );
    Ok(())
}
