use std::path::PathBuf;

use clap::Args;
use homofair::inequality::EntropyConfig;
use homofair::influence::{
    estimate_activation, evaluate_seeds, greedy_select, CascadeConfig, Objective, ObjectiveKind,
};
use homofair::kernel::KernelKind;

use crate::manifest::{write_atomic, RunManifest};
use crate::{resolve_seed, Failure, GraphArgs};

#[derive(Args, Debug, serde::Serialize)]
pub struct InfluenceArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub graph: GraphArgs,

    /// Objective: group-free|individual|community-maximin|
    /// community-welfare|reach.
    #[arg(long, default_value = "group-free")]
    pub objective: String,

    /// Embedding dimension for the group-free kernel.
    #[arg(long, default_value_t = 2)]
    pub kernel_dim: usize,

    /// Louvain resolution for the community objectives.
    #[arg(long, default_value_t = 1.0)]
    pub resolution: f64,

    /// Cascade transmission probability.
    #[arg(long, default_value_t = 0.1)]
    pub p: f64,

    /// Monte Carlo live-edge samples per estimate.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,

    /// Seed budget.
    #[arg(long, default_value_t = 10)]
    pub budget: usize,

    #[arg(long)]
    pub seed: Option<u64>,

    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(args: InfluenceArgs) -> Result<(), Failure> {
    let seed = resolve_seed(args.seed);
    let mut manifest = RunManifest::new(
        "influence",
        serde_json::to_value(&args).expect("args serialize"),
        seed,
    );
    let graph = super::load_graph(&args.graph, seed, &mut manifest)?;
    let cfg = CascadeConfig::new(args.p, args.samples, seed)
        .map_err(|e| Failure::Usage(e.to_string()))?;

    let objective = match args.objective.as_str() {
        "group-free" => {
            let kernel = KernelKind::Laplacian {
                dim: args.kernel_dim,
            }
            .build(&graph)?;
            Objective::new(ObjectiveKind::GroupFree, Some(kernel))?
        }
        "individual" => Objective::individual(),
        "community-maximin" => {
            let kernel = KernelKind::Louvain {
                resolution: args.resolution,
                seed,
            }
            .build(&graph)?;
            Objective::new(ObjectiveKind::CommunityMaximin, Some(kernel))?
        }
        "community-welfare" => {
            let kernel = KernelKind::Louvain {
                resolution: args.resolution,
                seed,
            }
            .build(&graph)?;
            Objective::new(ObjectiveKind::CommunityWelfare, Some(kernel))?
        }
        "reach" => Objective::reach(),
        other => {
            return Err(Failure::Usage(format!("unknown objective `{other}`")));
        }
    };

    let seeds = greedy_select(&graph, args.budget, &objective, &cfg)?;
    let entropy = EntropyConfig::generalized(2.0);
    let rows = evaluate_seeds(&graph, &seeds, &cfg, &entropy)?;

    let mut csv = String::from("budget,seed_node,delta0,reach,objective_value\n");
    for row in &rows {
        let estimate = estimate_activation(&graph, &seeds[..row.budget], &cfg)?;
        let value = objective.evaluate(&estimate.probs)?;
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            row.budget,
            graph.node_name(row.seed_node),
            row.delta0,
            row.reach,
            value
        ));
    }

    write_atomic(&args.out, &csv)?;
    manifest.write_for(&args.out)?;
    println!(
        "influence: {} seeds ({}) written to {}",
        seeds.len(),
        args.objective,
        args.out.display()
    );
    Ok(())
}
