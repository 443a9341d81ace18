use std::path::PathBuf;

use clap::Args;
use homofair::classify::{
    evaluate_relabel, solve_exact, solve_heuristic, RelabelInstance, RelabelOutcome,
    MAX_EXACT_NODES,
};
use homofair::inequality::EntropyConfig;
use homofair::Graph;

use crate::manifest::{write_atomic, RunManifest};
use crate::{resolve_seed, Failure, GraphArgs};

#[derive(Args, Debug, serde::Serialize)]
pub struct ClassifyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub graph: GraphArgs,

    /// Initial labels CSV (`node_id,value` with value 0/1). When absent,
    /// --seed-groups must list the groups whose members start positive.
    #[arg(long)]
    pub yhat: Option<PathBuf>,

    /// Ground-truth group names that start with all-positive labels.
    #[arg(long, value_delimiter = ',')]
    pub seed_groups: Vec<String>,

    /// Kernel flavor: laplacian|ground-truth|identity|louvain.
    #[arg(long, default_value = "laplacian")]
    pub kernel: String,

    /// Embedding dimension for the laplacian kernel.
    #[arg(long, default_value_t = 2)]
    pub dim: usize,

    /// Louvain resolution (louvain kernel only).
    #[arg(long, default_value_t = 1.0)]
    pub resolution: f64,

    /// Solve a single threshold instead of sweeping.
    #[arg(long, conflicts_with_all = ["theta_max", "steps"])]
    pub theta: Option<f64>,

    /// Sweep upper bound on the minimum-exposure threshold.
    #[arg(long, default_value_t = 0.5)]
    pub theta_max: f64,

    /// Number of sweep points from 0 to --theta-max.
    #[arg(long, default_value_t = 20)]
    pub steps: usize,

    #[arg(long)]
    pub seed: Option<u64>,

    #[arg(long)]
    pub out: PathBuf,
}

fn initial_labels(args: &ClassifyArgs, graph: &Graph) -> Result<Vec<bool>, Failure> {
    if let Some(path) = &args.yhat {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Data(format!("reading {}: {e}", path.display())))?;
        let mut y = vec![false; graph.node_count()];
        let mut assigned = vec![false; graph.node_count()];
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
            if fields.len() != 2 {
                return Err(Failure::Data(format!(
                    "{} line {}: expected `node_id,value`",
                    path.display(),
                    idx + 1
                )));
            }
            if idx == 0 && fields[1].parse::<u8>().is_err() {
                continue; // header
            }
            let Some(node) = graph.node_index(fields[0]) else {
                // Nodes dropped by preprocessing may still appear in the file.
                continue;
            };
            let value: u8 = fields[1].parse().map_err(|_| {
                Failure::Data(format!(
                    "{} line {}: value must be 0/1",
                    path.display(),
                    idx + 1
                ))
            })?;
            y[node] = value != 0;
            assigned[node] = true;
        }
        if assigned.iter().any(|&a| !a) {
            return Err(Failure::Data("some nodes have no initial label".into()));
        }
        Ok(y)
    } else if !args.seed_groups.is_empty() {
        let labels = graph.labels_dense()?;
        let mut groups = Vec::new();
        for name in &args.seed_groups {
            let id = graph
                .label_names()
                .iter()
                .position(|l| l == name)
                .ok_or_else(|| Failure::Usage(format!("unknown group `{name}`")))?;
            groups.push(id);
        }
        Ok(labels.iter().map(|l| groups.contains(l)).collect())
    } else {
        Err(Failure::Usage("provide --yhat or --seed-groups".into()))
    }
}

pub fn run(args: ClassifyArgs) -> Result<(), Failure> {
    let seed = resolve_seed(args.seed);
    let mut manifest = RunManifest::new(
        "classify",
        serde_json::to_value(&args).expect("args serialize"),
        seed,
    );
    let graph = super::load_graph(&args.graph, seed, &mut manifest)?;
    if let Some(path) = &args.yhat {
        manifest.digest_input(path)?;
    }
    let labels = graph.labels_dense()?;
    let kind = super::parse_kernel_kind(&args.kernel, args.dim, args.resolution, seed)?;
    let kernel = kind.build(&graph)?;
    let y_hat = initial_labels(&args, &graph)?;
    let entropy = EntropyConfig::generalized(2.0);

    let solve = |theta: f64| -> Result<RelabelOutcome, Failure> {
        let instance = RelabelInstance::new(y_hat.clone(), kernel.clone(), theta)
            .map_err(|e| Failure::Usage(e.to_string()))?;
        let outcome = if graph.node_count() <= MAX_EXACT_NODES {
            solve_exact(&instance)?
        } else {
            solve_heuristic(&instance)?
        };
        Ok(outcome)
    };

    let thetas: Vec<f64> = match args.theta {
        Some(theta) => vec![theta],
        None => {
            if args.steps < 2 {
                return Err(Failure::Usage("--steps must be at least 2".into()));
            }
            (0..args.steps)
                .map(|i| args.theta_max * i as f64 / (args.steps - 1) as f64)
                .collect()
        }
    };

    let mut csv = String::from("theta,flips,flip_fraction,delta0,min_exposure\n");
    let mut feasible_rows = 0;
    for &theta in &thetas {
        match solve(theta)? {
            RelabelOutcome::Feasible(result) => {
                let report = evaluate_relabel(&y_hat, &result.y_tilde, &labels, &entropy)?;
                csv.push_str(&format!(
                    "{theta},{},{},{},{}\n",
                    result.flips,
                    report.flip_fraction,
                    report.delta0_after,
                    result.min_exposure_achieved
                ));
                feasible_rows += 1;
            }
            RelabelOutcome::Infeasible(rep) => {
                if args.theta.is_some() {
                    return Err(Failure::Infeasible(format!(
                        "no labeling reaches theta={theta} (best minimum exposure {:.6})",
                        rep.best_min_exposure
                    )));
                }
                break; // sweep ends at the first infeasible threshold
            }
        }
    }

    write_atomic(&args.out, &csv)?;
    manifest.write_for(&args.out)?;
    println!(
        "classify: {feasible_rows} feasible threshold(s) written to {}",
        args.out.display()
    );
    Ok(())
}
