use std::path::PathBuf;

use clap::Args;
use homofair::inequality::{confounder_bounds, BoundsInput};

use crate::manifest::{write_atomic, RunManifest};
use crate::Failure;

#[derive(Args, Debug, serde::Serialize)]
pub struct BoundsArgs {
    /// In-group similarity of the sensitive attribute.
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,

    /// Confounding mass parameter.
    #[arg(long, default_value_t = 0.5)]
    pub q: f64,

    /// Number of evenly spaced label-gap values in [0, 1/2].
    #[arg(long, default_value_t = 50)]
    pub eps_steps: usize,

    /// Emit three representative panels (sensitive-dominant, equal,
    /// confounding-dominant) instead of the single (--p, --q) pair.
    #[arg(long)]
    pub panels: bool,

    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(args: BoundsArgs) -> Result<(), Failure> {
    if args.eps_steps < 2 {
        return Err(Failure::Usage("--eps-steps must be at least 2".into()));
    }
    let pairs: Vec<(String, f64, f64)> = if args.panels {
        vec![
            ("sensitive-dominant".into(), 0.75, 0.25),
            ("equal".into(), 0.5, 0.5),
            ("confounding-dominant".into(), 0.25, 0.75),
        ]
    } else {
        vec![("custom".into(), args.p, args.q)]
    };

    let mut csv = String::from("panel,p,q,epsilon,lower,delta0,upper\n");
    for (panel, p, q) in &pairs {
        for step in 0..args.eps_steps {
            let eps = 0.5 * step as f64 / (args.eps_steps - 1) as f64;
            let input = BoundsInput::new(*p, *q, eps).map_err(|e| Failure::Usage(e.to_string()))?;
            let b = confounder_bounds(&input);
            csv.push_str(&format!(
                "{panel},{p},{q},{eps},{},{},{}\n",
                b.lower, b.delta0, b.upper
            ));
        }
    }

    let manifest = RunManifest::new(
        "bounds",
        serde_json::to_value(&args).expect("args serialize"),
        0,
    );
    write_atomic(&args.out, &csv)?;
    manifest.write_for(&args.out)?;
    println!(
        "bounds: {} rows over {} panel(s) written to {}",
        (args.eps_steps) * pairs.len(),
        pairs.len(),
        args.out.display()
    );
    Ok(())
}
