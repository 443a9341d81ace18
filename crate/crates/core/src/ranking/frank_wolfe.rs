//! Frank-Wolfe over the product of per-user top-k ranking polytopes.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::inequality::Kernel;
use crate::ranking::{
    lmo_topk, objective, objective_gradient, sorted_policy, ExposurePolicy, PositionWeights,
    RankingVertex,
};

#[derive(Debug, Clone, Copy)]
pub struct RankingConfig {
    /// Utility/unfairness trade-off weight.
    pub beta: f64,
    /// Dispersion smoothing; must be positive (keeps the penalty smooth).
    pub eta: f64,
    pub iters: usize,
}

impl Default for RankingConfig {
    fn default() -> Self {
        RankingConfig {
            beta: 1.0,
            eta: 0.1,
            iters: 200,
        }
    }
}

#[derive(Debug, Clone)]
pub struct FrankWolfeResult {
    pub policy: ExposurePolicy,
    /// Objective value at the start and after every iteration
    /// (`iters + 1` entries), non-decreasing within float tolerance.
    pub trace: Vec<f64>,
}

/// Maximizes `f_K(e) = avg utility - beta * unfairness` by conditional
/// gradient: start at the utility-optimal sorted policy, call the top-k
/// LMO per user on the gradient, and mix with step `2/(t+2)`. The step is
/// halved whenever it would decrease the objective (the LMO direction is
/// an ascent direction, so a small enough step never does), which keeps
/// the returned trace monotone. The vertex mixture is accumulated so the
/// final iterate is returned together with its convex decomposition into
/// deterministic rankings.
pub fn frank_wolfe(
    rho: &Array2<f64>,
    kernel: &Kernel,
    weights: &PositionWeights,
    cfg: &RankingConfig,
) -> Result<FrankWolfeResult> {
    let (n, m) = rho.dim();
    if n == 0 || m == 0 {
        return Err(Error::Dimension("preference matrix is empty".into()));
    }
    if kernel.n() != n {
        return Err(Error::Dimension(
            "kernel size does not match the user count".into(),
        ));
    }
    if m < weights.m() {
        return Err(Error::Dimension(
            "position weights cover more items than exist".into(),
        ));
    }
    if cfg.iters == 0 {
        return Err(Error::Invalid("iters must be >= 1".into()));
    }
    if cfg.eta.is_nan() || cfg.eta <= 0.0 {
        return Err(Error::Domain(format!("eta must be > 0, got {}", cfg.eta)));
    }
    if cfg.beta < 0.0 {
        return Err(Error::Domain(format!(
            "beta must be >= 0, got {}",
            cfg.beta
        )));
    }

    let (mut exposures, init_vertex) = sorted_policy(rho, weights);
    let mut mixture: Vec<(f64, RankingVertex)> = vec![(1.0, init_vertex)];
    let mut current = objective(&exposures, rho, kernel, cfg.beta, cfg.eta)?;
    let mut trace = Vec::with_capacity(cfg.iters + 1);
    trace.push(current);

    for t in 0..cfg.iters {
        let grad = objective_gradient(&exposures, rho, kernel, cfg.beta, cfg.eta)?;
        let mut vertex_exposures = Array2::zeros((n, m));
        let mut top_items = Vec::with_capacity(n);
        for i in 0..n {
            let (row, top) = lmo_topk(grad.row(i).as_slice().unwrap(), weights);
            for (j, v) in row.into_iter().enumerate() {
                vertex_exposures[[i, j]] = v;
            }
            top_items.push(top);
        }

        let mut gamma = 2.0 / (t as f64 + 2.0);
        let mut accepted = None;
        while gamma > 1e-12 {
            let candidate = &exposures * (1.0 - gamma) + &vertex_exposures * gamma;
            let value = objective(&candidate, rho, kernel, cfg.beta, cfg.eta)?;
            if value >= current - 1e-12 {
                accepted = Some((candidate, value));
                break;
            }
            gamma *= 0.5;
        }
        match accepted {
            Some((candidate, value)) => {
                exposures = candidate;
                current = value;
                for (coeff, _) in &mut mixture {
                    *coeff *= 1.0 - gamma;
                }
                mixture.push((gamma, RankingVertex { top_items }));
            }
            None => {
                // No useful step along this direction; the iterate stays.
            }
        }
        trace.push(current);
    }

    Ok(FrankWolfeResult {
        policy: ExposurePolicy::new(exposures, mixture),
        trace,
    })
}
