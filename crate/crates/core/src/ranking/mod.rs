//! Exposure-based fair ranking: position-weighted utilities, kernel-smoothed
//! balanced-exposure penalties, a Frank-Wolfe optimizer over per-user
//! top-k ranking polytopes, and ALS preference completion.

mod als;
mod frank_wolfe;

pub use als::als_complete;
pub use frank_wolfe::{frank_wolfe, FrankWolfeResult, RankingConfig};

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::inequality::{smooth, std_dispersion, Kernel};
use crate::kernel::KernelKind;

/// Nonincreasing position weights; entries beyond `k_bar` are zero.
#[derive(Debug, Clone)]
pub struct PositionWeights {
    b: Vec<f64>,
    k_bar: usize,
}

impl PositionWeights {
    pub fn new(b: Vec<f64>) -> Result<Self> {
        if b.is_empty() {
            return Err(Error::Invalid("position weights must be nonempty".into()));
        }
        for pair in b.windows(2) {
            if pair[1] > pair[0] {
                return Err(Error::Invalid(
                    "position weights must be nonincreasing".into(),
                ));
            }
        }
        if b.last().copied().unwrap_or(0.0) < 0.0 {
            return Err(Error::Invalid(
                "position weights must be nonnegative".into(),
            ));
        }
        let k_bar = b.iter().filter(|&&v| v > 0.0).count();
        if k_bar == 0 {
            return Err(Error::Invalid("position weights are all zero".into()));
        }
        Ok(PositionWeights { b, k_bar })
    }

    /// Logarithmic discount `b_k = 1 / log2(1 + k)` for ranks `k <= k_bar`,
    /// zero below.
    pub fn log_discount(m: usize, k_bar: usize) -> Result<Self> {
        if k_bar == 0 || k_bar > m {
            return Err(Error::Invalid(format!(
                "k_bar must lie in 1..={m}, got {k_bar}"
            )));
        }
        let b: Vec<f64> = (1..=m)
            .map(|k| {
                if k <= k_bar {
                    1.0 / ((1 + k) as f64).log2()
                } else {
                    0.0
                }
            })
            .collect();
        Self::new(b)
    }

    pub fn values(&self) -> &[f64] {
        &self.b
    }

    pub fn k_bar(&self) -> usize {
        self.k_bar
    }

    pub fn m(&self) -> usize {
        self.b.len()
    }

    /// Total exposure budget per user, `|b|_1`.
    pub fn total(&self) -> f64 {
        self.b.iter().sum()
    }
}

/// Linear maximization oracle over one user's ranking polytope: assign the
/// position weights to the highest-scoring items (ties toward the smallest
/// item id). This is the exact maximizer of `<scores, e>` because exposures
/// of bistochastic policies are convex combinations of such assignments.
pub fn lmo_topk(scores: &[f64], weights: &PositionWeights) -> (Vec<f64>, Vec<usize>) {
    let m = scores.len();
    debug_assert!(m >= weights.k_bar());
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| scores[b].partial_cmp(&scores[a]).unwrap().then(a.cmp(&b)));
    let mut exposure = vec![0.0; m];
    let mut top = Vec::with_capacity(weights.k_bar());
    for (rank, &item) in order.iter().take(weights.k_bar()).enumerate() {
        exposure[item] = weights.values()[rank];
        top.push(item);
    }
    (exposure, top)
}

/// Utility-optimal deterministic policy: each user's items sorted by
/// preference descending.
pub fn sorted_policy(rho: &Array2<f64>, weights: &PositionWeights) -> (Array2<f64>, RankingVertex) {
    let (n, m) = rho.dim();
    let mut exposures = Array2::zeros((n, m));
    let mut top_items = Vec::with_capacity(n);
    for i in 0..n {
        let (row, top) = lmo_topk(rho.row(i).as_slice().unwrap(), weights);
        for (j, v) in row.into_iter().enumerate() {
            exposures[[i, j]] = v;
        }
        top_items.push(top);
    }
    (exposures, RankingVertex { top_items })
}

/// Per-user utilities `u_i = sum_j rho_ij e_{j|i}`.
pub fn utility(exposures: &Array2<f64>, rho: &Array2<f64>) -> Result<Vec<f64>> {
    if exposures.dim() != rho.dim() {
        return Err(Error::Dimension(
            "exposures and preferences differ in shape".into(),
        ));
    }
    Ok(exposures
        .rows()
        .into_iter()
        .zip(rho.rows())
        .map(|(e, r)| e.iter().zip(r).map(|(a, b)| a * b).sum())
        .collect())
}

pub fn average_utility(exposures: &Array2<f64>, rho: &Array2<f64>) -> Result<f64> {
    let u = utility(exposures, rho)?;
    Ok(u.iter().sum::<f64>() / u.len() as f64)
}

/// Balanced-exposure unfairness: the mean over items of the smoothed
/// standard-deviation dispersion of kernel-averaged per-user exposures,
/// `(1/m) sum_j F~(A(K, e_j), K 1)`. The identity kernel recovers the
/// individual-level measure; the ground-truth kernel recovers the
/// per-group balanced-exposure criterion exactly.
pub fn unfairness(exposures: &Array2<f64>, kernel: &Kernel, eta: f64) -> Result<f64> {
    let (n, m) = exposures.dim();
    if kernel.n() != n {
        return Err(Error::Dimension(
            "kernel size does not match the user count".into(),
        ));
    }
    let weights = kernel.row_sums();
    let w = weights.as_slice().unwrap();
    let mut total = 0.0;
    for j in 0..m {
        let col: Vec<f64> = exposures.column(j).to_vec();
        let smoothed = smooth(kernel, &col)?;
        total += std_dispersion(&smoothed, eta, Some(w))?;
    }
    Ok(total / m as f64)
}

/// The ranking trade-off objective
/// `f_K(e) = (1/n) sum_i u_i(e) - beta * unfairness(e)`.
pub fn objective(
    exposures: &Array2<f64>,
    rho: &Array2<f64>,
    kernel: &Kernel,
    beta: f64,
    eta: f64,
) -> Result<f64> {
    let util = average_utility(exposures, rho)?;
    if beta == 0.0 {
        return Ok(util);
    }
    Ok(util - beta * unfairness(exposures, kernel, eta)?)
}

/// Analytic gradient of [`objective`] with respect to every exposure entry:
/// `rho_ij / n` from the utility term plus the chain rule through the
/// smoothed dispersion,
/// `d f / d e_{j|i} = rho_ij/n - (beta/m) * n/(W F~_j) * (K^T (a_j - mu_j))_i`
/// with `a_j = A(K, e_j)`, `W = sum(K 1)`, `mu_j` the K1-weighted mean.
pub fn objective_gradient(
    exposures: &Array2<f64>,
    rho: &Array2<f64>,
    kernel: &Kernel,
    beta: f64,
    eta: f64,
) -> Result<Array2<f64>> {
    let (n, m) = exposures.dim();
    let mut grad = rho.mapv(|v| v / n as f64);
    if beta == 0.0 {
        return Ok(grad);
    }
    let weights = kernel.row_sums();
    let w = weights.as_slice().unwrap();
    let w_total: f64 = w.iter().sum();
    for j in 0..m {
        let col: Vec<f64> = exposures.column(j).to_vec();
        let a = smooth(kernel, &col)?;
        let mean = a.iter().zip(w).map(|(ai, wi)| ai * wi).sum::<f64>() / w_total;
        let dispersion = std_dispersion(&a, eta, Some(w))?;
        let resid = Array1::from_iter(a.iter().map(|ai| ai - mean));
        let chain = kernel.matrix().t().dot(&resid);
        let scale = beta / m as f64 * n as f64 / (w_total * dispersion);
        for i in 0..n {
            grad[[i, j]] -= scale * chain[i];
        }
    }
    Ok(grad)
}

/// One extreme point of the product polytope: each user's top-`k_bar`
/// items in slot order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankingVertex {
    pub top_items: Vec<Vec<usize>>,
}

/// Stochastic ranking policy represented by its exposure matrix plus the
/// Frank-Wolfe vertex mixture that realizes it (a Birkhoff-style convex
/// decomposition into deterministic top-k rankings).
#[derive(Debug, Clone)]
pub struct ExposurePolicy {
    exposures: Array2<f64>,
    mixture: Vec<(f64, RankingVertex)>,
}

impl ExposurePolicy {
    pub(crate) fn new(exposures: Array2<f64>, mixture: Vec<(f64, RankingVertex)>) -> Self {
        ExposurePolicy { exposures, mixture }
    }

    pub fn exposures(&self) -> &Array2<f64> {
        &self.exposures
    }

    /// `(coefficient, vertex)` pairs; coefficients are nonnegative and sum
    /// to one.
    pub fn mixture(&self) -> &[(f64, RankingVertex)] {
        &self.mixture
    }

    pub fn n_users(&self) -> usize {
        self.exposures.nrows()
    }

    pub fn n_items(&self) -> usize {
        self.exposures.ncols()
    }
}

/// Checks one exposure row against the top-k polytope: the total equals
/// `|b|_1` and the sorted row is weakly majorized by the position weights.
pub fn in_polytope(row: &[f64], weights: &PositionWeights, tol: f64) -> bool {
    let total: f64 = row.iter().sum();
    if (total - weights.total()).abs() > tol {
        return false;
    }
    let mut sorted = row.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut prefix = 0.0;
    let mut b_prefix = 0.0;
    for (v, b) in sorted.iter().zip(weights.values()) {
        prefix += v;
        b_prefix += b;
        if prefix > b_prefix + tol {
            return false;
        }
    }
    true
}

/// One row of the utility/fairness trade-off curve.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub beta: f64,
    pub kernel: KernelKind,
    pub avg_utility: f64,
    /// Balanced-exposure unfairness measured with the ground-truth kernel.
    pub gt_unfairness: f64,
    pub iterations: usize,
}

/// Runs Frank-Wolfe for every (kernel kind, beta) pair and evaluates each
/// resulting policy against the ground-truth group measure.
pub fn tradeoff_sweep(
    rho: &Array2<f64>,
    graph: &Graph,
    kinds: &[KernelKind],
    betas: &[f64],
    weights: &PositionWeights,
    eta: f64,
    iters: usize,
) -> Result<Vec<SweepRow>> {
    let gt_kernel = KernelKind::GroundTruth.build(graph)?;
    let mut rows = Vec::with_capacity(kinds.len() * betas.len());
    for kind in kinds {
        let kernel = kind.build(graph)?;
        for &beta in betas {
            let cfg = RankingConfig { beta, eta, iters };
            let result = frank_wolfe(rho, &kernel, weights, &cfg)?;
            rows.push(SweepRow {
                beta,
                kernel: *kind,
                avg_utility: average_utility(result.policy.exposures(), rho)?,
                gt_unfairness: unfairness(result.policy.exposures(), &gt_kernel, eta)?,
                iterations: iters,
            });
        }
    }
    Ok(rows)
}
