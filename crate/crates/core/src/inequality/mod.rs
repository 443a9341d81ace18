//! Decomposable inequality indices, the kernel averaging operator, and the
//! kernel-based between-group inequality measure.

mod bounds;
mod io;

pub use bounds::{blend_inequality, confounder_bounds, BoundsInput, InequalityBounds};
pub use io::OutcomeVector;

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};

/// Which inequality function to evaluate.
///
/// `GeneralizedEntropy` is the alpha-family index; at alpha = 2 it equals
/// half the squared coefficient of variation. `NormalizedVariance` is
/// `var(x) / mean(x)^2`, i.e. exactly twice the alpha = 2 entropy; the
/// confounder-bounds pipeline uses it, the classification and influence
/// evaluations default to the alpha = 2 entropy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Variant {
    GeneralizedEntropy,
    NormalizedVariance,
}

#[derive(Debug, Clone, Copy)]
pub struct EntropyConfig {
    /// Exponent of the generalized entropy family; 0 and 1 (the limiting
    /// log forms) are unsupported.
    pub alpha: f64,
    pub variant: Variant,
}

impl Default for EntropyConfig {
    fn default() -> Self {
        EntropyConfig {
            alpha: 2.0,
            variant: Variant::GeneralizedEntropy,
        }
    }
}

impl EntropyConfig {
    pub fn generalized(alpha: f64) -> Self {
        EntropyConfig {
            alpha,
            variant: Variant::GeneralizedEntropy,
        }
    }

    pub fn normalized_variance() -> Self {
        EntropyConfig {
            alpha: 2.0,
            variant: Variant::NormalizedVariance,
        }
    }

    fn validate(&self) -> Result<()> {
        if !self.alpha.is_finite() {
            return Err(Error::Domain("alpha must be finite".into()));
        }
        if self.variant == Variant::GeneralizedEntropy && (self.alpha == 0.0 || self.alpha == 1.0) {
            return Err(Error::Domain(
                "alpha in {0, 1} (mean-log-deviation / Theil limits) is unsupported".into(),
            ));
        }
        Ok(())
    }

    /// Effective exponent: the normalized-variance variant behaves as
    /// alpha = 2 wherever the exponent matters (q(mu) = mu^2).
    fn exponent(&self) -> f64 {
        match self.variant {
            Variant::GeneralizedEntropy => self.alpha,
            Variant::NormalizedVariance => 2.0,
        }
    }
}

/// Validates outcome entries for an entropy evaluation. Negative values are
/// always rejected; zeros are permitted for positive exponents (where x^a
/// stays finite) so that binary outcome vectors and smoothed activation
/// probabilities remain measurable, and rejected otherwise.
fn check_domain(values: impl Iterator<Item = f64>, alpha: f64) -> Result<()> {
    for v in values {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::Domain(format!(
                "outcome {v} outside the index domain"
            )));
        }
        if v == 0.0 && alpha <= 0.0 {
            return Err(Error::Domain(
                "zero outcome is outside the domain for alpha <= 0".into(),
            ));
        }
    }
    Ok(())
}

/// Generalized entropy index
/// `F(x) = 1/(n a (a-1)) * sum_i [(x_i / mu)^a - 1]`,
/// or `var(x)/mu^2` for the normalized-variance variant.
pub fn ge_index(x: &[f64], cfg: &EntropyConfig) -> Result<f64> {
    if x.is_empty() {
        return Err(Error::Dimension("empty outcome vector".into()));
    }
    let w = vec![1.0; x.len()];
    ge_weighted(x, &w, cfg)
}

/// Weighted generalized entropy
/// `F(x, w) = 1/(a (a-1)) * sum_i (w_i/|w|_1) [(x_i / mu)^a - 1]`
/// with `mu` the w-weighted mean. Zero-weight entries drop out entirely;
/// uniform weights reduce to [`ge_index`].
pub fn ge_weighted(x: &[f64], w: &[f64], cfg: &EntropyConfig) -> Result<f64> {
    cfg.validate()?;
    if x.len() != w.len() {
        return Err(Error::Dimension(format!(
            "outcomes ({}) and weights ({}) differ in length",
            x.len(),
            w.len()
        )));
    }
    if w.iter().any(|&wi| wi < 0.0 || !wi.is_finite()) {
        return Err(Error::Domain(
            "weights must be nonnegative and finite".into(),
        ));
    }
    let total: f64 = w.iter().sum();
    if total <= 0.0 {
        return Err(Error::Domain("total weight must be positive".into()));
    }
    let alpha = cfg.exponent();
    check_domain(
        x.iter().zip(w).filter(|(_, &wi)| wi > 0.0).map(|(&v, _)| v),
        alpha,
    )?;

    let mu: f64 = x.iter().zip(w).map(|(&xi, &wi)| wi * xi).sum::<f64>() / total;
    if mu <= 0.0 {
        return Err(Error::Domain("mean outcome must be positive".into()));
    }

    match cfg.variant {
        Variant::GeneralizedEntropy => {
            let sum: f64 = x
                .iter()
                .zip(w)
                .filter(|(_, &wi)| wi > 0.0)
                .map(|(&xi, &wi)| wi / total * ((xi / mu).powf(alpha) - 1.0))
                .sum();
            Ok(sum / (alpha * (alpha - 1.0)))
        }
        Variant::NormalizedVariance => {
            let var: f64 = x
                .iter()
                .zip(w)
                .filter(|(_, &wi)| wi > 0.0)
                .map(|(&xi, &wi)| wi / total * (xi - mu) * (xi - mu))
                .sum();
            Ok(var / (mu * mu))
        }
    }
}

/// A nonnegative n-by-n similarity kernel whose columns all sum to the same
/// value. Construction rejects (rather than renormalizes) matrices whose
/// column sums deviate by more than 1e-9 relative.
#[derive(Debug, Clone)]
pub struct Kernel {
    matrix: Array2<f64>,
    column_sum: f64,
}

impl Kernel {
    pub const COLUMN_TOL: f64 = 1e-9;

    pub fn new(matrix: Array2<f64>) -> Result<Self> {
        let (r, c) = matrix.dim();
        if r != c || r == 0 {
            return Err(Error::Dimension(format!(
                "kernel must be square and nonempty, got {r}x{c}"
            )));
        }
        if matrix.iter().any(|&v| v < 0.0 || !v.is_finite()) {
            return Err(Error::Domain(
                "kernel entries must be nonnegative and finite".into(),
            ));
        }
        let sums: Vec<f64> = (0..c).map(|j| matrix.column(j).sum()).collect();
        let column_sum = sums.iter().sum::<f64>() / c as f64;
        if column_sum <= 0.0 {
            return Err(Error::Domain(
                "kernel columns must have positive mass".into(),
            ));
        }
        for (j, s) in sums.iter().enumerate() {
            if (s - column_sum).abs() > Self::COLUMN_TOL * column_sum.abs() {
                return Err(Error::Invalid(format!(
                    "column {j} sums to {s}, expected {column_sum} (1e-9 relative)"
                )));
            }
        }
        Ok(Kernel { matrix, column_sum })
    }

    pub fn identity(n: usize) -> Self {
        Kernel {
            matrix: Array2::eye(n),
            column_sum: 1.0,
        }
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.matrix
    }

    pub fn column_sum(&self) -> f64 {
        self.column_sum
    }

    /// Row sums `K 1`, the per-node similarity mass used as weights.
    pub fn row_sums(&self) -> Array1<f64> {
        self.matrix.sum_axis(ndarray::Axis(1))
    }
}

/// Block-averaging kernel of a partition: `K[i, j] = 1/|g|` when `i` and
/// `j` share group `g`, else 0. Rows and columns sum to one.
pub fn ground_truth_kernel(labels: &[usize]) -> Result<Kernel> {
    let n = labels.len();
    if n == 0 {
        return Err(Error::Dimension("empty partition".into()));
    }
    let groups = labels.iter().max().unwrap() + 1;
    let mut sizes = vec![0usize; groups];
    for &l in labels {
        sizes[l] += 1;
    }
    if sizes.contains(&0) {
        return Err(Error::Invalid(
            "partition contains an empty group id".into(),
        ));
    }
    let mut k = Array2::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            if labels[i] == labels[j] {
                k[[i, j]] = 1.0 / sizes[labels[i]] as f64;
            }
        }
    }
    Kernel::new(k)
}

/// Averaging operator `A(K, y) = (K y) / (K 1)`, elementwise.
pub fn smooth(kernel: &Kernel, y: &[f64]) -> Result<Vec<f64>> {
    let n = kernel.n();
    if y.len() != n {
        return Err(Error::Dimension(format!(
            "outcome length {} does not match kernel size {n}",
            y.len()
        )));
    }
    let yv = Array1::from(y.to_vec());
    let num = kernel.matrix().dot(&yv);
    let den = kernel.row_sums();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        if den[i] <= 0.0 {
            return Err(Error::Domain(format!("kernel row {i} has zero mass")));
        }
        out.push(num[i] / den[i]);
    }
    Ok(out)
}

/// Group-free between-group inequality
/// `Delta_b(y) = F(A(K, y), K 1)`.
pub fn group_free_inequality(kernel: &Kernel, y: &[f64], cfg: &EntropyConfig) -> Result<f64> {
    let smoothed = smooth(kernel, y)?;
    let weights = kernel.row_sums();
    ge_weighted(&smoothed, weights.as_slice().unwrap(), cfg)
}

/// Partition-based between-group inequality `F(x_bar)` where `x_bar`
/// replaces each outcome by its group mean; computed directly from group
/// statistics (`F(group means, group sizes)`), independent of any kernel.
pub fn partition_between_inequality(
    y: &[f64],
    labels: &[usize],
    cfg: &EntropyConfig,
) -> Result<f64> {
    if y.len() != labels.len() {
        return Err(Error::Dimension(
            "outcomes and labels differ in length".into(),
        ));
    }
    let groups = labels.iter().max().map(|&g| g + 1).unwrap_or(0);
    let mut sums = vec![0.0; groups];
    let mut sizes = vec![0.0; groups];
    for (&yi, &g) in y.iter().zip(labels) {
        sums[g] += yi;
        sizes[g] += 1.0;
    }
    if sizes.contains(&0.0) {
        return Err(Error::Invalid(
            "partition contains an empty group id".into(),
        ));
    }
    let means: Vec<f64> = sums.iter().zip(&sizes).map(|(s, n)| s / n).collect();
    ge_weighted(&means, &sizes, cfg)
}

/// Splits total inequality into within and between parts:
/// `F(y) = Delta_w + Delta_b` with
/// `Delta_w = sum_i q(A(K,y)_i) (K_i^T 1) / (q(mu) c n) F(y, K_i)` over the
/// rows `K_i` of the kernel (`c` the common column sum, `q(mu) = mu^alpha`)
/// and `Delta_b = F(A(K,y), K 1)`.
pub fn decompose(kernel: &Kernel, y: &[f64], cfg: &EntropyConfig) -> Result<(f64, f64)> {
    cfg.validate()?;
    let n = kernel.n();
    let smoothed = smooth(kernel, y)?;
    let row_sums = kernel.row_sums();
    let delta_b = ge_weighted(&smoothed, row_sums.as_slice().unwrap(), cfg)?;

    let alpha = cfg.exponent();
    let mu = y.iter().sum::<f64>() / n as f64;
    if mu <= 0.0 {
        return Err(Error::Domain("mean outcome must be positive".into()));
    }
    let c = kernel.column_sum();
    let q_mu = mu.powf(alpha);

    let mut delta_w = 0.0;
    for i in 0..n {
        let row = kernel.matrix().row(i);
        let within = ge_weighted(y, row.as_slice().unwrap(), cfg)?;
        let q_i = smoothed[i].powf(alpha);
        delta_w += q_i * row_sums[i] / (q_mu * c * n as f64) * within;
    }
    Ok((delta_w, delta_b))
}

/// Smoothed standard-deviation dispersion
/// `F~(y) = sqrt(eta + sum_i (y_i - mean)^2)`; the weighted form replaces
/// the uniform 1/n term weights by `w_i/|w|_1` (so each squared deviation
/// carries `n w_i / |w|_1`) around the weighted mean and reduces to the
/// unweighted form under constant weights.
pub fn std_dispersion(y: &[f64], eta: f64, weights: Option<&[f64]>) -> Result<f64> {
    if eta <= 0.0 || !eta.is_finite() {
        return Err(Error::Domain(format!("eta must be > 0, got {eta}")));
    }
    if y.is_empty() {
        return Err(Error::Dimension("empty outcome vector".into()));
    }
    let n = y.len() as f64;
    let ss = match weights {
        None => {
            let mean = y.iter().sum::<f64>() / n;
            y.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
        }
        Some(w) => {
            if w.len() != y.len() {
                return Err(Error::Dimension(
                    "weights and outcomes differ in length".into(),
                ));
            }
            if w.iter().any(|&wi| wi < 0.0 || !wi.is_finite()) {
                return Err(Error::Domain(
                    "weights must be nonnegative and finite".into(),
                ));
            }
            let total: f64 = w.iter().sum();
            if total <= 0.0 {
                return Err(Error::Domain("total weight must be positive".into()));
            }
            let mean = y.iter().zip(w).map(|(v, wi)| v * wi).sum::<f64>() / total;
            n * y
                .iter()
                .zip(w)
                .map(|(v, wi)| wi / total * (v - mean) * (v - mean))
                .sum::<f64>()
        }
    };
    Ok((eta + ss).sqrt())
}
