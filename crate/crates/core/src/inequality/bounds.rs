//! Closed-form behavior of the kernel measure under confounding
//! similarities: the blend formula and the lower/upper inequality bounds.

use crate::error::{Error, Result};

/// Parameters of the confounded-kernel setting: two equal-size sensitive
/// groups whose in-group similarity is `p_s`, confounding kernels with
/// total mass at most `q_c * n^2 / 2`, and label-rate gap `epsilon`
/// (rates `1/2 + eps` and `1/2 - eps`).
#[derive(Debug, Clone, Copy)]
pub struct BoundsInput {
    pub p_s: f64,
    pub q_c: f64,
    pub epsilon: f64,
}

impl BoundsInput {
    pub fn new(p_s: f64, q_c: f64, epsilon: f64) -> Result<Self> {
        if p_s <= 0.0 || !p_s.is_finite() {
            return Err(Error::Domain(format!("p_s must be > 0, got {p_s}")));
        }
        if q_c < 0.0 || !q_c.is_finite() {
            return Err(Error::Domain(format!("q_c must be >= 0, got {q_c}")));
        }
        if !(0.0..=0.5).contains(&epsilon) {
            return Err(Error::Domain(format!(
                "epsilon must lie in [0, 1/2], got {epsilon}"
            )));
        }
        Ok(BoundsInput { p_s, q_c, epsilon })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalityBounds {
    pub lower: f64,
    pub upper: f64,
    /// Ground-truth inequality `4 eps^2` (normalized variance).
    pub delta0: f64,
}

/// Bounds on the measured inequality under confounders:
/// `[(p/(p+q))^2 d0, d0 + (q/(p+q))^2 (1 - d0)]` with `d0 = 4 eps^2`.
/// With no confounding mass both bounds collapse onto `d0`.
pub fn confounder_bounds(input: &BoundsInput) -> InequalityBounds {
    let BoundsInput {
        p_s: p,
        q_c: q,
        epsilon,
    } = *input;
    let delta0 = 4.0 * epsilon * epsilon;
    let lower = (p / (p + q)).powi(2) * delta0;
    let upper = delta0 + (q / (p + q)).powi(2) * (1.0 - delta0);
    InequalityBounds {
        lower,
        upper,
        delta0,
    }
}

/// Measured inequality when every cross-group pair shares a flat blending
/// similarity `q < p`: `Delta_b' = ((p - q)/(p + q))^2 * Delta_b^0`,
/// monotone decreasing in `q` for fixed `p`.
pub fn blend_inequality(p: f64, q: f64, delta0: f64) -> Result<f64> {
    if !(p.is_finite() && q.is_finite()) || q < 0.0 {
        return Err(Error::Domain("p and q must be finite with q >= 0".into()));
    }
    if p <= q {
        return Err(Error::Domain(format!(
            "blend formula needs p > q, got p = {p}, q = {q}"
        )));
    }
    if delta0 < 0.0 {
        return Err(Error::Domain(format!("delta0 must be >= 0, got {delta0}")));
    }
    Ok(((p - q) / (p + q)).powi(2) * delta0)
}
