//! Preference completion by alternating least squares on the binarized
//! interaction matrix.

use nalgebra::{Cholesky, DMatrix, DVector};
use ndarray::Array2;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Completes a full preference matrix from sparse user-item interactions.
///
/// Interactions are binarized (any count becomes 1) into `R`, then `U` and
/// `V` alternate ridge solves of `||R - U V^T||_F^2 + reg (||U||^2 + ||V||^2)`
/// for `iterations` rounds from a seeded random init. The result is
/// `clamp(U V^T, 0, 1)`. Every user must have at least one interaction.
pub fn als_complete(
    interactions: &[(usize, usize)],
    n_users: usize,
    n_items: usize,
    rank: usize,
    iterations: usize,
    reg: f64,
    seed: u64,
) -> Result<Array2<f64>> {
    if interactions.is_empty() {
        return Err(Error::Invalid("no interactions given".into()));
    }
    if rank == 0 || rank > n_items.min(n_users) {
        return Err(Error::Invalid(format!(
            "rank must lie in 1..={}, got {rank}",
            n_items.min(n_users)
        )));
    }
    if reg <= 0.0 {
        return Err(Error::Domain(format!(
            "regularization must be > 0, got {reg}"
        )));
    }
    let mut seen = vec![false; n_users];
    let mut r = DMatrix::<f64>::zeros(n_users, n_items);
    for &(u, i) in interactions {
        if u >= n_users || i >= n_items {
            return Err(Error::Invalid(format!(
                "interaction ({u}, {i}) is out of range"
            )));
        }
        seen[u] = true;
        r[(u, i)] = 1.0;
    }
    if let Some(bad) = seen.iter().position(|&s| !s) {
        return Err(Error::Invalid(format!("user {bad} has no ratings")));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = 1.0 / rank as f64;
    let mut u = DMatrix::<f64>::zeros(n_users, rank);
    let mut v = DMatrix::from_fn(n_items, rank, |_, _| rng.random::<f64>() * scale);

    for _ in 0..iterations {
        solve_side(&mut u, &v, &r, reg, false)?;
        solve_side(&mut v, &u, &r, reg, true)?;
    }

    let full = &u * v.transpose();
    Ok(Array2::from_shape_fn((n_users, n_items), |(i, j)| {
        full[(i, j)].clamp(0.0, 1.0)
    }))
}

/// Ridge update of one factor matrix given the other: every row of `out`
/// solves `(F^T F + reg I) x = F^T r` where `r` is the matching row (or
/// column, when `transpose`) of the interaction matrix.
fn solve_side(
    out: &mut DMatrix<f64>,
    fixed: &DMatrix<f64>,
    r: &DMatrix<f64>,
    reg: f64,
    transpose: bool,
) -> Result<()> {
    let rank = fixed.ncols();
    let mut gram = fixed.transpose() * fixed;
    for d in 0..rank {
        gram[(d, d)] += reg;
    }
    let chol = Cholesky::new(gram)
        .ok_or_else(|| Error::Domain("ALS normal equations are not positive definite".into()))?;
    for row in 0..out.nrows() {
        let target: DVector<f64> = if transpose {
            // `out` holds item factors: use column `row` of R.
            fixed.transpose() * r.column(row).clone_owned()
        } else {
            fixed.transpose() * r.row(row).transpose()
        };
        let solution = chol.solve(&target);
        for d in 0..rank {
            out[(row, d)] = solution[d];
        }
    }
    Ok(())
}
