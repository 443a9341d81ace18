//! Similarity-kernel inference from network topology: Laplacian Eigenmaps,
//! cosine-similarity kernels, and community-partition kernels.

use nalgebra::{DMatrix, SymmetricEigen};
use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{louvain, Graph};
use crate::inequality::{ground_truth_kernel, Kernel};

/// Row-similarity function applied to embeddings (extension point; the
/// cosine kernel is the only implemented similarity).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Similarity {
    Cosine,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct KernelConfig {
    /// Embedding dimension: how many of the smallest non-zero eigenvalues
    /// to keep.
    pub dim: usize,
    /// Eigenvalues at or below this threshold count as zero modes.
    pub zero_tol: f64,
    pub similarity: Similarity,
}

impl KernelConfig {
    pub fn new(dim: usize) -> Self {
        KernelConfig {
            dim,
            zero_tol: 1e-8,
            similarity: Similarity::Cosine,
        }
    }
}

/// Spectral embedding: rows are node coordinates, columns are eigenvectors
/// of the symmetric degree-normalized Laplacian for the `dim` smallest
/// eigenvalues strictly above the zero threshold.
#[derive(Debug, Clone)]
pub struct Embedding {
    matrix: Array2<f64>,
    eigenvalues: Vec<f64>,
}

impl Embedding {
    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn dim(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.matrix
    }

    /// Ascending, all strictly above the zero threshold.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Writes the embedding as CSV (n rows, d columns) with a JSON sidecar
    /// carrying the eigenvalues and the config that produced it.
    pub fn write_csv(
        &self,
        path: impl AsRef<std::path::Path>,
        sidecar: impl AsRef<std::path::Path>,
        cfg: &KernelConfig,
    ) -> Result<()> {
        let path = path.as_ref();
        let mut out = String::new();
        for i in 0..self.n() {
            let row: Vec<String> = self.matrix.row(i).iter().map(|v| format!("{v}")).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        std::fs::write(path, out).map_err(|e| Error::io(path, e))?;

        #[derive(Serialize)]
        struct Sidecar<'a> {
            eigenvalues: &'a [f64],
            config: &'a KernelConfig,
        }
        let sidecar = sidecar.as_ref();
        let json = serde_json::to_string_pretty(&Sidecar {
            eigenvalues: &self.eigenvalues,
            config: cfg,
        })
        .expect("sidecar serializes");
        std::fs::write(sidecar, json).map_err(|e| Error::io(sidecar, e))
    }
}

/// Laplacian Eigenmaps embedding of a graph.
///
/// Eigendecomposes `L = I - D^{-1/2} A D^{-1/2}` densely, discards
/// eigenvalues at or below `zero_tol` (one zero mode per connected
/// component), and keeps the `dim` smallest of the rest. Every eigenvector
/// is sign-fixed so its largest-magnitude entry is positive, which makes
/// the embedding deterministic for a given graph and config.
pub fn laplacian_eigenmaps(graph: &Graph, cfg: &KernelConfig) -> Result<Embedding> {
    let n = graph.node_count();
    if cfg.dim == 0 {
        return Err(Error::Invalid("embedding dimension must be >= 1".into()));
    }
    if n < cfg.dim + 1 {
        return Err(Error::Invalid(format!(
            "graph has {n} nodes, too few for dimension {}",
            cfg.dim
        )));
    }
    let mut inv_sqrt_deg = Vec::with_capacity(n);
    for u in 0..n {
        let d = graph.weighted_degree(u);
        if d <= 0.0 {
            return Err(Error::Invalid(format!(
                "node {u} ({}) is isolated; the normalized Laplacian is undefined",
                graph.node_name(u)
            )));
        }
        inv_sqrt_deg.push(1.0 / d.sqrt());
    }

    let mut lap = DMatrix::<f64>::identity(n, n);
    for &(u, v, w) in graph.edges() {
        let value = w * inv_sqrt_deg[u] * inv_sqrt_deg[v];
        lap[(u, v)] -= value;
        lap[(v, u)] -= value;
    }

    let eigen = SymmetricEigen::new(lap);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eigen.eigenvalues[a]
            .partial_cmp(&eigen.eigenvalues[b])
            .unwrap()
    });

    let usable: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&i| eigen.eigenvalues[i] > cfg.zero_tol)
        .collect();
    if usable.len() < cfg.dim {
        return Err(Error::Invalid(format!(
            "requested dimension {} but only {} non-zero eigenvalues are available",
            cfg.dim,
            usable.len()
        )));
    }

    let mut matrix = Array2::zeros((n, cfg.dim));
    let mut eigenvalues = Vec::with_capacity(cfg.dim);
    for (col, &idx) in usable[..cfg.dim].iter().enumerate() {
        let vector = eigen.eigenvectors.column(idx);
        // Sign convention: the entry of largest magnitude (first such on
        // ties) is positive.
        let mut anchor = 0;
        for i in 1..n {
            if vector[i].abs() > vector[anchor].abs() {
                anchor = i;
            }
        }
        let flip = if vector[anchor] < 0.0 { -1.0 } else { 1.0 };
        for i in 0..n {
            matrix[[i, col]] = flip * vector[i];
        }
        eigenvalues.push(eigen.eigenvalues[idx]);
    }
    Ok(Embedding {
        matrix,
        eigenvalues,
    })
}

/// Cosine-similarity kernel of an embedding.
///
/// `S[i,j] = <z_i, z_j> / (|z_i| |z_j|)`, min-max scaled over all entries
/// (diagonal included) to `S_u`, then column-normalized as
/// `K = n S_u D^{-1}` with `D[j,j]` the column sums of `S_u`, so every
/// column of `K` sums to exactly `n`.
pub fn cosine_kernel(embedding: &Embedding) -> Result<Kernel> {
    let n = embedding.n();
    let z = embedding.matrix();
    let mut norms = Vec::with_capacity(n);
    for i in 0..n {
        let norm = z.row(i).iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm <= 0.0 {
            return Err(Error::Domain(format!(
                "embedding row {i} has zero norm; cosine similarity is undefined"
            )));
        }
        norms.push(norm);
    }

    let mut s = Array2::zeros((n, n));
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for i in 0..n {
        for j in i..n {
            let dot: f64 = (0..z.ncols()).map(|d| z[[i, d]] * z[[j, d]]).sum();
            let value = dot / (norms[i] * norms[j]);
            s[[i, j]] = value;
            s[[j, i]] = value;
            min = min.min(value);
            max = max.max(value);
        }
    }
    if max - min <= f64::EPSILON * max.abs().max(1.0) {
        return Err(Error::Domain(
            "similarity matrix is constant; min-max scaling is degenerate".into(),
        ));
    }

    s.mapv_inplace(|v| (v - min) / (max - min));
    for j in 0..n {
        let col_sum = s.column(j).sum();
        if col_sum <= 0.0 {
            return Err(Error::Domain(format!(
                "scaled similarity column {j} has zero mass"
            )));
        }
        let scale = n as f64 / col_sum;
        s.column_mut(j).mapv_inplace(|v| v * scale);
    }
    Kernel::new(s)
}

/// Ground-truth-style kernel over a detected community partition.
pub fn community_kernel(partition: &[usize]) -> Result<Kernel> {
    ground_truth_kernel(partition)
}

/// Kernel flavor selection shared by the solvers' front ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelKind {
    /// Laplacian-Eigenmaps cosine kernel with the given dimension.
    Laplacian { dim: usize },
    /// Partition kernel of the graph's ground-truth labels.
    GroundTruth,
    /// Identity kernel (individual-level measure).
    Identity,
    /// Partition kernel of Louvain communities.
    Louvain { resolution: f64, seed: u64 },
}

impl KernelKind {
    pub fn build(&self, graph: &Graph) -> Result<Kernel> {
        match *self {
            KernelKind::Laplacian { dim } => {
                let embedding = laplacian_eigenmaps(graph, &KernelConfig::new(dim))?;
                cosine_kernel(&embedding)
            }
            KernelKind::GroundTruth => ground_truth_kernel(&graph.labels_dense()?),
            KernelKind::Identity => Ok(Kernel::identity(graph.node_count())),
            KernelKind::Louvain { resolution, seed } => {
                community_kernel(&louvain(graph, resolution, seed)?)
            }
        }
    }
}
