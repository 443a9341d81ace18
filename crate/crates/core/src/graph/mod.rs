//! Undirected weighted graphs with optional categorical node labels,
//! dataset ingestion, preprocessing, assortativity, SBM sampling, and
//! Louvain community detection.

mod io;
mod louvain;
mod preprocess;
mod sbm;

pub use io::{load_edge_list, load_labels, load_ratings, GraphManifest};
pub use louvain::louvain;
pub use preprocess::{preprocess, PreprocessConfig};
pub use sbm::{sbm_sample, SbmParams};

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Undirected weighted graph over dense node ids `0..n`.
///
/// Edges are stored once in canonical `(u, v)` order with `u < v`; the
/// adjacency lists carry both directions. Self-loops are rejected at
/// construction. Nodes keep their original string names so that graphs
/// ingested from files can be filtered and re-exported without losing the
/// id remap.
#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
    adj: Vec<Vec<(usize, f64)>>,
    node_names: Vec<String>,
    labels: Option<Vec<Option<usize>>>,
    label_names: Vec<String>,
}

impl Graph {
    /// Builds a graph from possibly duplicated, possibly reversed edge pairs.
    /// Duplicates collapse with weights summed; self-loops are dropped.
    pub fn from_weighted_edges(n: usize, raw: &[(usize, usize, f64)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph("graph has no nodes".into()));
        }
        let mut merged: HashMap<(usize, usize), f64> = HashMap::new();
        for &(a, b, w) in raw {
            if a >= n || b >= n {
                return Err(Error::Invalid(format!(
                    "edge ({a}, {b}) references a node >= n = {n}"
                )));
            }
            if w < 0.0 || !w.is_finite() {
                return Err(Error::Invalid(format!(
                    "edge ({a}, {b}) has invalid weight {w}"
                )));
            }
            if a == b {
                continue;
            }
            let key = (a.min(b), a.max(b));
            *merged.entry(key).or_insert(0.0) += w;
        }
        let mut edges: Vec<(usize, usize, f64)> =
            merged.into_iter().map(|((u, v), w)| (u, v, w)).collect();
        edges.sort_unstable_by_key(|a| (a.0, a.1));

        let mut adj = vec![Vec::new(); n];
        for &(u, v, w) in &edges {
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        for list in &mut adj {
            list.sort_unstable_by_key(|a| a.0);
        }
        Ok(Graph {
            n,
            edges,
            adj,
            node_names: (0..n).map(|i| i.to_string()).collect(),
            labels: None,
            label_names: Vec::new(),
        })
    }

    /// Unweighted convenience constructor (every edge gets weight 1).
    pub fn from_edges(n: usize, raw: &[(usize, usize)]) -> Result<Self> {
        let weighted: Vec<_> = raw.iter().map(|&(a, b)| (a, b, 1.0)).collect();
        Self::from_weighted_edges(n, &weighted)
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Canonical `(u, v, weight)` edges with `u < v`.
    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn neighbors(&self, u: usize) -> &[(usize, f64)] {
        &self.adj[u]
    }

    /// Number of distinct neighbors.
    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn weighted_degree(&self, u: usize) -> f64 {
        self.adj[u].iter().map(|&(_, w)| w).sum()
    }

    pub fn node_name(&self, u: usize) -> &str {
        &self.node_names[u]
    }

    pub fn node_names(&self) -> &[String] {
        &self.node_names
    }

    /// Dense node id for an original node name, if present.
    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.node_names.iter().position(|s| s == name)
    }

    pub(crate) fn set_node_names(&mut self, names: Vec<String>) {
        assert_eq!(names.len(), self.n);
        self.node_names = names;
    }

    pub fn is_labeled(&self) -> bool {
        self.labels.is_some()
    }

    /// Per-node group id; `None` entries mark unlabeled nodes.
    pub fn labels(&self) -> Option<&[Option<usize>]> {
        self.labels.as_deref()
    }

    /// Original label value for a dense group id.
    pub fn label_name(&self, group: usize) -> &str {
        &self.label_names[group]
    }

    pub fn label_names(&self) -> &[String] {
        &self.label_names
    }

    pub fn group_count(&self) -> usize {
        self.label_names.len()
    }

    pub(crate) fn set_labels(&mut self, labels: Vec<Option<usize>>, label_names: Vec<String>) {
        assert_eq!(labels.len(), self.n);
        self.labels = Some(labels);
        self.label_names = label_names;
    }

    /// Labels as a dense vector; errors if any node is unlabeled.
    pub fn labels_dense(&self) -> Result<Vec<usize>> {
        let labels = self
            .labels
            .as_ref()
            .ok_or_else(|| Error::Invalid("graph has no labels".into()))?;
        labels
            .iter()
            .enumerate()
            .map(|(i, l)| l.ok_or_else(|| Error::Invalid(format!("node {i} is unlabeled"))))
            .collect()
    }

    pub fn unlabeled_count(&self) -> usize {
        match &self.labels {
            Some(l) => l.iter().filter(|x| x.is_none()).count(),
            None => self.n,
        }
    }

    /// Members per group id (all-labeled graphs only report labeled nodes).
    pub fn group_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.label_names.len()];
        if let Some(labels) = &self.labels {
            for l in labels.iter().flatten() {
                sizes[*l] += 1;
            }
        }
        sizes
    }

    /// Component id per node, ids dense in order of first appearance.
    pub fn connected_components(&self) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.n];
        let mut next = 0;
        let mut stack = Vec::new();
        for start in 0..self.n {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = next;
            stack.push(start);
            while let Some(u) = stack.pop() {
                for &(v, _) in &self.adj[u] {
                    if comp[v] == usize::MAX {
                        comp[v] = next;
                        stack.push(v);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    /// Induced subgraph on `keep`, renumbering to dense ids in ascending
    /// order of the kept original ids. Names and labels carry over.
    pub fn induced_subgraph(&self, keep: &[bool]) -> Result<Graph> {
        assert_eq!(keep.len(), self.n);
        let mut remap = vec![usize::MAX; self.n];
        let mut names = Vec::new();
        for (old, &k) in keep.iter().enumerate() {
            if k {
                remap[old] = names.len();
                names.push(self.node_names[old].clone());
            }
        }
        if names.is_empty() {
            return Err(Error::EmptyGraph("no nodes survive the filter".into()));
        }
        let edges: Vec<_> = self
            .edges
            .iter()
            .filter(|&&(u, v, _)| keep[u] && keep[v])
            .map(|&(u, v, w)| (remap[u], remap[v], w))
            .collect();
        let mut g = Graph::from_weighted_edges(names.len(), &edges)?;
        g.node_names = names;
        if let Some(labels) = &self.labels {
            let sub: Vec<Option<usize>> = (0..self.n)
                .filter(|&i| keep[i])
                .map(|i| labels[i])
                .collect();
            // Re-densify group ids since whole groups may have been dropped.
            let mut seen: Vec<usize> = sub.iter().flatten().copied().collect();
            seen.sort_unstable();
            seen.dedup();
            let dense: Vec<Option<usize>> = sub
                .iter()
                .map(|l| l.map(|g| seen.binary_search(&g).unwrap()))
                .collect();
            let names: Vec<String> = seen.iter().map(|&g| self.label_names[g].clone()).collect();
            g.set_labels(dense, names);
        }
        Ok(g)
    }
}

/// Newman's categorical assortativity coefficient over edge endpoints.
///
/// `r = (tr e - sum_g a_g b_g) / (1 - sum_g a_g b_g)` on the mixing matrix
/// `e` whose entry `(g, h)` is the fraction of edge endpoints joining group
/// `g` to group `h` (each undirected edge contributes both orientations).
/// Edge weights are ignored.
pub fn assortativity(graph: &Graph) -> Result<f64> {
    if graph.edge_count() == 0 {
        return Err(Error::Invalid(
            "assortativity needs at least one edge".into(),
        ));
    }
    let labels = graph.labels_dense()?;
    let g = graph.group_count();
    if g < 2 {
        return Err(Error::Domain(
            "assortativity is undefined for a single group".into(),
        ));
    }
    let mut mixing = vec![vec![0.0f64; g]; g];
    let total = 2.0 * graph.edge_count() as f64;
    for &(u, v, _) in graph.edges() {
        mixing[labels[u]][labels[v]] += 1.0 / total;
        mixing[labels[v]][labels[u]] += 1.0 / total;
    }
    let mut trace = 0.0;
    let mut ab = 0.0;
    for i in 0..g {
        trace += mixing[i][i];
        let a: f64 = mixing[i].iter().sum();
        let b: f64 = (0..g).map(|j| mixing[j][i]).sum();
        ab += a * b;
    }
    if (1.0 - ab).abs() < 1e-15 {
        return Err(Error::Domain(
            "assortativity denominator is zero (degenerate mixing)".into(),
        ));
    }
    Ok((trace - ab) / (1.0 - ab))
}
