//! Edge-list, label, and ratings file ingestion plus graph export.

use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{assortativity, Graph};

/// Splits a line on commas, tabs, or runs of spaces, whichever it contains.
fn split_fields(line: &str) -> Vec<&str> {
    if line.contains(',') {
        line.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .collect()
    } else {
        line.split_whitespace().collect()
    }
}

fn is_comment(line: &str) -> bool {
    line.starts_with('#') || line.starts_with('%') || line.starts_with("//")
}

const HEADER_WORDS: &[&str] = &[
    "source", "target", "src", "dst", "from", "to", "u", "v", "node", "node1", "node2", "node_id",
    "id", "id1", "id2", "label", "group", "class", "weight", "user", "user_id", "item", "item_id",
    "count", "value",
];

/// Heuristic header detection: every field on the first line is a common
/// column name. Arbitrary string node ids remain usable because real ids
/// almost never consist solely of these words.
fn looks_like_header(fields: &[&str]) -> bool {
    !fields.is_empty()
        && fields
            .iter()
            .all(|f| HEADER_WORDS.contains(&f.to_ascii_lowercase().as_str()))
}

fn read_lines(path: &Path) -> Result<Vec<(usize, String)>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim().to_string()))
        .filter(|(_, l)| !l.is_empty() && !is_comment(l))
        .collect())
}

/// Loads a delimiter-separated edge list (`u<sep>v[<sep>weight]`, one edge
/// per line, optional header) into an undirected [`Graph`].
///
/// Node ids may be arbitrary strings; they are remapped to dense `0..n` in
/// order of first appearance and the original names are kept on the graph.
/// Duplicate edges collapse with weights summed and self-loops are dropped.
/// `directed_as_undirected` marks inputs that list each link per direction;
/// reciprocal pairs merge into one undirected edge either way because edges
/// are canonicalized before collapsing.
pub fn load_edge_list(path: impl AsRef<Path>, directed_as_undirected: bool) -> Result<Graph> {
    let _ = directed_as_undirected;
    let path = path.as_ref();
    let mut lines = read_lines(path)?;
    if let Some((_, first)) = lines.first() {
        if looks_like_header(&split_fields(first)) {
            lines.remove(0);
        }
    }
    if lines.is_empty() {
        return Err(Error::EmptyGraph(format!(
            "{} contains no edges",
            path.display()
        )));
    }

    let mut name_to_id: HashMap<String, usize> = HashMap::new();
    let mut names: Vec<String> = Vec::new();
    let intern = |name: &str, names: &mut Vec<String>, map: &mut HashMap<String, usize>| {
        *map.entry(name.to_string()).or_insert_with(|| {
            names.push(name.to_string());
            names.len() - 1
        })
    };

    let mut raw = Vec::with_capacity(lines.len());
    for (lineno, line) in &lines {
        let fields = split_fields(line);
        if fields.len() < 2 || fields.len() > 3 {
            return Err(Error::parse(
                *lineno,
                format!("expected `u<sep>v[<sep>weight]`, got {:?}", line),
            ));
        }
        let u = intern(fields[0], &mut names, &mut name_to_id);
        let v = intern(fields[1], &mut names, &mut name_to_id);
        let w = if fields.len() == 3 {
            fields[2].parse::<f64>().map_err(|_| {
                Error::parse(*lineno, format!("weight `{}` is not a number", fields[2]))
            })?
        } else {
            1.0
        };
        if w < 0.0 || !w.is_finite() {
            return Err(Error::parse(*lineno, format!("weight {w} out of range")));
        }
        raw.push((u, v, w));
    }

    let mut graph = Graph::from_weighted_edges(names.len(), &raw)?;
    graph.set_node_names(names);
    Ok(graph)
}

/// Attaches categorical labels from a two-column `node_id,label` file.
///
/// Every labeled id must exist in the graph's remap table; label values are
/// treated as categories and must not be fractional numerics. Nodes missing
/// from the file stay unlabeled and are reported by
/// [`Graph::unlabeled_count`].
pub fn load_labels(path: impl AsRef<Path>, graph: Graph) -> Result<Graph> {
    let path = path.as_ref();
    let mut lines = read_lines(path)?;
    if let Some((_, first)) = lines.first() {
        if looks_like_header(&split_fields(first)) {
            lines.remove(0);
        }
    }

    let name_to_id: HashMap<&str, usize> = graph
        .node_names()
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();

    let mut labels: Vec<Option<usize>> = vec![None; graph.node_count()];
    let mut label_ids: HashMap<String, usize> = HashMap::new();
    let mut label_names: Vec<String> = Vec::new();
    for (lineno, line) in &lines {
        let fields = split_fields(line);
        if fields.len() != 2 {
            return Err(Error::parse(
                *lineno,
                format!("expected `node_id,label`, got {:?}", line),
            ));
        }
        let node = *name_to_id
            .get(fields[0])
            .ok_or_else(|| Error::parse(*lineno, format!("unknown node id `{}`", fields[0])))?;
        let value = fields[1];
        // A label column holding fractional numbers is not categorical.
        if value.parse::<f64>().is_ok() && value.parse::<i64>().is_err() {
            return Err(Error::parse(
                *lineno,
                format!("label `{value}` is not categorical"),
            ));
        }
        let group = *label_ids.entry(value.to_string()).or_insert_with(|| {
            label_names.push(value.to_string());
            label_names.len() - 1
        });
        labels[node] = Some(group);
    }
    if label_names.is_empty() {
        return Err(Error::Invalid(format!(
            "{} contains no labels",
            path.display()
        )));
    }

    let mut graph = graph;
    graph.set_labels(labels, label_names);
    Ok(graph)
}

/// Loads per-user rating counts from a `user_id,item_id,count` CSV.
/// Returns the number of ratings per user id (row count per user, so a
/// `user,item` two-column file also works).
pub fn load_ratings(path: impl AsRef<Path>) -> Result<HashMap<String, u64>> {
    let path = path.as_ref();
    let mut lines = read_lines(path)?;
    if let Some((_, first)) = lines.first() {
        if looks_like_header(&split_fields(first)) {
            lines.remove(0);
        }
    }
    let mut counts = HashMap::new();
    for (lineno, line) in &lines {
        let fields = split_fields(line);
        if fields.len() < 2 || fields.len() > 3 {
            return Err(Error::parse(
                *lineno,
                format!("expected `user_id,item_id[,count]`, got {:?}", line),
            ));
        }
        *counts.entry(fields[0].to_string()).or_insert(0) += 1;
    }
    Ok(counts)
}

/// Summary emitted next to exported graphs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphManifest {
    pub nodes: usize,
    pub edges: usize,
    pub group_sizes: Vec<usize>,
    pub assortativity: Option<f64>,
}

impl GraphManifest {
    pub fn describe(graph: &Graph) -> Self {
        GraphManifest {
            nodes: graph.node_count(),
            edges: graph.edge_count(),
            group_sizes: graph.group_sizes(),
            assortativity: assortativity(graph).ok(),
        }
    }
}

impl Graph {
    /// Writes the edge list back out in `u<sep>v<sep>weight` form using the
    /// original node names.
    pub fn export_edge_list(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut out = String::new();
        for &(u, v, w) in self.edges() {
            out.push_str(&format!(
                "{} {} {}\n",
                self.node_name(u),
                self.node_name(v),
                w
            ));
        }
        let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        f.write_all(out.as_bytes()).map_err(|e| Error::io(path, e))
    }
}
