//! Reader for the TU graph benchmark layout.
//!
//! A dataset `NAME` is a directory of plain-text files:
//!
//! * `NAME_A.txt`: `i, j` per line, 1-indexed global node ids
//! * `NAME_graph_indicator.txt`: graph id (1-indexed) of each node
//! * `NAME_graph_labels.txt`: class label of each graph
//! * `NAME_node_labels.txt` (optional): integer label per node
//! * `NAME_edge_labels.txt` (optional): integer label per line of `NAME_A.txt`
//! * `NAME_node_attributes.txt` (optional): comma-separated reals per node,
//!   used only when node labels are absent
//!
//! Integer labels are one-hot encoded over the ascending alphabet of values
//! present anywhere in the dataset. Each undirected edge is normally listed
//! in both directions; the two records are merged.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::TuError;
use crate::fixtures::one_hot;
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub graphs: Vec<Graph>,
    /// Dense class index per graph.
    pub class_labels: Vec<usize>,
    pub num_classes: usize,
    /// Raw graph label for each dense class index.
    pub class_alphabet: Vec<i64>,
    pub node_label_alphabet: Vec<i64>,
    pub edge_label_alphabet: Vec<i64>,
}

impl Dataset {
    pub fn from_parts(
        name: &str,
        graphs: Vec<Graph>,
        class_labels: Vec<usize>,
        num_classes: usize,
        node_label_alphabet: Vec<i64>,
        edge_label_alphabet: Vec<i64>,
    ) -> Result<Self, TuError> {
        if graphs.is_empty() {
            return Err(TuError::Empty);
        }
        if class_labels.len() != graphs.len() {
            return Err(TuError::LineCount {
                file: "class labels".into(),
                expected: graphs.len(),
                found: class_labels.len(),
            });
        }
        if let Some(&bad) = class_labels.iter().find(|&&c| c >= num_classes) {
            return Err(TuError::Parse { path: PathBuf::new(), line: 0, msg: format!("class {bad} out of range") });
        }
        let dims = (graphs[0].node_dim(), graphs[0].edge_dim());
        for g in &graphs {
            if (g.node_dim(), g.edge_dim()) != dims {
                return Err(crate::error::GraphError::DimensionMismatch {
                    left: dims,
                    right: (g.node_dim(), g.edge_dim()),
                }
                .into());
            }
        }
        Ok(Dataset {
            name: name.to_string(),
            graphs,
            class_labels,
            num_classes,
            class_alphabet: (0..num_classes as i64).collect(),
            node_label_alphabet,
            edge_label_alphabet,
        })
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn node_dim(&self) -> usize {
        self.graphs[0].node_dim()
    }

    pub fn edge_dim(&self) -> usize {
        self.graphs[0].edge_dim()
    }

    /// Graphs and labels at the given indices.
    pub fn subset(&self, indices: &[usize]) -> (Vec<&Graph>, Vec<usize>) {
        (indices.iter().map(|&i| &self.graphs[i]).collect(), indices.iter().map(|&i| self.class_labels[i]).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetStats {
    pub name: String,
    pub num_graphs: usize,
    pub num_classes: usize,
    pub avg_nodes: f64,
    /// Mean number of undirected edges.
    pub avg_edges: f64,
    /// Mean number of directed edge records (twice `avg_edges`).
    pub avg_directed_edges: f64,
    pub node_feature_dim: usize,
    pub edge_feature_dim: usize,
}

pub fn dataset_stats(d: &Dataset) -> DatasetStats {
    let n = d.graphs.len() as f64;
    let nodes: usize = d.graphs.iter().map(Graph::node_count).sum();
    let edges: usize = d.graphs.iter().map(Graph::edge_count).sum();
    DatasetStats {
        name: d.name.clone(),
        num_graphs: d.graphs.len(),
        num_classes: d.num_classes,
        avg_nodes: nodes as f64 / n,
        avg_edges: edges as f64 / n,
        avg_directed_edges: 2.0 * edges as f64 / n,
        node_feature_dim: d.node_dim(),
        edge_feature_dim: d.edge_dim(),
    }
}

impl fmt::Display for DatasetStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<12} {:>7} {:>7} {:>9} {:>9} {:>11} {:>8} {:>8}",
            "dataset", "graphs", "classes", "avg_nodes", "avg_edges", "avg_directed", "node_dim", "edge_dim"
        )?;
        write!(
            f,
            "{:<12} {:>7} {:>7} {:>9.2} {:>9.2} {:>12.2} {:>8} {:>8}",
            self.name,
            self.num_graphs,
            self.num_classes,
            self.avg_nodes,
            self.avg_edges,
            self.avg_directed_edges,
            self.node_feature_dim,
            self.edge_feature_dim
        )
    }
}

/// Published benchmark statistics for the edge-labelled TU datasets.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReferenceStats {
    pub name: &'static str,
    pub num_graphs: usize,
    pub num_classes: usize,
    pub avg_nodes: f64,
    pub avg_edges: f64,
    pub node_feature_dim: usize,
    pub edge_feature_dim: usize,
}

const fn reference(
    name: &'static str,
    num_graphs: usize,
    num_classes: usize,
    avg_nodes: f64,
    avg_edges: f64,
    node_feature_dim: usize,
    edge_feature_dim: usize,
) -> ReferenceStats {
    ReferenceStats { name, num_graphs, num_classes, avg_nodes, avg_edges, node_feature_dim, edge_feature_dim }
}

pub const REFERENCE_STATS: [ReferenceStats; 12] = [
    reference("MUTAG", 188, 2, 17.93, 19.79, 7, 4),
    reference("AIDS", 2000, 2, 15.69, 16.20, 42, 3),
    reference("COX2_MD", 303, 2, 26.28, 335.12, 7, 6),
    reference("Cuneiform", 267, 30, 21.27, 44.80, 10, 4),
    reference("ER_MD", 446, 2, 21.33, 234.85, 10, 6),
    reference("PTC_FM", 349, 2, 14.11, 14.48, 18, 4),
    reference("PTC_FR", 351, 2, 14.56, 15.00, 19, 4),
    reference("PTC_MM", 336, 2, 13.97, 14.32, 20, 4),
    reference("PTC_MR", 344, 2, 14.29, 14.69, 18, 4),
    reference("Tox21_AhR", 607, 2, 17.64, 18.06, 53, 4),
    reference("Tox21_AR", 585, 2, 17.99, 18.45, 53, 4),
    reference("Tox21_ARE", 552, 2, 17.01, 17.33, 53, 4),
];

/// Environment variable that overrides the dataset cache directory.
pub const DATA_DIR_ENV: &str = "EDGEWL_DATA_DIR";

/// `$EDGEWL_DATA_DIR`, else `$HOME/.cache/edgewl/tu`, else `./edgewl-data`.
pub fn default_data_dir() -> PathBuf {
    if let Some(dir) = std::env::var_os(DATA_DIR_ENV).filter(|d| !d.is_empty()) {
        return PathBuf::from(dir);
    }
    match std::env::var_os("HOME") {
        Some(home) => PathBuf::from(home).join(".cache").join("edgewl").join("tu"),
        None => PathBuf::from("edgewl-data"),
    }
}

pub fn reference_stats(name: &str) -> Option<&'static ReferenceStats> {
    REFERENCE_STATS.iter().find(|r| r.name.eq_ignore_ascii_case(name))
}

/// Which edge-count convention matched a reference row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EdgeConvention {
    Undirected,
    Directed,
    Neither,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatsComparison {
    pub counts_match: bool,
    pub dims_match: bool,
    pub nodes_match: bool,
    pub edge_convention: EdgeConvention,
}

impl StatsComparison {
    pub fn all_match(&self) -> bool {
        self.counts_match && self.dims_match && self.nodes_match && self.edge_convention != EdgeConvention::Neither
    }
}

/// Compares computed statistics against a reference row; averages must
/// agree within `tolerance`.
pub fn compare_stats(s: &DatasetStats, r: &ReferenceStats, tolerance: f64) -> StatsComparison {
    let close = |a: f64, b: f64| (a - b).abs() <= tolerance + 1e-9;
    StatsComparison {
        counts_match: s.num_graphs == r.num_graphs && s.num_classes == r.num_classes,
        dims_match: s.node_feature_dim == r.node_feature_dim && s.edge_feature_dim == r.edge_feature_dim,
        nodes_match: close(s.avg_nodes, r.avg_nodes),
        edge_convention: if close(s.avg_edges, r.avg_edges) {
            EdgeConvention::Undirected
        } else if close(s.avg_directed_edges, r.avg_edges) {
            EdgeConvention::Directed
        } else {
            EdgeConvention::Neither
        },
    }
}

struct Lines {
    path: PathBuf,
    lines: Vec<(usize, String)>,
}

impl Lines {
    fn read(path: PathBuf) -> Result<Self, TuError> {
        let text = fs::read_to_string(&path).map_err(|source| {
            if source.kind() == std::io::ErrorKind::NotFound {
                TuError::MissingFile(path.clone())
            } else {
                TuError::Io { path: path.clone(), source }
            }
        })?;
        let lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim().to_string()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        Ok(Lines { path, lines })
    }

    fn optional(path: PathBuf) -> Result<Option<Self>, TuError> {
        if path.exists() {
            Self::read(path).map(Some)
        } else {
            Ok(None)
        }
    }

    fn error(&self, line: usize, msg: impl Into<String>) -> TuError {
        TuError::Parse { path: self.path.clone(), line, msg: msg.into() }
    }

    fn integers(&self) -> Result<Vec<i64>, TuError> {
        self.lines.iter().map(|(n, l)| l.parse::<i64>().map_err(|e| self.error(*n, format!("`{l}`: {e}")))).collect()
    }

    fn expect_len(&self, expected: usize) -> Result<(), TuError> {
        if self.lines.len() != expected {
            return Err(TuError::LineCount {
                file: self.path.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default(),
                expected,
                found: self.lines.len(),
            });
        }
        Ok(())
    }
}

fn alphabet(values: &[i64]) -> (Vec<i64>, HashMap<i64, usize>) {
    let sorted: Vec<i64> = values.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let rank = sorted.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    (sorted, rank)
}

/// Parses `directory/name_*.txt` into a [`Dataset`].
pub fn parse_tu_dataset(directory: &Path, name: &str) -> Result<Dataset, TuError> {
    let file = |suffix: &str| directory.join(format!("{name}_{suffix}.txt"));

    let a = Lines::read(file("A"))?;
    let indicator = Lines::read(file("graph_indicator"))?;
    let graph_labels = Lines::read(file("graph_labels"))?;
    let node_labels = Lines::optional(file("node_labels"))?;
    let edge_labels = Lines::optional(file("edge_labels"))?;

    let indicator_ids = indicator.integers()?;
    let node_total = indicator_ids.len();
    // graph_of[node] (0-based graph), local index within its graph
    let mut graph_of = Vec::with_capacity(node_total);
    let mut local = Vec::with_capacity(node_total);
    let mut sizes: Vec<usize> = Vec::new();
    let mut prev = 0usize;
    for (node, &id) in indicator_ids.iter().enumerate() {
        let id = usize::try_from(id).map_err(|_| indicator.error(node + 1, "negative graph id"))?;
        if id != prev && id != prev + 1 {
            return Err(TuError::NonContiguousIndicator { node: node + 1, prev, id });
        }
        if id == prev + 1 {
            sizes.push(0);
        }
        prev = id;
        graph_of.push(id - 1);
        local.push(sizes[id - 1]);
        sizes[id - 1] += 1;
    }
    let graph_count = sizes.len();

    let raw_classes = graph_labels.integers()?;
    graph_labels.expect_len(graph_count)?;
    let (class_alphabet, class_rank) = alphabet(&raw_classes);

    let raw_edge_labels = match &edge_labels {
        Some(l) => {
            l.expect_len(a.lines.len())?;
            Some(l.integers()?)
        }
        None => None,
    };
    let (edge_alphabet, edge_rank) = alphabet(raw_edge_labels.as_deref().unwrap_or(&[]));
    let edge_dim = edge_alphabet.len();

    // Merge directed records into undirected edges, per graph, in order of
    // first appearance.
    let mut per_graph_edges: Vec<Vec<(usize, usize)>> = vec![Vec::new(); graph_count];
    let mut per_graph_edge_labels: Vec<Vec<i64>> = vec![Vec::new(); graph_count];
    let mut seen: HashMap<(usize, usize), (usize, i64)> = HashMap::new();
    for (k, (line_no, line)) in a.lines.iter().enumerate() {
        let mut parts = line.split(',').map(str::trim);
        let mut endpoint = || -> Result<usize, TuError> {
            let tok = parts.next().ok_or_else(|| a.error(*line_no, "expected `i, j`"))?;
            let v: usize = tok.parse().map_err(|e| a.error(*line_no, format!("`{tok}`: {e}")))?;
            if v == 0 || v > node_total {
                return Err(a.error(*line_no, format!("node id {v} out of range 1..={node_total}")));
            }
            Ok(v - 1)
        };
        let (i, j) = (endpoint()?, endpoint()?);
        if parts.next().is_some() {
            return Err(a.error(*line_no, "expected exactly two ids"));
        }
        let (gi, gj) = (graph_of[i], graph_of[j]);
        if gi != gj {
            return Err(TuError::CrossGraphEdge { a: i + 1, b: j + 1, ga: gi + 1, gb: gj + 1 });
        }
        let label = raw_edge_labels.as_ref().map_or(0, |l| l[k]);
        let key = (i.min(j), i.max(j));
        match seen.get(&key) {
            Some(&(_, existing)) => {
                if existing != label {
                    return Err(TuError::ConflictingEdgeLabels {
                        a: key.0 + 1,
                        b: key.1 + 1,
                        forward: existing,
                        backward: label,
                    });
                }
            }
            None => {
                seen.insert(key, (gi, label));
                per_graph_edges[gi].push((local[key.0], local[key.1]));
                per_graph_edge_labels[gi].push(label);
            }
        }
    }

    enum NodeSource {
        Labels(Vec<usize>, usize),
        Attributes(Vec<Vec<f64>>, usize),
        Degrees,
    }
    let mut node_alphabet = Vec::new();
    let source = if let Some(nl) = &node_labels {
        nl.expect_len(node_total)?;
        let raw = nl.integers()?;
        let (alpha, rank) = alphabet(&raw);
        let dim = alpha.len();
        node_alphabet = alpha;
        NodeSource::Labels(raw.iter().map(|v| rank[v]).collect(), dim)
    } else if let Some(attrs) = Lines::optional(file("node_attributes"))? {
        attrs.expect_len(node_total)?;
        let rows = attrs
            .lines
            .iter()
            .map(|(n, l)| {
                l.split(',')
                    .map(|t| t.trim().parse::<f64>().map_err(|e| attrs.error(*n, format!("`{t}`: {e}"))))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let dim = rows.first().map_or(0, Vec::len);
        NodeSource::Attributes(rows, dim)
    } else {
        NodeSource::Degrees
    };

    let mut graphs = Vec::with_capacity(graph_count);
    let mut offset = 0;
    for (g, &size) in sizes.iter().enumerate() {
        let node_features: Vec<Vec<f64>> = match &source {
            NodeSource::Labels(ranks, dim) => ranks[offset..offset + size].iter().map(|&r| one_hot(r, *dim)).collect(),
            NodeSource::Attributes(rows, _) => rows[offset..offset + size].to_vec(),
            NodeSource::Degrees => vec![Vec::new(); size],
        };
        let node_dim = match &source {
            NodeSource::Labels(_, d) | NodeSource::Attributes(_, d) => *d,
            NodeSource::Degrees => 0,
        };
        let edge_features = per_graph_edge_labels[g]
            .iter()
            .map(|l| if edge_dim == 0 { Vec::new() } else { one_hot(edge_rank[l], edge_dim) })
            .collect();
        graphs.push(Graph::with_dims(
            size,
            node_dim,
            edge_dim,
            std::mem::take(&mut per_graph_edges[g]),
            node_features,
            edge_features,
        )?);
        offset += size;
    }
    if matches!(source, NodeSource::Degrees) {
        let max_degree = graphs.iter().map(Graph::max_degree).max().unwrap_or(0);
        graphs = graphs.iter().map(|g| g.assign_degree_features(max_degree)).collect::<Result<_, _>>()?;
    }

    let isolated: usize = graphs.iter().map(|g| g.validate().len()).sum();
    if isolated > 0 {
        log::warn!("{name}: {isolated} isolated nodes");
    }

    let class_labels = raw_classes.iter().map(|c| class_rank[c]).collect();
    let mut d = Dataset::from_parts(name, graphs, class_labels, class_alphabet.len(), node_alphabet, edge_alphabet)?;
    d.class_alphabet = class_alphabet;
    Ok(d)
}
