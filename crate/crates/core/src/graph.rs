//! Attributed undirected graphs.
//!
//! A [`Graph`] is immutable once built. Edges are stored once, with the
//! endpoint pair in `(min, max)` order, and the adjacency list materializes
//! both directions. Node and edge features are dense `f64` vectors of a
//! uniform per-graph dimension.

use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::fmt;

use crate::error::GraphError;

/// An undirected graph with per-node and per-edge feature vectors.
/// Node feature keys in index order and sorted `(edge, feature key)` pairs.
pub type CanonicalForm = (Vec<Vec<u8>>, Vec<((usize, usize), Vec<u8>)>);

#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    node_count: usize,
    node_dim: usize,
    edge_dim: usize,
    edges: Vec<(usize, usize)>,
    node_features: Vec<f64>,
    edge_features: Vec<f64>,
    adjacency: Vec<Vec<(usize, usize)>>,
}

/// Non-fatal findings reported by [`Graph::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphWarning {
    IsolatedNode(usize),
}

impl fmt::Display for GraphWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphWarning::IsolatedNode(i) => write!(f, "node {i} is isolated"),
        }
    }
}

impl Graph {
    /// Builds a graph, inferring feature dimensions from the first node and
    /// first edge (zero when there are none).
    pub fn new(
        node_count: usize,
        edges: Vec<(usize, usize)>,
        node_features: Vec<Vec<f64>>,
        edge_features: Vec<Vec<f64>>,
    ) -> Result<Self, GraphError> {
        let node_dim = node_features.first().map_or(0, Vec::len);
        let edge_dim = edge_features.first().map_or(0, Vec::len);
        Self::with_dims(node_count, node_dim, edge_dim, edges, node_features, edge_features)
    }

    /// Builds a graph with explicit feature dimensions. Needed when a graph
    /// has no edges but belongs to a corpus whose edges carry features.
    pub fn with_dims(
        node_count: usize,
        node_dim: usize,
        edge_dim: usize,
        edges: Vec<(usize, usize)>,
        node_features: Vec<Vec<f64>>,
        edge_features: Vec<Vec<f64>>,
    ) -> Result<Self, GraphError> {
        if node_features.len() != node_count {
            return Err(GraphError::NodeFeatureCount { expected: node_count, found: node_features.len() });
        }
        if edge_features.len() != edges.len() {
            return Err(GraphError::EdgeFeatureCount { expected: edges.len(), found: edge_features.len() });
        }
        let mut flat_nodes = Vec::with_capacity(node_count * node_dim);
        for (i, x) in node_features.iter().enumerate() {
            if x.len() != node_dim {
                return Err(GraphError::RaggedNodeFeatures { node: i, expected: node_dim, found: x.len() });
            }
            check_finite(x)?;
            flat_nodes.extend(x.iter().copied().map(canonical_zero));
        }

        let mut seen = HashSet::with_capacity(edges.len());
        let mut canon = Vec::with_capacity(edges.len());
        let mut flat_edges = Vec::with_capacity(edges.len() * edge_dim);
        let mut adjacency = vec![Vec::new(); node_count];
        for (e, (&(i, j), x)) in edges.iter().zip(&edge_features).enumerate() {
            if i >= node_count || j >= node_count {
                return Err(GraphError::EndpointOutOfRange { edge: e, endpoint: i.max(j), node_count });
            }
            if i == j {
                return Err(GraphError::SelfLoop { edge: e, node: i });
            }
            let key = (i.min(j), i.max(j));
            if !seen.insert(key) {
                return Err(GraphError::DuplicateEdge { a: key.0, b: key.1 });
            }
            if x.len() != edge_dim {
                return Err(GraphError::RaggedEdgeFeatures { edge: e, expected: edge_dim, found: x.len() });
            }
            check_finite(x)?;
            flat_edges.extend(x.iter().copied().map(canonical_zero));
            canon.push(key);
            adjacency[key.0].push((key.1, e));
            adjacency[key.1].push((key.0, e));
        }

        Ok(Graph {
            node_count,
            node_dim,
            edge_dim,
            edges: canon,
            node_features: flat_nodes,
            edge_features: flat_edges,
            adjacency,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn node_dim(&self) -> usize {
        self.node_dim
    }

    pub fn edge_dim(&self) -> usize {
        self.edge_dim
    }

    /// Edges as `(min, max)` endpoint pairs, in insertion order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn node_feature(&self, i: usize) -> &[f64] {
        &self.node_features[i * self.node_dim..(i + 1) * self.node_dim]
    }

    pub fn edge_feature(&self, e: usize) -> &[f64] {
        &self.edge_features[e * self.edge_dim..(e + 1) * self.edge_dim]
    }

    /// `(neighbor, edge index)` pairs incident to `i`.
    pub fn neighbors(&self, i: usize) -> &[(usize, usize)] {
        &self.adjacency[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Index of the edge joining `i` and `j`, if any.
    pub fn find_edge(&self, i: usize, j: usize) -> Option<usize> {
        self.adjacency.get(i)?.iter().find(|&&(n, _)| n == j).map(|&(_, e)| e)
    }

    /// Re-checks every structural invariant and reports isolated nodes.
    /// Panics only if an invariant established at construction is broken.
    pub fn validate(&self) -> Vec<GraphWarning> {
        for (e, &(i, j)) in self.edges.iter().enumerate() {
            assert!(i < j && j < self.node_count, "edge {e} not canonical");
            assert!(self.adjacency[i].contains(&(j, e)) && self.adjacency[j].contains(&(i, e)));
        }
        assert_eq!(self.adjacency.iter().map(Vec::len).sum::<usize>(), 2 * self.edges.len());
        (0..self.node_count).filter(|&i| self.adjacency[i].is_empty()).map(GraphWarning::IsolatedNode).collect()
    }

    /// Relabels node `i` as `p[i]`. Node `p[i]` of the result carries the
    /// features of node `i`; edges keep their features.
    pub fn permute(&self, p: &Permutation) -> Result<Graph, GraphError> {
        if p.len() != self.node_count {
            return Err(GraphError::PermutationLength { expected: self.node_count, found: p.len() });
        }
        let inv = p.inverse();
        let node_features = (0..self.node_count).map(|j| self.node_feature(inv.image(j)).to_vec()).collect();
        let edges = self.edges.iter().map(|&(i, j)| (p.image(i), p.image(j))).collect();
        let edge_features = (0..self.edge_count()).map(|e| self.edge_feature(e).to_vec()).collect();
        Graph::with_dims(self.node_count, self.node_dim, self.edge_dim, edges, node_features, edge_features)
    }

    /// Replaces the (empty) node features with one-hot degrees of width
    /// `max_degree + 1`. `max_degree` is usually taken over a whole dataset.
    pub fn assign_degree_features(&self, max_degree: usize) -> Result<Graph, GraphError> {
        if self.node_dim != 0 {
            return Err(GraphError::HasNodeFeatures(self.node_dim));
        }
        let node_features = (0..self.node_count)
            .map(|i| {
                let d = self.degree(i);
                if d > max_degree {
                    return Err(GraphError::DegreeExceedsWidth { degree: d, max_degree });
                }
                let mut x = vec![0.0; max_degree + 1];
                x[d] = 1.0;
                Ok(x)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Graph::with_dims(
            self.node_count,
            max_degree + 1,
            self.edge_dim,
            self.edges.clone(),
            node_features,
            (0..self.edge_count()).map(|e| self.edge_feature(e).to_vec()).collect(),
        )
    }

    /// Same topology and node features, edge features replaced.
    pub fn with_edge_features(&self, edge_dim: usize, edge_features: Vec<Vec<f64>>) -> Result<Graph, GraphError> {
        Graph::with_dims(
            self.node_count,
            self.node_dim,
            edge_dim,
            self.edges.clone(),
            (0..self.node_count).map(|i| self.node_feature(i).to_vec()).collect(),
            edge_features,
        )
    }

    /// Disjoint union; nodes of `other` are shifted by `self.node_count()`.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph, GraphError> {
        if self.node_dim != other.node_dim || self.edge_dim != other.edge_dim {
            return Err(GraphError::DimensionMismatch {
                left: (self.node_dim, self.edge_dim),
                right: (other.node_dim, other.edge_dim),
            });
        }
        let shift = self.node_count;
        let edges =
            self.edges.iter().copied().chain(other.edges.iter().map(|&(i, j)| (i + shift, j + shift))).collect();
        let nf = (0..self.node_count)
            .map(|i| self.node_feature(i).to_vec())
            .chain((0..other.node_count).map(|i| other.node_feature(i).to_vec()))
            .collect();
        let ef = (0..self.edge_count())
            .map(|e| self.edge_feature(e).to_vec())
            .chain((0..other.edge_count()).map(|e| other.edge_feature(e).to_vec()))
            .collect();
        Graph::with_dims(self.node_count + other.node_count, self.node_dim, self.edge_dim, edges, nf, ef)
    }

    /// Order-independent form used to compare graphs that differ only in
    /// edge listing order: edges sorted with their feature keys.
    pub fn canonical_form(&self) -> CanonicalForm {
        let nodes = (0..self.node_count).map(|i| feature_key(self.node_feature(i))).collect();
        let mut edges: Vec<_> =
            self.edges.iter().enumerate().map(|(e, &pair)| (pair, feature_key(self.edge_feature(e)))).collect();
        edges.sort();
        (nodes, edges)
    }

    pub fn to_data(&self) -> GraphData {
        GraphData {
            node_count: Some(self.node_count),
            node_features: (0..self.node_count).map(|i| self.node_feature(i).to_vec()).collect(),
            edges: self.edges.iter().map(|&(i, j)| [i, j]).collect(),
            edge_features: (0..self.edge_count()).map(|e| self.edge_feature(e).to_vec()).collect(),
            node_dim: Some(self.node_dim),
            edge_dim: Some(self.edge_dim),
        }
    }
}

/// JSON interchange form of a graph.
///
/// ```json
/// {"node_features": [[1.0], [1.0]], "edges": [[0, 1]], "edge_features": [[5.0]]}
/// ```
///
/// `node_count`, `node_dim` and `edge_dim` are optional and inferred when
/// absent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphData {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub node_count: Option<usize>,
    pub node_features: Vec<Vec<f64>>,
    pub edges: Vec<[usize; 2]>,
    #[serde(default)]
    pub edge_features: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub node_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_dim: Option<usize>,
}

impl GraphData {
    pub fn build(&self) -> Result<Graph, GraphError> {
        let node_count = self.node_count.unwrap_or(self.node_features.len());
        let node_dim = self.node_dim.unwrap_or_else(|| self.node_features.first().map_or(0, Vec::len));
        let edge_dim = self.edge_dim.unwrap_or_else(|| self.edge_features.first().map_or(0, Vec::len));
        // Featureless graphs may omit the feature arrays entirely.
        let node_features = if self.node_features.is_empty() && node_dim == 0 {
            vec![Vec::new(); node_count]
        } else {
            self.node_features.clone()
        };
        let edge_features = if self.edge_features.is_empty() && edge_dim == 0 {
            vec![Vec::new(); self.edges.len()]
        } else {
            self.edge_features.clone()
        };
        Graph::with_dims(
            node_count,
            node_dim,
            edge_dim,
            self.edges.iter().map(|&[i, j]| (i, j)).collect(),
            node_features,
            edge_features,
        )
    }
}

/// A bijection on `0..n`; `image(i)` is where node `i` goes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(mapping: Vec<usize>) -> Result<Self, GraphError> {
        let mut seen = vec![false; mapping.len()];
        for &m in &mapping {
            if m >= mapping.len() || std::mem::replace(&mut seen[m], true) {
                return Err(GraphError::NotBijective);
            }
        }
        Ok(Permutation(mapping))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn random<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        use rand::seq::SliceRandom;
        let mut m: Vec<usize> = (0..n).collect();
        m.shuffle(rng);
        Permutation(m)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn image(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &m) in self.0.iter().enumerate() {
            inv[m] = i;
        }
        Permutation(inv)
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = GraphError;

    fn try_from(v: Vec<usize>) -> Result<Self, Self::Error> {
        Permutation::new(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

/// Canonical byte encoding of a feature vector: little-endian IEEE bits,
/// with negative zero folded onto zero.
pub fn feature_key(x: &[f64]) -> Vec<u8> {
    let mut out = Vec::with_capacity(x.len() * 8);
    for &v in x {
        out.extend_from_slice(&canonical_zero(v).to_bits().to_le_bytes());
    }
    out
}

fn canonical_zero(v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v
    }
}

fn check_finite(x: &[f64]) -> Result<(), GraphError> {
    match x.iter().find(|v| !v.is_finite()) {
        Some(&v) => Err(GraphError::NonFinite(v)),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::new(3, vec![(0, 1), (1, 2)], vec![vec![1.0], vec![2.0], vec![3.0]], vec![vec![7.0], vec![8.0]]).unwrap()
    }

    #[test]
    fn smallest_graph_has_symmetric_adjacency() {
        let g = Graph::new(2, vec![(0, 1)], vec![vec![1.0], vec![1.0]], vec![vec![5.0]]).unwrap();
        assert_eq!(g.neighbors(0), &[(1, 0)]);
        assert_eq!(g.neighbors(1), &[(0, 0)]);
        assert!(g.validate().is_empty());
    }

    #[test]
    fn isolated_node_is_a_warning() {
        let g = Graph::new(1, vec![], vec![vec![1.0]], vec![]).unwrap();
        assert_eq!(g.validate(), vec![GraphWarning::IsolatedNode(0)]);
    }

    #[test]
    fn construction_errors_are_distinct() {
        let nf = || vec![vec![1.0], vec![1.0]];
        assert!(matches!(Graph::new(2, vec![(0, 0)], nf(), vec![vec![1.0]]), Err(GraphError::SelfLoop { .. })));
        assert!(matches!(
            Graph::new(2, vec![(0, 1), (1, 0)], nf(), vec![vec![1.0], vec![1.0]]),
            Err(GraphError::DuplicateEdge { a: 0, b: 1 })
        ));
        assert!(matches!(
            Graph::new(2, vec![(0, 2)], nf(), vec![vec![1.0]]),
            Err(GraphError::EndpointOutOfRange { .. })
        ));
        assert!(matches!(
            Graph::new(2, vec![], vec![vec![1.0], vec![1.0, 2.0]], vec![]),
            Err(GraphError::RaggedNodeFeatures { node: 1, .. })
        ));
        assert!(matches!(
            Graph::new(3, vec![(0, 1), (1, 2)], vec![vec![]; 3], vec![vec![1.0], vec![]]),
            Err(GraphError::RaggedEdgeFeatures { edge: 1, .. })
        ));
        assert!(matches!(Graph::new(1, vec![], vec![vec![f64::NAN]], vec![]), Err(GraphError::NonFinite(_))));
    }

    #[test]
    fn reversed_endpoints_are_canonicalized() {
        let g = Graph::new(2, vec![(1, 0)], vec![vec![], vec![]], vec![vec![2.0]]).unwrap();
        assert_eq!(g.edges(), &[(0, 1)]);
        assert_eq!(g.find_edge(1, 0), Some(0));
    }

    #[test]
    fn identity_permutation_is_a_noop() {
        let g = path3();
        assert_eq!(g.permute(&Permutation::identity(3)).unwrap(), g);
    }

    #[test]
    fn swapping_path_ends() {
        let g = path3();
        let h = g.permute(&Permutation::new(vec![2, 1, 0]).unwrap()).unwrap();
        assert_eq!(h.node_feature(0), &[3.0]);
        assert_eq!(h.node_feature(2), &[1.0]);
        assert_eq!(h.edge_feature(h.find_edge(2, 1).unwrap()), &[7.0]);
        assert_eq!(h.degree(1), 2);
    }

    #[test]
    fn permutation_length_mismatch() {
        assert!(matches!(path3().permute(&Permutation::identity(2)), Err(GraphError::PermutationLength { .. })));
        assert!(Permutation::new(vec![0, 0]).is_err());
    }

    #[test]
    fn degree_features() {
        let g = Graph::new(3, vec![(0, 1), (1, 2)], vec![vec![]; 3], vec![vec![1.0]; 2]).unwrap();
        let d = g.assign_degree_features(g.max_degree()).unwrap();
        assert_eq!(d.node_feature(0), &[0.0, 1.0, 0.0]);
        assert_eq!(d.node_feature(1), &[0.0, 0.0, 1.0]);
        assert_eq!(d.node_feature(2), &[0.0, 1.0, 0.0]);

        let lone = Graph::new(1, vec![], vec![vec![]], vec![]).unwrap();
        assert_eq!(lone.assign_degree_features(0).unwrap().node_feature(0), &[1.0]);

        let tri = Graph::new(3, vec![(0, 1), (1, 2), (0, 2)], vec![vec![]; 3], vec![vec![]; 3]).unwrap();
        let t = tri.assign_degree_features(2).unwrap();
        assert!((0..3).all(|i| t.node_feature(i) == t.node_feature(0)));

        assert!(matches!(path3().assign_degree_features(2), Err(GraphError::HasNodeFeatures(1))));
    }

    #[test]
    fn negative_zero_is_canonical() {
        assert_eq!(feature_key(&[-0.0]), feature_key(&[0.0]));
    }

    #[test]
    fn json_roundtrip_and_omitted_features() {
        let g = path3();
        let s = serde_json::to_string(&g.to_data()).unwrap();
        let back: GraphData = serde_json::from_str(&s).unwrap();
        assert_eq!(back.build().unwrap(), g);

        let bare: GraphData =
            serde_json::from_str(r#"{"node_count": 3, "node_features": [], "edges": [[0,1]]}"#).unwrap();
        let b = bare.build().unwrap();
        assert_eq!((b.node_count(), b.node_dim(), b.edge_dim()), (3, 0, 0));
    }
}
