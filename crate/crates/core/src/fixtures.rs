//! Seeded graph generators and small constructed examples shared by tests,
//! the property suites, the CLI and the browser demo.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{Graph, Permutation};
use crate::tu::Dataset;

pub fn one_hot(index: usize, width: usize) -> Vec<f64> {
    let mut v = vec![0.0; width];
    v[index] = 1.0;
    v
}

/// Triangle with equal nodes and edge labels (a, a, a) against (a, a, b).
/// 1-WL cannot tell them apart; the edge-aware variants can.
pub fn strictness_pair() -> (Graph, Graph) {
    let tri = |labels: [usize; 3]| {
        Graph::new(3, vec![(0, 1), (1, 2), (0, 2)], vec![vec![1.0]; 3], labels.iter().map(|&l| one_hot(l, 2)).collect())
            .expect("valid triangle")
    };
    (tri([0, 0, 0]), tri([0, 0, 1]))
}

/// Erdos-Renyi style graph with one-hot node and edge labels.
pub fn random_graph<R: Rng + ?Sized>(
    rng: &mut R,
    nodes: usize,
    node_labels: usize,
    edge_labels: usize,
    density: f64,
) -> Graph {
    let node_features = (0..nodes).map(|_| one_hot(rng.gen_range(0..node_labels), node_labels)).collect();
    let mut edges = Vec::new();
    let mut edge_features = Vec::new();
    for i in 0..nodes {
        for j in i + 1..nodes {
            if rng.gen_bool(density) {
                edges.push((i, j));
                edge_features.push(one_hot(rng.gen_range(0..edge_labels), edge_labels));
            }
        }
    }
    Graph::with_dims(nodes, node_labels, edge_labels, edges, node_features, edge_features)
        .expect("generated graph is valid")
}

/// Seeded graph for gradient checks: redraws until there are at least
/// `nodes - 1` edges, with three node and three edge labels.
pub fn gradient_check_graph(seed: u64, nodes: usize) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let g = random_graph(&mut rng, nodes, 3, 3, 0.5);
        if g.edge_count() + 1 >= nodes {
            return g;
        }
    }
}

/// How the second graph of a generated pair relates to the first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairKind {
    Independent,
    PermutedCopy,
    RelabeledEdge,
    ShuffledEdgeLabels,
    DegreePreservingSwap,
}

impl PairKind {
    pub const ALL: [PairKind; 5] = [
        PairKind::Independent,
        PairKind::PermutedCopy,
        PairKind::RelabeledEdge,
        PairKind::ShuffledEdgeLabels,
        PairKind::DegreePreservingSwap,
    ];
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairParams {
    pub min_nodes: usize,
    pub max_nodes: usize,
    pub min_labels: usize,
    pub max_labels: usize,
}

impl Default for PairParams {
    fn default() -> Self {
        PairParams { min_nodes: 4, max_nodes: 12, min_labels: 2, max_labels: 4 }
    }
}

/// A pair of same-dimension graphs. Most kinds start from one graph and
/// derive the other, since independent random graphs are almost always
/// separated at round zero.
pub fn random_pair<R: Rng + ?Sized>(rng: &mut R, params: &PairParams) -> (Graph, Graph, PairKind) {
    let n = rng.gen_range(params.min_nodes..=params.max_nodes);
    let node_labels = rng.gen_range(params.min_labels..=params.max_labels);
    let edge_labels = rng.gen_range(params.min_labels..=params.max_labels);
    let density = rng.gen_range(0.2..0.6);
    let kind = *PairKind::ALL.choose(rng).unwrap();
    let g = random_graph(rng, n, node_labels, edge_labels, density);
    let h = match kind {
        PairKind::Independent => random_graph(rng, n, node_labels, edge_labels, density),
        PairKind::PermutedCopy => g.clone(),
        PairKind::RelabeledEdge => relabel_one_edge(rng, &g, edge_labels),
        PairKind::ShuffledEdgeLabels => shuffle_edge_labels(rng, &g),
        PairKind::DegreePreservingSwap => double_edge_swap(rng, &g),
    };
    let p = Permutation::random(n, rng);
    (g, h.permute(&p).expect("permutation sized to graph"), kind)
}

fn edge_features(g: &Graph) -> Vec<Vec<f64>> {
    (0..g.edge_count()).map(|e| g.edge_feature(e).to_vec()).collect()
}

fn relabel_one_edge<R: Rng + ?Sized>(rng: &mut R, g: &Graph, edge_labels: usize) -> Graph {
    if g.edge_count() == 0 {
        return g.clone();
    }
    let mut ef = edge_features(g);
    let e = rng.gen_range(0..ef.len());
    ef[e] = one_hot(rng.gen_range(0..edge_labels), edge_labels);
    g.with_edge_features(g.edge_dim(), ef).expect("same dims")
}

fn shuffle_edge_labels<R: Rng + ?Sized>(rng: &mut R, g: &Graph) -> Graph {
    let mut ef = edge_features(g);
    ef.shuffle(rng);
    g.with_edge_features(g.edge_dim(), ef).expect("same dims")
}

/// Replaces edges (a,b),(c,d) by (a,d),(c,b) when that keeps the graph
/// simple; edge features travel with the first endpoint.
fn double_edge_swap<R: Rng + ?Sized>(rng: &mut R, g: &Graph) -> Graph {
    let m = g.edge_count();
    let mut edges: Vec<(usize, usize)> = g.edges().to_vec();
    for _ in 0..20 {
        if m < 2 {
            break;
        }
        let e1 = rng.gen_range(0..m);
        let e2 = rng.gen_range(0..m);
        let ((a, b), (c, d)) = (edges[e1], edges[e2]);
        let distinct = a != c && a != d && b != c && b != d;
        let present = |x: usize, y: usize| edges.iter().any(|&(p, q)| (p, q) == (x.min(y), x.max(y)));
        if e1 != e2 && distinct && !present(a, d) && !present(c, b) {
            edges[e1] = (a.min(d), a.max(d));
            edges[e2] = (c.min(b), c.max(b));
            break;
        }
    }
    Graph::with_dims(
        g.node_count(),
        g.node_dim(),
        g.edge_dim(),
        edges,
        (0..g.node_count()).map(|i| g.node_feature(i).to_vec()).collect(),
        edge_features(g),
    )
    .expect("swap keeps the graph simple")
}

/// Sets every edge feature to the same one-hot vector.
pub fn constant_edges(g: &Graph) -> Graph {
    let width = g.edge_dim().max(1);
    g.with_edge_features(width, vec![one_hot(0, width); g.edge_count()]).expect("uniform width")
}

/// Cycles of length 4..=8 with constant node features and two edge labels.
/// Class 1 graphs carry exactly one edge with the rare label; every cycle
/// length appears equally often in both classes, so topology and node
/// features carry no class information.
pub fn edge_signal_dataset(graphs_per_class: usize) -> Dataset {
    let mut graphs = Vec::with_capacity(2 * graphs_per_class);
    let mut labels = Vec::with_capacity(2 * graphs_per_class);
    for k in 0..graphs_per_class {
        let n = 4 + k % 5;
        for class in 0..2 {
            let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
            let ef = (0..n).map(|e| one_hot(usize::from(class == 1 && e == k % n), 2)).collect();
            graphs.push(Graph::with_dims(n, 1, 2, edges, vec![vec![1.0]; n], ef).expect("valid cycle"));
            labels.push(class);
        }
    }
    Dataset::from_parts("edge-signal", graphs, labels, 2, vec![1], vec![0, 1]).expect("valid dataset")
}
