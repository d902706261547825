//! Color refinement: 1-WL, edge-aware WL, and edge-aware WL with edge-color
//! updates.
//!
//! Every refinement runs jointly over a list of graphs with one shared
//! [`ColorDictionary`], so colors and signatures from the same run are
//! comparable across graphs. Runs are stamped with a session id and
//! signatures from different sessions never compare equal.
//!
//! Dictionary keys are canonical byte strings:
//!
//! | tag | key                                           | used for              |
//! |-----|-----------------------------------------------|-----------------------|
//! | 0   | node feature bytes                            | initial node colors   |
//! | 1   | edge feature bytes                            | initial edge colors   |
//! | 2   | prev color, sorted neighbor tuples            | node rounds           |
//! | 3   | prev edge color, sorted endpoint colors       | edge rounds (EWL-EA)  |
//!
//! Integers are LEB128 varints, so concatenations decode uniquely.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::WlError;
use crate::graph::{feature_key, Graph};

pub type Color = u32;

static NEXT_SESSION: AtomicU64 = AtomicU64::new(1);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    /// Neighbor colors only.
    #[serde(rename = "WL1")]
    Wl1,
    /// Neighbor (color, edge feature) tuples.
    #[serde(rename = "EWL")]
    Ewl,
    /// As `Ewl`, with edge colors refined from their endpoints each round.
    #[serde(rename = "EWLEA")]
    EwlEa,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Wl1, Variant::Ewl, Variant::EwlEa];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Wl1 => "WL1",
            Variant::Ewl => "EWL",
            Variant::EwlEa => "EWLEA",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "wl1" | "1wl" | "wl" => Ok(Variant::Wl1),
            "ewl" => Ok(Variant::Ewl),
            "ewlea" => Ok(Variant::EwlEa),
            _ => Err(format!("unknown variant `{s}` (expected wl1, ewl or ewlea)")),
        }
    }
}

/// Injective map from canonical keys to dense color ids, assigned in
/// first-seen order.
#[derive(Debug)]
pub struct ColorDictionary {
    table: HashMap<Vec<u8>, Color>,
    session: u64,
}

impl ColorDictionary {
    pub fn new() -> Self {
        ColorDictionary { table: HashMap::new(), session: NEXT_SESSION.fetch_add(1, Ordering::Relaxed) }
    }

    pub fn session(&self) -> u64 {
        self.session
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn intern(&mut self, key: Vec<u8>) -> Color {
        let next = self.table.len() as Color;
        let id = *self.table.entry(key).or_insert(next);
        assert!(id < next || self.table.len() == next as usize + 1, "color dictionary lost injectivity");
        id
    }
}

impl Default for ColorDictionary {
    fn default() -> Self {
        Self::new()
    }
}

/// Per-iteration colorings of one graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RefinementTrace {
    /// `node_colors[l][i]` is the color of node `i` after `l` rounds.
    pub node_colors: Vec<Vec<Color>>,
    /// Edge colors per round; empty unless the variant is `EwlEa`.
    pub edge_colors: Vec<Vec<Color>>,
    /// Round at which the joint node partition stopped changing.
    pub iterations_to_stable: usize,
}

impl RefinementTrace {
    /// Sorted `(color, count)` pairs for every recorded round.
    pub fn histograms(&self) -> Vec<Vec<(Color, usize)>> {
        self.node_colors.iter().map(|c| histogram(c)).collect()
    }
}

/// Run-length encoded multiset of stable node colors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GraphSignature {
    session: u64,
    classes: Vec<(Color, usize)>,
}

impl GraphSignature {
    pub fn session(&self) -> u64 {
        self.session
    }

    pub fn classes(&self) -> &[(Color, usize)] {
        &self.classes
    }

    /// Equality that refuses to compare across sessions.
    pub fn same_as(&self, other: &GraphSignature) -> Result<bool, WlError> {
        if self.session != other.session {
            return Err(WlError::SessionMismatch);
        }
        Ok(self.classes == other.classes)
    }
}

/// Sparse color-count vector indexed by color id.
pub type SparseVector = BTreeMap<Color, usize>;

fn histogram(colors: &[Color]) -> Vec<(Color, usize)> {
    let mut h: BTreeMap<Color, usize> = BTreeMap::new();
    for &c in colors {
        *h.entry(c).or_default() += 1;
    }
    h.into_iter().collect()
}

fn push_varint(out: &mut Vec<u8>, mut v: u32) {
    loop {
        let byte = (v & 0x7f) as u8;
        v >>= 7;
        if v == 0 {
            out.push(byte);
            return;
        }
        out.push(byte | 0x80);
    }
}

const TAG_NODE_INIT: u8 = 0;
const TAG_EDGE_INIT: u8 = 1;
const TAG_NODE_ROUND: u8 = 2;
const TAG_EDGE_ROUND: u8 = 3;

/// Joint refinement state over a list of graphs.
pub struct Session<'a> {
    variant: Variant,
    graphs: &'a [Graph],
    dict: ColorDictionary,
    node_colors: Vec<Vec<Color>>,
    edge_colors: Vec<Vec<Color>>,
    distinct: usize,
    rounds: usize,
}

impl<'a> Session<'a> {
    pub fn new(graphs: &'a [Graph], variant: Variant) -> Result<Self, WlError> {
        if let Some(first) = graphs.first() {
            let expected = (first.node_dim(), first.edge_dim());
            for (index, g) in graphs.iter().enumerate() {
                let found = (g.node_dim(), g.edge_dim());
                if found != expected {
                    return Err(WlError::DimensionMismatch { index, expected, found });
                }
            }
        }
        let mut dict = ColorDictionary::new();
        let mut node_colors = Vec::with_capacity(graphs.len());
        let mut edge_colors = Vec::with_capacity(graphs.len());
        for g in graphs {
            node_colors.push(
                (0..g.node_count())
                    .map(|i| {
                        let mut key = vec![TAG_NODE_INIT];
                        key.extend(feature_key(g.node_feature(i)));
                        dict.intern(key)
                    })
                    .collect::<Vec<_>>(),
            );
            edge_colors.push(
                (0..g.edge_count())
                    .map(|e| {
                        let mut key = vec![TAG_EDGE_INIT];
                        key.extend(feature_key(g.edge_feature(e)));
                        dict.intern(key)
                    })
                    .collect::<Vec<_>>(),
            );
        }
        let mut s = Session { variant, graphs, dict, node_colors, edge_colors, distinct: 0, rounds: 0 };
        s.distinct = s.count_distinct();
        Ok(s)
    }

    pub fn session_id(&self) -> u64 {
        self.dict.session()
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn dictionary_len(&self) -> usize {
        self.dict.len()
    }

    pub fn node_colors(&self, graph: usize) -> &[Color] {
        &self.node_colors[graph]
    }

    pub fn edge_colors(&self, graph: usize) -> &[Color] {
        &self.edge_colors[graph]
    }

    /// Upper bound on useful rounds: the joint partition can split at most
    /// `total nodes - 1` times.
    pub fn round_limit(&self) -> usize {
        self.graphs.iter().map(Graph::node_count).sum::<usize>().max(1)
    }

    fn count_distinct(&self) -> usize {
        self.node_colors.iter().flatten().collect::<HashSet<_>>().len()
    }

    /// Performs one refinement round. Returns `true` if the joint node
    /// partition changed.
    pub fn advance(&mut self) -> bool {
        let mut tuples: Vec<(Color, Color)> = Vec::new();
        let mut next_nodes = Vec::with_capacity(self.graphs.len());
        for (gi, g) in self.graphs.iter().enumerate() {
            let colors = &self.node_colors[gi];
            let edges = &self.edge_colors[gi];
            let mut next = Vec::with_capacity(g.node_count());
            for i in 0..g.node_count() {
                tuples.clear();
                tuples.extend(g.neighbors(i).iter().map(|&(j, e)| match self.variant {
                    Variant::Wl1 => (colors[j], 0),
                    Variant::Ewl | Variant::EwlEa => (colors[j], edges[e]),
                }));
                tuples.sort_unstable();
                let mut key = Vec::with_capacity(2 + 4 * (tuples.len() + 1));
                key.push(TAG_NODE_ROUND);
                push_varint(&mut key, colors[i]);
                push_varint(&mut key, tuples.len() as u32);
                for &(c, d) in &tuples {
                    push_varint(&mut key, c);
                    if self.variant != Variant::Wl1 {
                        push_varint(&mut key, d);
                    }
                }
                next.push(self.dict.intern(key));
            }
            next_nodes.push(next);
        }
        self.node_colors = next_nodes;

        if self.variant == Variant::EwlEa {
            for (gi, g) in self.graphs.iter().enumerate() {
                let colors = &self.node_colors[gi];
                let next: Vec<Color> = g
                    .edges()
                    .iter()
                    .zip(&self.edge_colors[gi])
                    .map(|(&(i, j), &d)| {
                        let (a, b) = (colors[i].min(colors[j]), colors[i].max(colors[j]));
                        let mut key = vec![TAG_EDGE_ROUND];
                        push_varint(&mut key, d);
                        push_varint(&mut key, a);
                        push_varint(&mut key, b);
                        self.dict.intern(key)
                    })
                    .collect();
                self.edge_colors[gi] = next;
            }
        }

        self.rounds += 1;
        let distinct = self.count_distinct();
        // Each key embeds the previous color, so partitions only refine.
        assert!(distinct >= self.distinct, "refinement coarsened the partition");
        let changed = distinct != self.distinct;
        self.distinct = distinct;
        changed
    }

    fn signature(&self, graph: usize) -> GraphSignature {
        GraphSignature { session: self.session_id(), classes: histogram(&self.node_colors[graph]) }
    }
}

/// Refines all graphs jointly until the node partition is stable.
pub fn refine(graphs: &[Graph], variant: Variant) -> Result<Vec<(RefinementTrace, GraphSignature)>, WlError> {
    let mut session = Session::new(graphs, variant)?;
    let keep_edges = variant == Variant::EwlEa;
    let mut traces: Vec<RefinementTrace> = (0..graphs.len())
        .map(|g| RefinementTrace {
            node_colors: vec![session.node_colors(g).to_vec()],
            edge_colors: if keep_edges { vec![session.edge_colors(g).to_vec()] } else { Vec::new() },
            iterations_to_stable: 0,
        })
        .collect();
    let limit = session.round_limit();
    loop {
        let changed = session.advance();
        for (g, t) in traces.iter_mut().enumerate() {
            t.node_colors.push(session.node_colors(g).to_vec());
            if keep_edges {
                t.edge_colors.push(session.edge_colors(g).to_vec());
            }
        }
        if !changed {
            break;
        }
        assert!(session.rounds() <= limit, "refinement did not stabilize within {limit} rounds");
    }
    let rounds = session.rounds();
    Ok(traces
        .into_iter()
        .enumerate()
        .map(|(g, mut t)| {
            t.iterations_to_stable = rounds;
            (t, session.signature(g))
        })
        .collect())
}

/// Whether the variant separates the two graphs. Stops at the first round
/// whose color histograms differ; this agrees with comparing stable
/// signatures because every round's colors are determined by the next.
pub fn distinguishable(g1: &Graph, g2: &Graph, variant: Variant) -> Result<bool, WlError> {
    let pair = [g1.clone(), g2.clone()];
    let mut session = Session::new(&pair, variant)?;
    if g1.node_count() != g2.node_count() {
        return Ok(true);
    }
    loop {
        if histogram(session.node_colors(0)) != histogram(session.node_colors(1)) {
            return Ok(true);
        }
        if !session.advance() {
            return Ok(histogram(session.node_colors(0)) != histogram(session.node_colors(1)));
        }
    }
}

/// WL subtree features: for each graph, the counts of every color seen in
/// rounds `0..=depth`, computed jointly so ids are shared across graphs.
/// Refinement keeps going past stabilization to reach `depth`.
pub fn feature_vectors(graphs: &[Graph], variant: Variant, depth: usize) -> Result<Vec<SparseVector>, WlError> {
    let mut session = Session::new(graphs, variant)?;
    let mut out: Vec<SparseVector> = vec![SparseVector::new(); graphs.len()];
    for round in 0..=depth {
        if round > 0 {
            session.advance();
        }
        for (g, v) in out.iter_mut().enumerate() {
            for &c in session.node_colors(g) {
                *v.entry(c).or_default() += 1;
            }
        }
    }
    Ok(out)
}

/// Single-graph convenience over [`feature_vectors`]. Ids are only
/// comparable between vectors from one call of `feature_vectors`.
pub fn wl_feature_vector(g: &Graph, variant: Variant, depth: usize) -> SparseVector {
    feature_vectors(std::slice::from_ref(g), variant, depth)
        .expect("a single graph cannot have mismatched dimensions")
        .pop()
        .unwrap()
}
