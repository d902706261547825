//! Exhaustive attributed-isomorphism test for small graphs.
//!
//! Two graphs are isomorphic when some bijection maps edges onto edges,
//! non-edges onto non-edges, and preserves every node and edge feature
//! vector exactly.

use serde::Serialize;

use crate::error::IsoError;
use crate::graph::{feature_key, Graph, Permutation};

pub const DEFAULT_SIZE_LIMIT: usize = 10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IsoResult {
    pub isomorphic: bool,
    /// Maps node `i` of the first graph to node `witness[i]` of the second.
    pub witness: Option<Permutation>,
}

impl IsoResult {
    fn no() -> Self {
        IsoResult { isomorphic: false, witness: None }
    }
}

pub fn brute_force_isomorphic(g1: &Graph, g2: &Graph) -> Result<IsoResult, IsoError> {
    brute_force_isomorphic_with_limit(g1, g2, DEFAULT_SIZE_LIMIT)
}

pub fn brute_force_isomorphic_with_limit(g1: &Graph, g2: &Graph, limit: usize) -> Result<IsoResult, IsoError> {
    for g in [g1, g2] {
        if g.node_count() > limit {
            return Err(IsoError::TooLarge { nodes: g.node_count(), limit });
        }
    }
    if g1.node_count() != g2.node_count()
        || g1.edge_count() != g2.edge_count()
        || g1.node_dim() != g2.node_dim()
        || g1.edge_dim() != g2.edge_dim()
    {
        return Ok(IsoResult::no());
    }
    let n = g1.node_count();
    let key1: Vec<(usize, Vec<u8>)> = (0..n).map(|i| (g1.degree(i), feature_key(g1.node_feature(i)))).collect();
    let key2: Vec<(usize, Vec<u8>)> = (0..n).map(|i| (g2.degree(i), feature_key(g2.node_feature(i)))).collect();
    let mut sorted1 = key1.clone();
    let mut sorted2 = key2.clone();
    sorted1.sort();
    sorted2.sort();
    if sorted1 != sorted2 {
        return Ok(IsoResult::no());
    }

    // Candidate targets sorted by (degree, feature key).
    let mut targets: Vec<usize> = (0..n).collect();
    targets.sort_by(|&a, &b| key2[a].cmp(&key2[b]).then(a.cmp(&b)));
    // Most constrained first: high degree, then rare keys.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| g1.degree(b).cmp(&g1.degree(a)).then(a.cmp(&b)));

    let mut search = Search {
        g1,
        g2,
        key1: &key1,
        key2: &key2,
        order: &order,
        targets: &targets,
        map: vec![usize::MAX; n],
        used: vec![false; n],
    };
    if search.extend(0) {
        let witness = Permutation::new(search.map).expect("search produces a bijection");
        Ok(IsoResult { isomorphic: true, witness: Some(witness) })
    } else {
        Ok(IsoResult::no())
    }
}

struct Search<'a> {
    g1: &'a Graph,
    g2: &'a Graph,
    key1: &'a [(usize, Vec<u8>)],
    key2: &'a [(usize, Vec<u8>)],
    order: &'a [usize],
    targets: &'a [usize],
    map: Vec<usize>,
    used: Vec<bool>,
}

impl Search<'_> {
    fn extend(&mut self, depth: usize) -> bool {
        let Some(&u) = self.order.get(depth) else {
            return true;
        };
        for &v in self.targets {
            if self.used[v] || self.key1[u] != self.key2[v] || !self.consistent(u, v) {
                continue;
            }
            self.map[u] = v;
            self.used[v] = true;
            if self.extend(depth + 1) {
                return true;
            }
            self.used[v] = false;
            self.map[u] = usize::MAX;
        }
        false
    }

    /// Adjacency and edge features agree with every node mapped so far.
    fn consistent(&self, u: usize, v: usize) -> bool {
        for &w in self.order {
            let x = self.map[w];
            if x == usize::MAX {
                continue;
            }
            match (self.g1.find_edge(u, w), self.g2.find_edge(v, x)) {
                (None, None) => {}
                (Some(e1), Some(e2)) => {
                    if feature_key(self.g1.edge_feature(e1)) != feature_key(self.g2.edge_feature(e2)) {
                        return false;
                    }
                }
                _ => return false,
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn permuted_copy_is_isomorphic_with_valid_witness() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = fixtures::random_graph(&mut rng, 8, 2, 3, 0.4);
        let p = Permutation::random(8, &mut rng);
        let h = g.permute(&p).unwrap();
        let r = brute_force_isomorphic(&g, &h).unwrap();
        assert!(r.isomorphic);
        let w = r.witness.unwrap();
        assert_eq!(g.permute(&w).unwrap().canonical_form(), h.canonical_form());
    }

    #[test]
    fn triangle_vs_path() {
        let tri = Graph::new(3, vec![(0, 1), (1, 2), (0, 2)], vec![vec![]; 3], vec![vec![]; 3]).unwrap();
        let path = Graph::new(3, vec![(0, 1), (1, 2)], vec![vec![]; 3], vec![vec![]; 2]).unwrap();
        assert!(!brute_force_isomorphic(&tri, &path).unwrap().isomorphic);
    }

    #[test]
    fn one_edge_feature_changed() {
        let (a, b) = fixtures::strictness_pair();
        let r = brute_force_isomorphic(&a, &b).unwrap();
        assert_eq!(r, IsoResult { isomorphic: false, witness: None });
    }

    #[test]
    fn size_limit() {
        let g = Graph::new(11, vec![], vec![vec![]; 11], vec![]).unwrap();
        assert_eq!(brute_force_isomorphic(&g, &g), Err(IsoError::TooLarge { nodes: 11, limit: DEFAULT_SIZE_LIMIT }));
        assert!(brute_force_isomorphic_with_limit(&g, &g, 11).unwrap().isomorphic);
    }

    #[test]
    fn reflexive_and_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..30 {
            let a = fixtures::random_graph(&mut rng, 6, 2, 2, 0.5);
            let b = fixtures::random_graph(&mut rng, 6, 2, 2, 0.5);
            assert!(brute_force_isomorphic(&a, &a).unwrap().isomorphic);
            assert_eq!(
                brute_force_isomorphic(&a, &b).unwrap().isomorphic,
                brute_force_isomorphic(&b, &a).unwrap().isomorphic
            );
        }
    }
}
