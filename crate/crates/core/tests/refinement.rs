use edgewl::fixtures::{self, PairParams};
use edgewl::wl::{feature_vectors, Session};
use edgewl::{brute_force_isomorphic, distinguishable, refine, Graph, GraphData, Permutation, Variant};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn graph_strategy() -> impl Strategy<Value = Graph> {
    (any::<u64>(), 1usize..10, 1usize..4, 1usize..4, 0.1f64..0.9).prop_map(|(seed, n, nl, el, d)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        fixtures::random_graph(&mut rng, n, nl, el, d)
    })
}

fn pair_strategy() -> impl Strategy<Value = (Graph, Graph)> {
    any::<u64>().prop_map(|seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, _) = fixtures::random_pair(&mut rng, &PairParams::default());
        (a, b)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn permute_then_inverse_is_identity(g in graph_strategy(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = Permutation::random(g.node_count(), &mut rng);
        let back = g.permute(&p).unwrap().permute(&p.inverse()).unwrap();
        prop_assert_eq!(back.canonical_form(), g.canonical_form());
    }

    #[test]
    fn permuted_copies_are_never_separated(g in graph_strategy(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = g.permute(&Permutation::random(g.node_count(), &mut rng)).unwrap();
        for v in Variant::ALL {
            prop_assert!(!distinguishable(&g, &h, v).unwrap());
            let out = refine(&[g.clone(), h.clone()], v).unwrap();
            prop_assert!(out[0].1.same_as(&out[1].1).unwrap());
        }
    }

    #[test]
    fn wl1_separation_implies_ewl_separation((a, b) in pair_strategy()) {
        if distinguishable(&a, &b, Variant::Wl1).unwrap() {
            prop_assert!(distinguishable(&a, &b, Variant::Ewl).unwrap());
        }
    }

    #[test]
    fn ewlea_matches_ewl((a, b) in pair_strategy()) {
        prop_assert_eq!(
            distinguishable(&a, &b, Variant::Ewl).unwrap(),
            distinguishable(&a, &b, Variant::EwlEa).unwrap()
        );
    }

    #[test]
    fn constant_edges_make_ewl_equal_wl1((a, b) in pair_strategy()) {
        let (a, b) = (fixtures::constant_edges(&a), fixtures::constant_edges(&b));
        prop_assert_eq!(
            distinguishable(&a, &b, Variant::Wl1).unwrap(),
            distinguishable(&a, &b, Variant::Ewl).unwrap()
        );
    }

    #[test]
    fn partitions_only_get_finer(g in graph_strategy(), vi in 0usize..3) {
        let v = Variant::ALL[vi];
        let (trace, _) = refine(std::slice::from_ref(&g), v).unwrap().remove(0);
        for w in trace.node_colors.windows(2) {
            let (prev, next) = (&w[0], &w[1]);
            for i in 0..prev.len() {
                for j in 0..prev.len() {
                    if next[i] == next[j] {
                        prop_assert_eq!(prev[i], prev[j]);
                    }
                }
            }
        }
        prop_assert!(trace.iterations_to_stable <= g.node_count());
    }

    #[test]
    fn graph_json_roundtrip(g in graph_strategy()) {
        let json = serde_json::to_string(&g.to_data()).unwrap();
        let back: GraphData = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back.build().unwrap(), g);
    }

    #[test]
    fn oracle_accepts_permuted_copies(g in graph_strategy(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = Permutation::random(g.node_count(), &mut rng);
        let h = g.permute(&p).unwrap();
        let r = brute_force_isomorphic(&g, &h).unwrap();
        prop_assert!(r.isomorphic);
        let w = r.witness.unwrap();
        prop_assert_eq!(g.permute(&w).unwrap().canonical_form(), h.canonical_form());
    }
}

#[test]
fn feature_vectors_agree_with_distinguishable() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..200 {
        let (a, b, _) = fixtures::random_pair(&mut rng, &PairParams::default());
        for v in Variant::ALL {
            let depth = a.node_count() + b.node_count();
            let f = feature_vectors(&[a.clone(), b.clone()], v, depth).unwrap();
            assert_eq!(f[0] != f[1], distinguishable(&a, &b, v).unwrap(), "{v}");
        }
    }
}

#[test]
fn sessions_stop_once_stable() {
    let (a, b) = fixtures::strictness_pair();
    let graphs = vec![a, b];
    let mut s = Session::new(&graphs, Variant::Ewl).unwrap();
    while s.advance() {}
    assert!(s.rounds() <= s.round_limit());
    let colors = s.node_colors(0).to_vec();
    assert!(!s.advance());
    let renamed = s.node_colors(0);
    for i in 0..colors.len() {
        for j in 0..colors.len() {
            assert_eq!(colors[i] == colors[j], renamed[i] == renamed[j]);
        }
    }
}

#[test]
fn signatures_from_different_sessions_do_not_compare() {
    let (a, _) = fixtures::strictness_pair();
    let x = refine(std::slice::from_ref(&a), Variant::Wl1).unwrap().remove(0).1;
    let y = refine(std::slice::from_ref(&a), Variant::Wl1).unwrap().remove(0).1;
    assert!(x.same_as(&y).is_err());
}
