//! Randomized checks of the relationships between the refinement variants
//! and the isomorphism oracle.
//!
//! * dominance: whenever WL1 separates a pair, EWL does too; a constructed
//!   pair separated by EWL but not WL1 must also be found
//! * constant edges: with every edge feature equal, EWL and WL1 agree
//! * edge aggregation: EWLEA and EWL agree on every pair
//! * soundness: pairs the oracle calls isomorphic are never separated
//!
//! Suites take the verdict function as a parameter so that deliberately
//! broken refiners can be checked against them.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::WlError;
use crate::fixtures::{self, PairParams};
use crate::graph::{Graph, GraphData, Permutation};
use crate::iso::brute_force_isomorphic;
use crate::wl::{distinguishable, Variant};

pub type Verdict<'a> = dyn Fn(&Graph, &Graph, Variant) -> Result<bool, WlError> + Sync + 'a;

/// The production verdict.
pub fn wl_verdict(g1: &Graph, g2: &Graph, v: Variant) -> Result<bool, WlError> {
    distinguishable(g1, g2, v)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub pairs: usize,
    pub seed: u64,
    pub params: PairParams,
    /// Graphs in the soundness pool (half random, half permuted copies).
    pub pool_size: usize,
    pub pool_max_nodes: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { pairs: 1000, seed: 0, params: PairParams::default(), pool_size: 200, pool_max_nodes: 7 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub suite: String,
    pub detail: String,
    pub g1: GraphData,
    pub g2: GraphData,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: String,
    pub checked: usize,
    pub violations: Vec<Violation>,
    /// Extra counters: strictness witnesses, oracle-isomorphic pairs, ...
    pub counters: Vec<(String, usize)>,
    pub passed: bool,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport { name: name.to_string(), checked: 0, violations: Vec::new(), counters: Vec::new(), passed: true }
    }

    fn violate(&mut self, detail: String, g1: &Graph, g2: &Graph) {
        self.violations.push(Violation { suite: self.name.clone(), detail, g1: g1.to_data(), g2: g2.to_data() });
    }

    pub fn counter(&self, name: &str) -> Option<usize> {
        self.counters.iter().find(|(n, _)| n == name).map(|&(_, v)| v)
    }
}

fn pair_stream(cfg: &SuiteConfig) -> impl Iterator<Item = (Graph, Graph)> + '_ {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    (0..cfg.pairs).map(move |_| {
        let (a, b, _) = fixtures::random_pair(&mut rng, &cfg.params);
        (a, b)
    })
}

/// The generated pairs, in order, for replay and inspection.
pub fn generate_pairs(cfg: &SuiteConfig) -> Vec<(Graph, Graph)> {
    pair_stream(cfg).collect()
}

pub fn dominance_suite(cfg: &SuiteConfig, verdict: &Verdict) -> Result<SuiteReport, WlError> {
    let mut r = SuiteReport::new("wl1-implies-ewl");
    let mut witnesses = 0;
    for (a, b) in pair_stream(cfg) {
        let wl1 = verdict(&a, &b, Variant::Wl1)?;
        let ewl = verdict(&a, &b, Variant::Ewl)?;
        if wl1 && !ewl {
            r.violate("WL1 distinguishes but EWL does not".into(), &a, &b);
        }
        if ewl && !wl1 {
            witnesses += 1;
        }
        r.checked += 1;
    }
    let (a, b) = fixtures::strictness_pair();
    let constructed = verdict(&a, &b, Variant::Ewl)? && !verdict(&a, &b, Variant::Wl1)?;
    if !constructed {
        r.violate("constructed pair is not a strictness witness".into(), &a, &b);
    }
    r.counters.push(("random_strictness_witnesses".into(), witnesses));
    r.counters.push(("constructed_strictness_witnesses".into(), usize::from(constructed)));
    r.passed = r.violations.is_empty() && witnesses + usize::from(constructed) > 0;
    Ok(r)
}

pub fn constant_edge_suite(cfg: &SuiteConfig, verdict: &Verdict) -> Result<SuiteReport, WlError> {
    let mut r = SuiteReport::new("constant-edges-ewl-equals-wl1");
    let mut separated = 0;
    for (a, b) in pair_stream(cfg) {
        let (a, b) = (fixtures::constant_edges(&a), fixtures::constant_edges(&b));
        let wl1 = verdict(&a, &b, Variant::Wl1)?;
        let ewl = verdict(&a, &b, Variant::Ewl)?;
        if wl1 != ewl {
            r.violate(format!("WL1 says {wl1}, EWL says {ewl}"), &a, &b);
        }
        separated += usize::from(ewl);
        r.checked += 1;
    }
    r.counters.push(("separated_pairs".into(), separated));
    r.passed = r.violations.is_empty();
    Ok(r)
}

pub fn edge_aggregation_suite(cfg: &SuiteConfig, verdict: &Verdict) -> Result<SuiteReport, WlError> {
    let mut r = SuiteReport::new("ewlea-equals-ewl");
    let mut separated = 0;
    for (a, b) in pair_stream(cfg) {
        let ewl = verdict(&a, &b, Variant::Ewl)?;
        let ea = verdict(&a, &b, Variant::EwlEa)?;
        if ewl != ea {
            r.violate(format!("EWL says {ewl}, EWLEA says {ea}"), &a, &b);
        }
        separated += usize::from(ewl);
        r.checked += 1;
    }
    r.counters.push(("separated_pairs".into(), separated));
    r.passed = r.violations.is_empty();
    Ok(r)
}

/// Small graphs with few labels, so that the pool contains genuinely
/// isomorphic pairs besides the permuted copies.
pub fn soundness_pool(cfg: &SuiteConfig) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xa5a5);
    let base = cfg.pool_size.div_ceil(2);
    let mut pool: Vec<Graph> = (0..base)
        .map(|_| {
            use rand::Rng;
            let n = rng.gen_range(2..=cfg.pool_max_nodes);
            let density = rng.gen_range(0.2..0.7);
            fixtures::random_graph(&mut rng, n, 2, 2, density)
        })
        .collect();
    let copies: Vec<Graph> = pool
        .iter()
        .map(|g| g.permute(&Permutation::random(g.node_count(), &mut rng)).expect("sized permutation"))
        .collect();
    pool.extend(copies);
    pool
}

pub fn soundness_suite(cfg: &SuiteConfig, verdict: &Verdict) -> Result<SuiteReport, WlError> {
    let mut r = SuiteReport::new("oracle-soundness");
    let pool = soundness_pool(cfg);
    let base = cfg.pool_size.div_ceil(2);
    let mut iso_pairs = 0;
    for i in 0..pool.len() {
        for j in i + 1..pool.len() {
            // Only pairs of equal dimension are comparable; the pool is uniform.
            let iso = brute_force_isomorphic(&pool[i], &pool[j]).expect("pool graphs are within the oracle limit");
            if j == i + base && !iso.isomorphic {
                r.violate("oracle rejects a permuted copy".into(), &pool[i], &pool[j]);
            }
            if iso.isomorphic {
                iso_pairs += 1;
                for v in Variant::ALL {
                    if verdict(&pool[i], &pool[j], v)? {
                        r.violate(format!("{v} separates an oracle-isomorphic pair"), &pool[i], &pool[j]);
                    }
                }
            }
            r.checked += 1;
        }
    }
    r.counters.push(("pool_size".into(), pool.len()));
    r.counters.push(("oracle_isomorphic_pairs".into(), iso_pairs));
    r.passed = r.violations.is_empty();
    Ok(r)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertiesReport {
    pub config: SuiteConfig,
    pub suites: Vec<SuiteReport>,
    pub passed: bool,
}

pub fn run_all(cfg: &SuiteConfig, verdict: &Verdict) -> Result<PropertiesReport, WlError> {
    let suites = vec![
        dominance_suite(cfg, verdict)?,
        constant_edge_suite(cfg, verdict)?,
        edge_aggregation_suite(cfg, verdict)?,
        soundness_suite(cfg, verdict)?,
    ];
    let passed = suites.iter().all(|s| s.passed);
    Ok(PropertiesReport { config: cfg.clone(), suites, passed })
}
