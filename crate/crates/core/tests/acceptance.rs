//! Acceptance criteria, run in order with one status line each.
//!
//! Criteria that need downloaded TU data report BLOCKED when the dataset
//! directory is missing; see `EDGEWL_DATA_DIR`.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use edgewl::fixtures;
use edgewl::harness::{cross_validate, train, train::accuracy, TrainConfig};
use edgewl::nn::gradcheck::grad_check;
use edgewl::nn::{EginModel, ModelConfig, ModelVariant};
use edgewl::properties::{self, wl_verdict, SuiteConfig, SuiteReport};
use edgewl::tu::{compare_stats, default_data_dir, reference_stats};
use edgewl::{dataset_stats, parse_tu_dataset, Graph, Permutation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

const SEED: u64 = 0;
const PAIRS: usize = 1000;
const POOL_SIZE: usize = 200;
const POOL_MAX_NODES: usize = 7;
const STATS_TOLERANCE: f64 = 0.01;
const STATS_LIMIT: Duration = Duration::from_secs(10);
const DOMINANCE_LIMIT: Duration = Duration::from_secs(60);
const CONSTANT_EDGE_LIMIT: Duration = Duration::from_secs(60);
const AGGREGATION_LIMIT: Duration = Duration::from_secs(90);
const SOUNDNESS_LIMIT: Duration = Duration::from_secs(120);
const GRAD_TOLERANCE: f64 = 1e-4;
const GRAD_LIMIT: Duration = Duration::from_secs(30);
const TRIPLES_PER_VARIANT: usize = 100;
const INVARIANCE_TOLERANCE: f64 = 1e-9;
const INVARIANCE_LIMIT: Duration = Duration::from_secs(30);
const TOY_EPOCHS: usize = 200;
const TOY_GRAPHS_PER_CLASS: usize = 5;
const CHANCE_TOLERANCE: f64 = 0.1;
const TOY_LIMIT: Duration = Duration::from_secs(60);
const CV_THRESHOLDS: [(&str, f64); 2] = [("MUTAG", 0.80), ("AIDS", 0.95)];
const CV_LIMIT: Duration = Duration::from_secs(20 * 60);
const STATS_DATASETS: [&str; 3] = ["MUTAG", "AIDS", "PTC_FM"];

const MODEL_VARIANTS: [(&str, ModelVariant, bool); 4] = [
    ("EGIN", ModelVariant::Egin, false),
    ("EGIN-eps", ModelVariant::Egin, true),
    ("EGIN-C", ModelVariant::EginC, false),
    ("EGIN-E", ModelVariant::EginE, false),
];

#[derive(Clone, Copy, PartialEq)]
enum Status {
    Pass,
    Fail,
    Blocked,
}

struct Outcome {
    status: Status,
    detail: String,
    report: Value,
}

impl Outcome {
    fn new(ok: bool, detail: String, report: Value) -> Self {
        Outcome { status: if ok { Status::Pass } else { Status::Fail }, detail, report }
    }

    fn blocked(detail: String) -> Self {
        Outcome { status: Status::Blocked, detail, report: Value::Null }
    }
}

fn timed<F: FnOnce() -> Outcome>(limit: Duration, f: F) -> Outcome {
    let start = Instant::now();
    let mut o = f();
    let elapsed = start.elapsed();
    o.detail = format!("{}; {:.2}s (limit {}s)", o.detail, elapsed.as_secs_f64(), limit.as_secs());
    if o.status == Status::Pass && elapsed > limit {
        o.status = Status::Fail;
    }
    o
}

fn suite_config() -> SuiteConfig {
    SuiteConfig {
        pairs: PAIRS,
        seed: SEED,
        pool_size: POOL_SIZE,
        pool_max_nodes: POOL_MAX_NODES,
        ..SuiteConfig::default()
    }
}

fn suite_outcome(r: SuiteReport, extra: &str, min_checked: usize) -> Outcome {
    let counters: Vec<String> = r.counters.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let detail = format!("{} checked, {} violations{}, {}", r.checked, r.violations.len(), extra, counters.join(" "));
    let ok = r.passed && r.checked >= min_checked;
    Outcome::new(ok, detail, serde_json::to_value(&r).unwrap())
}

fn dataset_dir(name: &str) -> Option<PathBuf> {
    let dir = default_data_dir().join(name);
    dir.join(format!("{name}_A.txt")).is_file().then_some(dir)
}

fn c1_stats() -> Outcome {
    let mut lines = Vec::new();
    let mut reports = Vec::new();
    let mut ok = true;
    let mut missing = Vec::new();
    for name in STATS_DATASETS {
        let Some(dir) = dataset_dir(name) else {
            missing.push(name);
            continue;
        };
        let start = Instant::now();
        let d = match parse_tu_dataset(&dir, name) {
            Ok(d) => d,
            Err(e) => {
                ok = false;
                lines.push(format!("{name}: {e}"));
                continue;
            }
        };
        let s = dataset_stats(&d);
        let elapsed = start.elapsed();
        let cmp = compare_stats(&s, reference_stats(name).unwrap(), STATS_TOLERANCE);
        ok &= cmp.all_match() && elapsed <= STATS_LIMIT;
        lines.push(format!(
            "{name}: {} graphs, {:.2} nodes, {:.2}/{:.2} edges, dims {}/{}, convention {:?}, {:.2}s",
            s.num_graphs,
            s.avg_nodes,
            s.avg_edges,
            s.avg_directed_edges,
            s.node_feature_dim,
            s.edge_feature_dim,
            cmp.edge_convention,
            elapsed.as_secs_f64()
        ));
        reports.push(json!({ "stats": s, "comparison": cmp }));
    }
    if !missing.is_empty() {
        return Outcome::blocked(format!(
            "dataset not found under {}: {}",
            default_data_dir().display(),
            missing.join(", ")
        ));
    }
    Outcome::new(ok, lines.join("; "), Value::Array(reports))
}

fn c6_gradients() -> Outcome {
    let g = fixtures::gradient_check_graph(SEED, 6);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut errors = Vec::new();
    for (name, variant, eps) in MODEL_VARIANTS {
        let cfg = ModelConfig {
            variant,
            use_epsilon: eps,
            node_dim: 3,
            edge_dim: 3,
            hidden_dim: 8,
            embedding_dim: 8,
            num_layers: 2,
            num_classes: 2,
            seed: SEED,
        };
        let mut m = EginModel::new(cfg).unwrap();
        if eps {
            m.layers.iter_mut().for_each(|l| l.epsilon = rng.gen_range(-0.5..0.5));
        }
        let worst = (0..2).map(|y| grad_check(&m, &g, y).unwrap()).fold(0.0, f64::max);
        errors.push((name, worst));
    }
    let ok = errors.iter().all(|&(_, e)| e < GRAD_TOLERANCE);
    let detail = errors.iter().map(|(n, e)| format!("{n} {e:.1e}")).collect::<Vec<_>>().join(", ");
    let report =
        json!(errors.iter().map(|(n, e)| json!({ "variant": n, "max_relative_error": e })).collect::<Vec<_>>());
    Outcome::new(ok, format!("max relative error: {detail} (tolerance {GRAD_TOLERANCE:e})"), report)
}

fn c7_invariance() -> Outcome {
    let mut worst_by_variant = Vec::new();
    for (vi, (name, variant, eps)) in MODEL_VARIANTS.into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED.wrapping_add(vi as u64));
        let mut worst: f64 = 0.0;
        for t in 0..TRIPLES_PER_VARIANT {
            let n = rng.gen_range(4..=12);
            let g = fixtures::random_graph(&mut rng, n, 3, 3, 0.4);
            let p = Permutation::random(n, &mut rng);
            let cfg = ModelConfig {
                variant,
                use_epsilon: eps,
                node_dim: 3,
                edge_dim: 3,
                hidden_dim: 32,
                embedding_dim: 16,
                num_layers: 3,
                num_classes: 2,
                seed: t as u64,
            };
            let mut m = EginModel::new(cfg).unwrap();
            if eps {
                m.layers.iter_mut().for_each(|l| l.epsilon = rng.gen_range(-0.5..0.5));
            }
            let a = m.logits(&g).unwrap();
            let b = m.logits(&g.permute(&p).unwrap()).unwrap();
            worst = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(worst, f64::max);
        }
        worst_by_variant.push((name, worst));
    }
    let ok = worst_by_variant.iter().all(|&(_, w)| w <= INVARIANCE_TOLERANCE);
    let detail = worst_by_variant.iter().map(|(n, w)| format!("{n} {w:.1e}")).collect::<Vec<_>>().join(", ");
    let report =
        json!(worst_by_variant.iter().map(|(n, w)| json!({ "variant": n, "max_abs_diff": w })).collect::<Vec<_>>());
    Outcome::new(
        ok,
        format!(
            "{TRIPLES_PER_VARIANT} triples per variant, worst |dlogit|: {detail} (tolerance {INVARIANCE_TOLERANCE:e})"
        ),
        report,
    )
}

fn c8_edge_sensitivity() -> Outcome {
    let d = fixtures::edge_signal_dataset(TOY_GRAPHS_PER_CLASS);
    let graphs: Vec<&Graph> = d.graphs.iter().collect();
    let majority = {
        let ones = d.class_labels.iter().filter(|&&y| y == 1).count() as f64;
        let frac = ones / d.len() as f64;
        frac.max(1.0 - frac)
    };
    let mut ok = true;
    let mut parts = Vec::new();
    let mut report = Vec::new();
    let gin = ("GIN", ModelVariant::GinDegenerate, false);
    for (name, variant, eps) in MODEL_VARIANTS.into_iter().chain([gin]) {
        let cfg = TrainConfig { variant, use_epsilon: eps, epochs: TOY_EPOCHS, seed: SEED, ..TrainConfig::default() };
        let out = train(&cfg, &graphs, &d.class_labels, d.num_classes).unwrap();
        let acc = accuracy(&out.model, &graphs, &d.class_labels).unwrap();
        if variant == ModelVariant::GinDegenerate {
            ok &= (acc - majority).abs() <= CHANCE_TOLERANCE;
        } else {
            ok &= acc == 1.0;
        }
        parts.push(format!("{name} {acc:.2}"));
        report.push(json!({ "model": name, "train_accuracy": acc, "final_loss": out.epoch_losses.last() }));
    }
    Outcome::new(
        ok,
        format!(
            "{} graphs, {TOY_EPOCHS} epochs, train accuracy: {} (GIN target {majority:.2} ± {CHANCE_TOLERANCE})",
            d.len(),
            parts.join(", ")
        ),
        Value::Array(report),
    )
}

fn c9_cv() -> Outcome {
    let mut missing = Vec::new();
    let mut ok = true;
    let mut parts = Vec::new();
    let mut reports = Vec::new();
    for (name, threshold) in CV_THRESHOLDS {
        let Some(dir) = dataset_dir(name) else {
            missing.push(name);
            continue;
        };
        let d = parse_tu_dataset(&dir, name).unwrap();
        let start = Instant::now();
        let cfg = TrainConfig { seed: SEED, ..TrainConfig::default() };
        let r = cross_validate(&d, &cfg, 1).unwrap();
        let elapsed = start.elapsed();
        ok &= r.mean >= threshold && elapsed <= CV_LIMIT;
        parts.push(format!(
            "{name} {} (threshold {:.0}), {:.0}s",
            r.summary(),
            100.0 * threshold,
            elapsed.as_secs_f64()
        ));
        reports.push(serde_json::from_str::<Value>(&r.deterministic_json()).unwrap());
    }
    if !missing.is_empty() {
        return Outcome::blocked(format!(
            "dataset not found under {}: {}",
            default_data_dir().display(),
            missing.join(", ")
        ));
    }
    Outcome::new(ok, parts.join("; "), Value::Array(reports))
}

/// Criteria 2 to 9 in order.
fn run_2_to_9() -> Vec<(u8, &'static str, Outcome)> {
    let cfg = suite_config();
    vec![
        (
            2,
            "WL1 separation implies EWL separation",
            timed(DOMINANCE_LIMIT, || {
                suite_outcome(properties::dominance_suite(&cfg, &wl_verdict).unwrap(), "", PAIRS)
            }),
        ),
        (
            3,
            "constant edge features: EWL equals WL1",
            timed(CONSTANT_EDGE_LIMIT, || {
                suite_outcome(properties::constant_edge_suite(&cfg, &wl_verdict).unwrap(), "", PAIRS)
            }),
        ),
        (
            4,
            "EWLEA equals EWL",
            timed(AGGREGATION_LIMIT, || {
                suite_outcome(properties::edge_aggregation_suite(&cfg, &wl_verdict).unwrap(), "", PAIRS)
            }),
        ),
        (
            5,
            "oracle soundness",
            timed(SOUNDNESS_LIMIT, || {
                let r = properties::soundness_suite(&cfg, &wl_verdict).unwrap();
                let pool_ok = r.counter("pool_size").unwrap_or(0) >= POOL_SIZE;
                let pairs = POOL_SIZE * (POOL_SIZE - 1) / 2;
                let mut o = suite_outcome(r, &format!(", pool of <= {POOL_MAX_NODES} nodes"), pairs);
                if !pool_ok {
                    o.status = Status::Fail;
                }
                o
            }),
        ),
        (6, "gradient check", timed(GRAD_LIMIT, c6_gradients)),
        (7, "permutation invariance", timed(INVARIANCE_LIMIT, c7_invariance)),
        (8, "edge-sensitivity separation", timed(TOY_LIMIT, c8_edge_sensitivity)),
        (9, "desk-scale cross-validation", c9_cv()),
    ]
}

fn print(id: u8, name: &str, o: &Outcome) {
    let tag = match o.status {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Blocked => "BLOCKED",
    };
    println!("[{tag:<7}] {id:>2}. {name}: {}", o.detail);
}

fn main() -> ExitCode {
    // `cargo test` passes harness flags such as `--nocapture`; a name filter
    // that does not mention acceptance skips the suite.
    let args: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    if !args.is_empty() && !args.iter().any(|a| "acceptance".contains(a.as_str())) {
        return ExitCode::SUCCESS;
    }

    let mut statuses = Vec::new();
    let c1 = timed(STATS_LIMIT * STATS_DATASETS.len() as u32, c1_stats);
    print(1, "dataset statistics", &c1);
    statuses.push(c1.status);

    let first = run_2_to_9();
    for (id, name, o) in &first {
        print(*id, name, o);
        statuses.push(o.status);
    }

    let second = run_2_to_9();
    let canonical = |runs: &[(u8, &str, Outcome)]| -> String {
        let v: Vec<Value> = runs.iter().map(|(id, _, o)| json!({ "criterion": id, "report": o.report })).collect();
        serde_json::to_string_pretty(&v).unwrap()
    };
    let (a, b) = (canonical(&first), canonical(&second));
    let blocked9 = first.iter().any(|(id, _, o)| *id == 9 && o.status == Status::Blocked);
    let c10 = Outcome::new(
        a == b,
        format!(
            "reruns of 2-9 produce {} JSON reports ({} bytes){}",
            if a == b { "byte-identical" } else { "different" },
            a.len(),
            if blocked9 { "; 9 blocked, compared without it" } else { "" }
        ),
        Value::Null,
    );
    print(10, "determinism", &c10);
    statuses.push(c10.status);

    let fails = statuses.iter().filter(|&&s| s == Status::Fail).count();
    let blocked = statuses.iter().filter(|&&s| s == Status::Blocked).count();
    println!("acceptance: {} passed, {fails} failed, {blocked} blocked", statuses.len() - fails - blocked);
    if fails > 0 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
