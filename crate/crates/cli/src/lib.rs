//! The `edgewl` command-line tool.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use edgewl::error::{HarnessError, TuError};
use edgewl::harness::{cross_validate, train, wl_baseline_cv, TrainConfig, EMBEDDING_DIM_GRID, HIDDEN_DIM_GRID};
use edgewl::iso::{brute_force_isomorphic_with_limit, DEFAULT_SIZE_LIMIT};
use edgewl::nn::gradcheck::grad_check;
use edgewl::nn::{Checkpoint, EginModel, ModelConfig, ModelVariant};
use edgewl::properties::{run_all, wl_verdict, SuiteConfig, Violation};
use edgewl::tu::{compare_stats, default_data_dir, reference_stats, DATA_DIR_ENV};
use edgewl::{dataset_stats, parse_tu_dataset, refine, Dataset, Graph, GraphData, Variant};

pub mod fetch;

#[derive(Debug, Parser)]
#[command(name = "edgewl", version, about = "Edge-aware WL refinement and edge-featured GIN experiments")]
pub struct Cli {
    /// Emit JSON instead of a human-readable table.
    #[arg(long, global = true)]
    pub json: bool,

    /// Write the JSON result to this file as well.
    #[arg(long, global = true, value_name = "FILE")]
    pub output: Option<PathBuf>,

    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Download TU datasets into the cache directory.
    Fetch(FetchArgs),
    /// Dataset statistics, compared against the published table when known.
    Stats(DatasetArgs),
    /// Color refinement traces for graph JSON files.
    Refine(RefineArgs),
    /// WL verdicts and the exact oracle for two graphs.
    Isotest(IsotestArgs),
    /// Randomized checks relating WL1, EWL, EWLEA and the oracle.
    Properties(PropertiesArgs),
    /// Cross-validated WL-histogram baseline.
    WlClassify(WlClassifyArgs),
    /// Cross-validated edge-featured GIN.
    Cv(CvArgs),
    /// Compare analytic and numerical gradients of a model.
    GradCheck(GradCheckArgs),
}

#[derive(Debug, Args)]
pub struct DataDir {
    /// Dataset cache directory.
    #[arg(long, env = DATA_DIR_ENV, value_name = "DIR")]
    pub data_dir: Option<PathBuf>,
}

impl DataDir {
    fn resolve(&self) -> PathBuf {
        self.data_dir.clone().unwrap_or_else(default_data_dir)
    }
}

#[derive(Debug, Args)]
pub struct FetchArgs {
    /// Dataset names, e.g. MUTAG AIDS.
    #[arg(required = true)]
    pub names: Vec<String>,
    /// Base URL of the archive server.
    #[arg(long, default_value = fetch::DEFAULT_BASE_URL)]
    pub base_url: String,
    #[command(flatten)]
    pub dir: DataDir,
}

#[derive(Debug, Args)]
pub struct DatasetArgs {
    /// Dataset name inside the cache directory.
    #[arg(long, required_unless_present = "path")]
    pub dataset: Option<String>,
    /// Explicit directory holding `<NAME>_A.txt` and friends.
    #[arg(long, conflicts_with = "dataset")]
    pub path: Option<PathBuf>,
    #[command(flatten)]
    pub dir: DataDir,
}

#[derive(Debug, Args)]
pub struct RefineArgs {
    /// Graph JSON files, refined jointly.
    #[arg(required = true)]
    pub graphs: Vec<PathBuf>,
    #[arg(long, default_value = "EWL")]
    pub variant: Variant,
}

#[derive(Debug, Args)]
pub struct IsotestArgs {
    /// Two graph files, or one file holding `{"g1": .., "g2": ..}` such as a
    /// recorded property violation.
    #[arg(required = true, num_args = 1..=2)]
    pub graphs: Vec<PathBuf>,
    /// Variants to report; all three by default.
    #[arg(long = "variant")]
    pub variants: Vec<Variant>,
    /// Largest graph handed to the exact oracle.
    #[arg(long, default_value_t = DEFAULT_SIZE_LIMIT)]
    pub oracle_limit: usize,
}

#[derive(Debug, Args)]
pub struct PropertiesArgs {
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub pairs: u64,
    /// Graphs in the oracle soundness pool.
    #[arg(long, default_value_t = 200)]
    pub pool_size: usize,
    /// Where violating pairs are written; defaults to `edgewl-violations.json`.
    #[arg(long, value_name = "FILE")]
    pub violations: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct WlClassifyArgs {
    #[command(flatten)]
    pub data: DatasetArgs,
    #[arg(long, default_value = "EWL")]
    pub variant: Variant,
    #[arg(long, default_value_t = 3)]
    pub depth: usize,
    #[arg(long, default_value_t = 10)]
    pub folds: usize,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// egin, egin-c, egin-e or gin.
    #[arg(long, default_value = "egin")]
    pub variant: ModelVariant,
    /// Learn a per-layer epsilon.
    #[arg(long)]
    pub epsilon: bool,
    #[arg(long)]
    pub hidden_dim: Option<usize>,
    #[arg(long)]
    pub embedding_dim: Option<usize>,
    #[arg(long)]
    pub layers: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CvArgs {
    #[command(flatten)]
    pub data: DatasetArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 100)]
    pub epochs: usize,
    #[arg(long, default_value_t = 0.01)]
    pub lr: f64,
    #[arg(long, default_value_t = 10)]
    pub folds: usize,
    #[arg(long)]
    pub batch_size: Option<usize>,
    /// Allow dimensions outside the standard grids.
    #[arg(long)]
    pub off_grid: bool,
    /// Folds trained concurrently.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// After cross-validation, train on the full dataset and save a checkpoint.
    #[arg(long, value_name = "FILE")]
    pub save_model: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GradCheckArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Graph JSON file; a seeded random graph otherwise.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Nodes in the random graph.
    #[arg(long, default_value_t = 6)]
    pub nodes: usize,
    /// Check a saved model instead of a fresh one.
    #[arg(long, value_name = "FILE")]
    pub checkpoint: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-4)]
    pub tolerance: f64,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl From<TuError> for CliError {
    fn from(e: TuError) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Config(_) | HarnessError::BadK(_) | HarnessError::ClassTooSmall { .. } => {
                CliError::Usage(format!("{e} (hidden dim grid {HIDDEN_DIM_GRID:?}, embedding dim grid {EMBEDDING_DIM_GRID:?}; --off-grid to override)"))
            }
            other => CliError::Io(other.to_string()),
        }
    }
}

/// Result of a successful command. A command that finds a violation still
/// produces its report and sets `violation`.
#[derive(Debug)]
pub struct Report {
    pub json: Value,
    pub human: String,
    pub violation: Option<String>,
}

impl Report {
    fn ok(json: Value, human: String) -> Self {
        Report { json, human, violation: None }
    }
}

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let report = match &cli.command {
        Command::Fetch(a) => cmd_fetch(a)?,
        Command::Stats(a) => cmd_stats(a)?,
        Command::Refine(a) => cmd_refine(a)?,
        Command::Isotest(a) => cmd_isotest(a)?,
        Command::Properties(a) => cmd_properties(a, cli.seed)?,
        Command::WlClassify(a) => cmd_wl_classify(a, cli.seed)?,
        Command::Cv(a) => cmd_cv(a, cli.seed)?,
        Command::GradCheck(a) => cmd_grad_check(a, cli.seed)?,
    };
    if let Some(path) = &cli.output {
        write_json(path, &report.json)?;
    }
    Ok(report)
}

fn write_json(path: &Path, value: &Value) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("values serialize");
    fs::write(path, text + "\n").map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn graph_from_value(value: Value, origin: &str) -> Result<Graph, CliError> {
    let data: GraphData = serde_json::from_value(value).map_err(|e| CliError::Io(format!("{origin}: {e}")))?;
    let g = data.build().map_err(|e| CliError::Io(format!("{origin}: {e}")))?;
    for w in g.validate() {
        log::warn!("{origin}: {w}");
    }
    Ok(g)
}

pub fn read_graph(path: &Path) -> Result<Graph, CliError> {
    graph_from_value(read_json(path)?, &path.display().to_string())
}

fn load_dataset(a: &DatasetArgs) -> Result<Dataset, CliError> {
    let (dir, name) = match (&a.path, &a.dataset) {
        (Some(path), _) => {
            let name = infer_name(path)?;
            (path.clone(), name)
        }
        (None, Some(name)) => (a.dir.resolve().join(name), name.clone()),
        (None, None) => return Err(CliError::Usage("one of --dataset or --path is required".into())),
    };
    if !dir.is_dir() {
        return Err(CliError::Io(format!(
            "dataset directory {} not found; run `edgewl fetch {name}` or set {DATA_DIR_ENV}",
            dir.display()
        )));
    }
    Ok(parse_tu_dataset(&dir, &name)?)
}

/// Dataset name from the single `<NAME>_A.txt` in a directory.
fn infer_name(dir: &Path) -> Result<String, CliError> {
    let entries = fs::read_dir(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let mut names: Vec<String> = entries
        .filter_map(|e| e.ok())
        .filter_map(|e| e.file_name().to_str().and_then(|f| f.strip_suffix("_A.txt")).map(str::to_string))
        .collect();
    names.sort();
    match names.as_slice() {
        [one] => Ok(one.clone()),
        [] => Err(CliError::Io(format!("no <NAME>_A.txt in {}", dir.display()))),
        _ => Err(CliError::Usage(format!("several datasets in {}: {}", dir.display(), names.join(", ")))),
    }
}

fn cmd_fetch(a: &FetchArgs) -> Result<Report, CliError> {
    let root = a.dir.resolve();
    let mut fetched = Vec::new();
    for name in &a.names {
        let dir = fetch::fetch_dataset(&a.base_url, name, &root)?;
        fetched.push(json!({ "name": name, "directory": dir }));
    }
    let human = fetched
        .iter()
        .map(|f| format!("{:<12} {}", f["name"].as_str().unwrap_or(""), f["directory"].as_str().unwrap_or("")))
        .collect::<Vec<_>>()
        .join("\n");
    Ok(Report::ok(json!({ "fetched": fetched }), human))
}

fn cmd_stats(a: &DatasetArgs) -> Result<Report, CliError> {
    let d = load_dataset(a)?;
    let stats = dataset_stats(&d);
    let mut human = stats.to_string();
    let comparison = reference_stats(&d.name).map(|r| {
        let c = compare_stats(&stats, r, 0.01);
        human.push_str(&format!(
            "\nreference: {} graphs, {} classes, {:.2} nodes, {:.2} edges, dims {}/{}; match: {} (edge convention {:?})",
            r.num_graphs,
            r.num_classes,
            r.avg_nodes,
            r.avg_edges,
            r.node_feature_dim,
            r.edge_feature_dim,
            c.all_match(),
            c.edge_convention
        ));
        c
    });
    Ok(Report::ok(json!({ "stats": stats, "reference_comparison": comparison }), human))
}

fn cmd_refine(a: &RefineArgs) -> Result<Report, CliError> {
    let graphs = a.graphs.iter().map(|p| read_graph(p)).collect::<Result<Vec<_>, _>>()?;
    let out = refine(&graphs, a.variant).map_err(|e| CliError::Io(e.to_string()))?;
    let mut rows = Vec::new();
    let w = a.graphs.iter().map(|p| p.display().to_string().len()).max().unwrap_or(4).max(4);
    let mut human =
        format!("variant {}\n{:<4} {:<w$} {:>6} {:>10} {:>6}", a.variant, "#", "file", "nodes", "iterations", "class");
    // Inputs with equal stable signatures share a class id.
    let mut classes: Vec<&edgewl::GraphSignature> = Vec::new();
    for (i, ((trace, sig), path)) in out.iter().zip(&a.graphs).enumerate() {
        let class = match classes.iter().position(|s| s.same_as(sig).unwrap_or(false)) {
            Some(c) => c,
            None => {
                classes.push(sig);
                classes.len() - 1
            }
        };
        human.push_str(&format!(
            "\n{:<4} {:<w$} {:>6} {:>10} {:>6}",
            i,
            path.display(),
            graphs[i].node_count(),
            trace.iterations_to_stable,
            class
        ));
        rows.push(json!({
            "file": path,
            "histograms": trace.histograms(),
            "signature": sig.classes(),
            "iterations_to_stable": trace.iterations_to_stable,
            "class": class,
        }));
    }
    Ok(Report::ok(json!({ "variant": a.variant, "graphs": rows }), human))
}

fn isotest_inputs(a: &IsotestArgs) -> Result<(Graph, Graph), CliError> {
    match a.graphs.as_slice() {
        [x, y] => Ok((read_graph(x)?, read_graph(y)?)),
        [pair] => {
            let mut v = read_json(pair)?;
            // A violations file holds a list; replay its first entry.
            if let Value::Array(items) = v {
                v = items.into_iter().next().ok_or_else(|| CliError::Io(format!("{}: empty list", pair.display())))?;
            }
            let origin = pair.display().to_string();
            let g1 = v.get("g1").cloned().ok_or_else(|| CliError::Io(format!("{origin}: missing g1")))?;
            let g2 = v.get("g2").cloned().ok_or_else(|| CliError::Io(format!("{origin}: missing g2")))?;
            Ok((graph_from_value(g1, &origin)?, graph_from_value(g2, &origin)?))
        }
        _ => Err(CliError::Usage("isotest takes two graph files or one pair file".into())),
    }
}

fn cmd_isotest(a: &IsotestArgs) -> Result<Report, CliError> {
    let (g1, g2) = isotest_inputs(a)?;
    let variants = if a.variants.is_empty() { Variant::ALL.to_vec() } else { a.variants.clone() };
    let mut verdicts = serde_json::Map::new();
    let mut human = String::new();
    for v in variants {
        let d = edgewl::distinguishable(&g1, &g2, v).map_err(|e| CliError::Io(e.to_string()))?;
        verdicts.insert(v.to_string(), Value::Bool(d));
        human.push_str(&format!(
            "{:<7} {}\n",
            format!("{v}:"),
            if d { "distinguishable" } else { "indistinguishable" }
        ));
    }
    let oracle = match brute_force_isomorphic_with_limit(&g1, &g2, a.oracle_limit) {
        Ok(r) => {
            human.push_str(&format!("oracle: {}", if r.isomorphic { "isomorphic" } else { "not isomorphic" }));
            json!({ "status": if r.isomorphic { "isomorphic" } else { "not isomorphic" }, "witness": r.witness })
        }
        Err(e) => {
            human.push_str(&format!("oracle: skipped ({e})"));
            json!({ "status": "skipped", "reason": e.to_string() })
        }
    };
    Ok(Report::ok(json!({ "distinguishable": verdicts, "oracle": oracle }), human))
}

fn cmd_properties(a: &PropertiesArgs, seed: u64) -> Result<Report, CliError> {
    let cfg = SuiteConfig { pairs: a.pairs as usize, seed, pool_size: a.pool_size, ..SuiteConfig::default() };
    let report = run_all(&cfg, &wl_verdict).map_err(|e| CliError::Io(e.to_string()))?;
    let mut human = format!("{:<32} {:>8} {:>10}  counters", "suite", "checked", "violations");
    for s in &report.suites {
        let counters: Vec<String> = s.counters.iter().map(|(k, v)| format!("{k}={v}")).collect();
        human.push_str(&format!(
            "\n{:<32} {:>8} {:>10}  {}{}",
            s.name,
            s.checked,
            s.violations.len(),
            counters.join(" "),
            if s.passed { "" } else { "  FAILED" }
        ));
    }
    let violations: Vec<&Violation> = report.suites.iter().flat_map(|s| &s.violations).collect();
    let mut result = Report::ok(serde_json::to_value(&report).expect("report serializes"), human);
    if !report.passed {
        let path = a.violations.clone().unwrap_or_else(|| PathBuf::from("edgewl-violations.json"));
        write_json(&path, &serde_json::to_value(&violations).expect("violations serialize"))?;
        result.violation = Some(format!(
            "{} violation(s); pairs written to {} (replay with `edgewl isotest {}`)",
            violations.len(),
            path.display(),
            path.display()
        ));
    }
    Ok(result)
}

fn cmd_wl_classify(a: &WlClassifyArgs, seed: u64) -> Result<Report, CliError> {
    let d = load_dataset(&a.data)?;
    let r = wl_baseline_cv(&d, a.variant, a.depth, a.folds, seed)?;
    Ok(Report::ok(serde_json::from_str(&r.deterministic_json()).expect("report is JSON"), r.to_string()))
}

fn train_config(m: &ModelArgs, a: &CvArgs, seed: u64) -> TrainConfig {
    let defaults = TrainConfig::default();
    TrainConfig {
        variant: m.variant,
        use_epsilon: m.epsilon,
        hidden_dim: m.hidden_dim.unwrap_or(defaults.hidden_dim),
        embedding_dim: m.embedding_dim.unwrap_or(defaults.embedding_dim),
        num_layers: m.layers.unwrap_or(defaults.num_layers),
        epochs: a.epochs,
        learning_rate: a.lr,
        seed,
        folds: a.folds,
        batch_size: a.batch_size,
        off_grid: a.off_grid,
    }
}

fn cmd_cv(a: &CvArgs, seed: u64) -> Result<Report, CliError> {
    let cfg = train_config(&a.model, a, seed);
    cfg.validate()?;
    if a.jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    let d = load_dataset(&a.data)?;
    let r = cross_validate(&d, &cfg, a.jobs)?;
    let mut json: Value = serde_json::to_value(&r).expect("report serializes");
    let mut human = r.to_string();
    if let Some(path) = &a.save_model {
        let graphs: Vec<&Graph> = d.graphs.iter().collect();
        let out = train(&cfg, &graphs, &d.class_labels, d.num_classes)?;
        fs::write(path, Checkpoint::from_model(&out.model).to_json())
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        json["checkpoint"] = json!(path);
        human.push_str(&format!("\ncheckpoint: {}", path.display()));
    }
    Ok(Report::ok(json, human))
}

fn cmd_grad_check(a: &GradCheckArgs, seed: u64) -> Result<Report, CliError> {
    use rand::SeedableRng;
    let model = match &a.checkpoint {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            Checkpoint::from_json(&text)
                .and_then(|c| c.to_model())
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?
        }
        None => {
            let (node_dim, edge_dim) = match &a.graph {
                Some(p) => {
                    let g = read_graph(p)?;
                    (g.node_dim(), g.edge_dim())
                }
                None => (3, 3),
            };
            let cfg = ModelConfig {
                variant: a.model.variant,
                use_epsilon: a.model.epsilon,
                node_dim,
                edge_dim,
                hidden_dim: a.model.hidden_dim.unwrap_or(8),
                embedding_dim: a.model.embedding_dim.unwrap_or(8),
                num_layers: a.model.layers.unwrap_or(2),
                num_classes: 2,
                seed,
            };
            EginModel::new(cfg).map_err(|e| CliError::Usage(e.to_string()))?
        }
    };
    let graph = match &a.graph {
        Some(p) => read_graph(p)?,
        None => {
            let c = model.config();
            if (c.node_dim, c.edge_dim) == (3, 3) {
                edgewl::fixtures::gradient_check_graph(seed, a.nodes.max(1))
            } else {
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                edgewl::fixtures::random_graph(&mut rng, a.nodes.max(1), c.node_dim.max(1), c.edge_dim.max(1), 0.5)
            }
        }
    };
    let classes = model.config().num_classes;
    let mut errors = Vec::new();
    for label in 0..classes {
        errors.push(grad_check(&model, &graph, label).map_err(|e| CliError::Usage(e.to_string()))?);
    }
    let worst = errors.iter().copied().fold(0.0, f64::max);
    let passed = worst < a.tolerance;
    let human = format!(
        "{} (epsilon {}), {} parameters: max relative error {worst:.3e} ({} tolerance {:e})",
        model.config().variant,
        model.config().use_epsilon,
        model.parameter_count(),
        if passed { "within" } else { "EXCEEDS" },
        a.tolerance
    );
    let json = json!({
        "config": model.config(),
        "per_label_max_relative_error": errors,
        "max_relative_error": worst,
        "tolerance": a.tolerance,
        "passed": passed,
    });
    let mut r = Report::ok(json, human);
    if !passed {
        r.violation = Some(format!("gradient error {worst:e} exceeds {:e}", a.tolerance));
    }
    Ok(r)
}
