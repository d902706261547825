use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn toy_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data/TOY")
}

fn edgewl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_edgewl")).args(args).env_remove("EDGEWL_DATA_DIR").output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn isotest_separates_the_edge_labelled_triangles() {
    let (a, b) = (data("triangle_a.json"), data("triangle_b.json"));
    let v = json_of(&edgewl(&["isotest", path_str(&a), path_str(&b), "--json"]));
    assert_eq!(v["distinguishable"]["WL1"], false);
    assert_eq!(v["distinguishable"]["EWL"], true);
    assert_eq!(v["distinguishable"]["EWLEA"], true);
    assert_eq!(v["oracle"]["status"], "not isomorphic");

    let human = edgewl(&["isotest", path_str(&a), path_str(&b)]);
    let text = String::from_utf8(human.stdout).unwrap();
    assert!(text.contains("WL1:    indistinguishable"));
    assert!(text.contains("oracle: not isomorphic"));
}

#[test]
fn isotest_identical_files() {
    let a = data("triangle_a.json");
    let v = json_of(&edgewl(&["isotest", path_str(&a), path_str(&a), "--json"]));
    for variant in ["WL1", "EWL", "EWLEA"] {
        assert_eq!(v["distinguishable"][variant], false);
    }
    assert_eq!(v["oracle"]["status"], "isomorphic");
}

#[test]
fn isotest_skips_the_oracle_above_its_limit() {
    let c = data("cycle12.json");
    let v = json_of(&edgewl(&["isotest", path_str(&c), path_str(&c), "--json"]));
    assert_eq!(v["oracle"]["status"], "skipped");
    assert_eq!(v["distinguishable"]["EWL"], false);
}

#[test]
fn isotest_replays_a_pair_file() {
    let dir = tempfile::tempdir().unwrap();
    let a: Value = serde_json::from_str(&std::fs::read_to_string(data("triangle_a.json")).unwrap()).unwrap();
    let b: Value = serde_json::from_str(&std::fs::read_to_string(data("triangle_b.json")).unwrap()).unwrap();
    let pair = dir.path().join("pair.json");
    std::fs::write(&pair, serde_json::json!([{ "suite": "x", "detail": "y", "g1": a, "g2": b }]).to_string()).unwrap();
    let v = json_of(&edgewl(&["isotest", path_str(&pair), "--json"]));
    assert_eq!(v["distinguishable"]["EWL"], true);
}

#[test]
fn malformed_graph_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"node_features": [[1.0]], "edges": [[0, 3]], "edge_features": [[1.0]]}"#).unwrap();
    let out = edgewl(&["isotest", path_str(&bad), path_str(&bad)]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn refine_reports_histograms_per_iteration() {
    let (a, b) = (data("triangle_a.json"), data("triangle_b.json"));
    let v = json_of(&edgewl(&["refine", path_str(&a), path_str(&b), "--variant", "EWL", "--json"]));
    let graphs = v["graphs"].as_array().unwrap();
    assert_eq!(graphs.len(), 2);
    let iterations = graphs[0]["iterations_to_stable"].as_u64().unwrap() as usize;
    assert_eq!(graphs[0]["histograms"].as_array().unwrap().len(), iterations + 1);
    assert_ne!(graphs[0]["class"], graphs[1]["class"]);

    let v = json_of(&edgewl(&["refine", path_str(&a), path_str(&b), "--variant", "WL1", "--json"]));
    assert_eq!(v["graphs"][0]["class"], v["graphs"][1]["class"]);
}

#[test]
fn stats_on_a_directory() {
    let v = json_of(&edgewl(&["stats", "--path", path_str(&toy_dir()), "--json"]));
    assert_eq!(v["stats"]["num_graphs"], 4);
    assert_eq!(v["stats"]["edge_feature_dim"], 3);
    assert!(v["reference_comparison"].is_null());
}

#[test]
fn stats_on_a_missing_dataset_exits_with_io_code() {
    let dir = tempfile::tempdir().unwrap();
    let out = edgewl(&["stats", "--dataset", "MUTAG", "--data-dir", path_str(dir.path())]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("edgewl fetch MUTAG"));
}

#[test]
fn data_dir_comes_from_the_environment() {
    let root = toy_dir().parent().unwrap().to_path_buf();
    let out = Command::new(env!("CARGO_BIN_EXE_edgewl"))
        .args(["stats", "--dataset", "TOY", "--json"])
        .env("EDGEWL_DATA_DIR", &root)
        .output()
        .unwrap();
    assert_eq!(json_of(&out)["stats"]["name"], "TOY");
}

#[test]
fn off_grid_dimension_is_a_usage_error_listing_the_grid() {
    let out = edgewl(&["cv", "--path", path_str(&toy_dir()), "--hidden-dim", "48"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("[32, 64, 128]"), "{err}");
    let out = edgewl(&["cv", "--path", path_str(&toy_dir()), "--variant", "egin-e", "--embedding-dim", "12"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("[8, 16, 32]"));
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    assert_eq!(edgewl(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(edgewl(&["properties", "--pairs", "0"]).status.code(), Some(2));
}

fn strip_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("wall_clock_secs");
    v
}

#[test]
fn cv_is_deterministic_and_saves_a_usable_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    let ckpt = dir.path().join("model.json");
    let toy = toy_dir();
    let args = ["cv", "--path", path_str(&toy), "--folds", "2", "--epochs", "10", "--variant", "egin-e", "--json"];
    let first = strip_timing(json_of(&edgewl(&args)));
    let mut with_save = args.to_vec();
    with_save.extend(["--jobs", "2", "--save-model", path_str(&ckpt)]);
    let mut second = strip_timing(json_of(&edgewl(&with_save)));
    second.as_object_mut().unwrap().remove("checkpoint");
    assert_eq!(serde_json::to_string(&first).unwrap(), serde_json::to_string(&second).unwrap());
    assert_eq!(first["std_kind"], "population");
    assert_eq!(first["fold_accuracies"].as_array().unwrap().len(), 2);

    let saved: Value = serde_json::from_str(&std::fs::read_to_string(&ckpt).unwrap()).unwrap();
    assert_eq!(saved["format"], "edgewl-egin");
    let v = json_of(&edgewl(&["grad-check", "--checkpoint", path_str(&ckpt), "--json"]));
    assert_eq!(v["passed"], true);
}

#[test]
fn wl_classify_runs() {
    let v = json_of(&edgewl(&["wl-classify", "--path", path_str(&toy_dir()), "--folds", "2", "--json"]));
    assert_eq!(v["k"], 2);
    assert_eq!(v["learner"]["variant"], "EWL");
}

#[test]
fn properties_pass_and_repeat_exactly() {
    let args = ["properties", "--pairs", "50", "--pool-size", "20", "--seed", "3", "--json"];
    let a = edgewl(&args);
    let b = edgewl(&args);
    assert_eq!(a.stdout, b.stdout);
    let v = json_of(&a);
    assert_eq!(v["passed"], true);
    assert_eq!(v["config"]["seed"], 3);
    assert_eq!(v["suites"].as_array().unwrap().len(), 4);
}

#[test]
fn grad_check_exit_codes() {
    assert_eq!(edgewl(&["grad-check", "--variant", "egin-c", "--epsilon"]).status.code(), Some(0));
    let out = edgewl(&["grad-check", "--tolerance", "0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn output_flag_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let out_file = dir.path().join("stats.json");
    let out = edgewl(&["stats", "--path", path_str(&toy_dir()), "--output", path_str(&out_file)]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(out_file).unwrap()).unwrap();
    assert_eq!(v["stats"]["num_classes"], 2);
}

fn toy_zip(nested: bool) -> Vec<u8> {
    let mut buf = std::io::Cursor::new(Vec::new());
    {
        let mut zip = zip::ZipWriter::new(&mut buf);
        let options = zip::write::SimpleFileOptions::default();
        for entry in std::fs::read_dir(toy_dir()).unwrap() {
            let entry = entry.unwrap();
            let name = entry.file_name().into_string().unwrap();
            let name = if nested { format!("TOY/{name}") } else { name };
            zip.start_file(name, options).unwrap();
            zip.write_all(&std::fs::read(entry.path()).unwrap()).unwrap();
        }
        zip.start_file("TOY/README.txt", options).unwrap();
        zip.write_all(b"readme").unwrap();
        zip.finish().unwrap();
    }
    buf.into_inner()
}

#[test]
fn fetch_from_a_local_archive() {
    let src = tempfile::tempdir().unwrap();
    std::fs::write(src.path().join("TOY.zip"), toy_zip(true)).unwrap();
    let cache = tempfile::tempdir().unwrap();
    let base = format!("file://{}", src.path().display());
    let out = edgewl(&["fetch", "TOY", "--base-url", &base, "--data-dir", path_str(cache.path())]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json_of(&edgewl(&["stats", "--dataset", "TOY", "--data-dir", path_str(cache.path()), "--json"]));
    assert_eq!(v["stats"]["num_graphs"], 4);
}

#[test]
fn extraction_accepts_flat_archives_and_rejects_incomplete_ones() {
    let root = tempfile::tempdir().unwrap();
    let dir = edgewl_cli::fetch::extract_archive(&toy_zip(false), "TOY", root.path()).unwrap();
    assert!(dir.join("TOY_A.txt").is_file());

    let mut buf = std::io::Cursor::new(Vec::new());
    {
        let mut zip = zip::ZipWriter::new(&mut buf);
        zip.start_file("X/X_A.txt", zip::write::SimpleFileOptions::default()).unwrap();
        zip.write_all(b"1, 2\n").unwrap();
        zip.finish().unwrap();
    }
    let err = edgewl_cli::fetch::extract_archive(&buf.into_inner(), "X", root.path()).unwrap_err();
    assert!(err.to_string().contains("X_graph_indicator.txt"), "{err}");
    assert_eq!(err.exit_code(), 3);
}

#[test]
fn fetch_of_a_missing_archive_is_an_io_error() {
    let src = tempfile::tempdir().unwrap();
    let cache = tempfile::tempdir().unwrap();
    let base = format!("file://{}", src.path().display());
    let out = edgewl(&["fetch", "NOPE", "--base-url", &base, "--data-dir", path_str(cache.path())]);
    assert_eq!(out.status.code(), Some(3));
}
