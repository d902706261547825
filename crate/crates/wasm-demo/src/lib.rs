//! Browser bindings. Each export takes and returns JSON strings; the plain
//! functions behind them are usable from native code and tests.

use serde::Serialize;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use edgewl::iso::{brute_force_isomorphic_with_limit, DEFAULT_SIZE_LIMIT};
use edgewl::nn::{EginModel, ModelConfig, ModelVariant};
use edgewl::{distinguishable, refine, Graph, GraphData, Variant};

const DEMO_HIDDEN_DIM: usize = 32;
const DEMO_EMBEDDING_DIM: usize = 16;
const DEMO_LAYERS: usize = 3;

fn parse_graph(text: &str) -> Result<Graph, String> {
    let data: GraphData = serde_json::from_str(text).map_err(|e| format!("graph JSON: {e}"))?;
    data.build().map_err(|e| e.to_string())
}

fn to_string<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("values serialize")
}

/// Joint refinement of a JSON array of graphs. Returns per-round node colors
/// so a page can paint them, the stable signature, and a class id shared by
/// graphs the variant cannot tell apart.
pub fn refine_colors(graphs_json: &str, variant: &str) -> Result<String, String> {
    let variant: Variant = variant.parse()?;
    let data: Vec<GraphData> = serde_json::from_str(graphs_json).map_err(|e| format!("graph list JSON: {e}"))?;
    let graphs = data.iter().map(|d| d.build().map_err(|e| e.to_string())).collect::<Result<Vec<_>, _>>()?;
    let out = refine(&graphs, variant).map_err(|e| e.to_string())?;
    let mut classes: Vec<&edgewl::GraphSignature> = Vec::new();
    let mut rows = Vec::new();
    for (trace, sig) in &out {
        let class = match classes.iter().position(|s| s.same_as(sig).unwrap_or(false)) {
            Some(c) => c,
            None => {
                classes.push(sig);
                classes.len() - 1
            }
        };
        rows.push(json!({
            "node_colors": trace.node_colors,
            "histograms": trace.histograms(),
            "signature": sig.classes(),
            "class": class,
        }));
    }
    let iterations = out.first().map_or(0, |(t, _)| t.iterations_to_stable);
    Ok(to_string(&json!({ "variant": variant, "iterations_to_stable": iterations, "graphs": rows })))
}

/// Verdicts of every WL variant and, for graphs within its limit, the exact
/// oracle.
pub fn isotest(a_json: &str, b_json: &str) -> Result<String, String> {
    let (a, b) = (parse_graph(a_json)?, parse_graph(b_json)?);
    let mut verdicts = serde_json::Map::new();
    for v in Variant::ALL {
        verdicts.insert(v.to_string(), Value::Bool(distinguishable(&a, &b, v).map_err(|e| e.to_string())?));
    }
    let oracle = match brute_force_isomorphic_with_limit(&a, &b, DEFAULT_SIZE_LIMIT) {
        Ok(r) => json!({ "status": if r.isomorphic { "isomorphic" } else { "not isomorphic" }, "witness": r.witness }),
        Err(e) => json!({ "status": "skipped", "reason": e.to_string() }),
    };
    Ok(to_string(&json!({ "distinguishable": verdicts, "oracle": oracle })))
}

/// Untrained seeded models of every variant applied to both graphs:
/// graph embeddings, logits, and the largest embedding difference.
pub fn egin_compare(a_json: &str, b_json: &str, seed: u64) -> Result<String, String> {
    let (a, b) = (parse_graph(a_json)?, parse_graph(b_json)?);
    if (a.node_dim(), a.edge_dim()) != (b.node_dim(), b.edge_dim()) {
        return Err(format!(
            "feature widths differ: {}/{} vs {}/{}",
            a.node_dim(),
            a.edge_dim(),
            b.node_dim(),
            b.edge_dim()
        ));
    }
    let models = [
        ("EGIN", ModelVariant::Egin, false),
        ("EGIN-eps", ModelVariant::Egin, true),
        ("EGIN-C", ModelVariant::EginC, false),
        ("EGIN-E", ModelVariant::EginE, false),
        ("GIN (no edges)", ModelVariant::GinDegenerate, false),
    ];
    let mut rows = Vec::new();
    for (name, variant, use_epsilon) in models {
        let cfg = ModelConfig {
            variant,
            use_epsilon,
            node_dim: a.node_dim().max(1),
            edge_dim: a.edge_dim(),
            hidden_dim: DEMO_HIDDEN_DIM,
            embedding_dim: DEMO_EMBEDDING_DIM,
            num_layers: DEMO_LAYERS,
            num_classes: 2,
            seed,
        };
        let m = EginModel::new(cfg).map_err(|e| format!("{name}: {e}"))?;
        let (ea, eb) = (m.embed(&a).map_err(|e| e.to_string())?, m.embed(&b).map_err(|e| e.to_string())?);
        let diff = ea.iter().zip(&eb).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        rows.push(json!({
            "model": name,
            "embedding_a": ea,
            "embedding_b": eb,
            "logits_a": m.logits(&a).map_err(|e| e.to_string())?,
            "logits_b": m.logits(&b).map_err(|e| e.to_string())?,
            "max_embedding_diff": diff,
        }));
    }
    Ok(to_string(&json!({ "seed": seed, "models": rows })))
}

#[wasm_bindgen(js_name = refineColors)]
pub fn refine_colors_js(graphs_json: &str, variant: &str) -> Result<String, JsValue> {
    refine_colors(graphs_json, variant).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = isotest)]
pub fn isotest_js(a_json: &str, b_json: &str) -> Result<String, JsValue> {
    isotest(a_json, b_json).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = eginCompare)]
pub fn egin_compare_js(a_json: &str, b_json: &str, seed: u32) -> Result<String, JsValue> {
    egin_compare(a_json, b_json, u64::from(seed)).map_err(|e| JsValue::from_str(&e))
}
