//! Browser bindings: recognition, scenario prediction and Picard lattices.
//!
//! Every entry point takes and returns JSON text. The `*_json` functions
//! carry the logic and run natively; the exported wrappers turn their errors
//! into JavaScript exceptions.

use serde_json::{json, Value};
use singlocus::catalog::{predict, ScenarioConfig};
use singlocus::lattice::{picard_group, PicardProblem};
use singlocus::parse::parse_series;
use singlocus::recognizer::recognize;
use wasm_bindgen::prelude::*;

/// The seven-curve example bundled with the page.
pub const GRAND_EXAMPLE: &str = include_str!("../../core/data/grand.json");

/// Recognition report for an expression in `x, y, z`, truncated at `order`.
pub fn recognize_json(expr: &str, order: u32) -> Result<String, String> {
    if !(2..=64).contains(&order) {
        return Err(format!("order {order} outside 2..=64"));
    }
    let f = parse_series(expr, order)
        .map_err(|e| format!("syntax error at offset {}: {}", e.offset, e.message))?;
    let report = recognize(&f).map_err(|e| e.to_string())?;
    Ok(report.to_json().to_string())
}

/// Predicted singularity and curve images for a scenario configuration.
pub fn scenario_predict_json(config: &str) -> Result<String, String> {
    let c: ScenarioConfig = serde_json::from_str(config).map_err(|e| e.to_string())?;
    let p = predict(&c).map_err(|e| e.to_string())?;
    Ok(json!({ "config": c, "prediction": p }).to_string())
}

/// Picard lattice of a problem: the basis labels, the HNF rows as decimal
/// strings and a generator description.
pub fn picard_json(problem: &str) -> Result<String, String> {
    let p: PicardProblem = serde_json::from_str(problem).map_err(|e| e.to_string())?;
    let pic = picard_group(&p).map_err(|e| e.to_string())?;
    let rows: Vec<Vec<String>> = pic
        .hnf()
        .rows()
        .iter()
        .map(|r| r.iter().map(|a| a.to_string()).collect())
        .collect();
    let v: Value = json!({
        "basis": p.labels(),
        "hnf": rows,
        "group": pic.describe(&p.labels()),
    });
    Ok(v.to_string())
}

#[wasm_bindgen]
pub fn recognize_expr(expr: &str, order: u32) -> Result<String, JsError> {
    recognize_json(expr, order).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn scenario_predict(config: &str) -> Result<String, JsError> {
    scenario_predict_json(config).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn picard(problem: &str) -> Result<String, JsError> {
    picard_json(problem).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn grand_example() -> String {
    GRAND_EXAMPLE.to_string()
}
