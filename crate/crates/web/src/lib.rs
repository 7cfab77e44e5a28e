//! Browser bindings: a few JSON-returning entry points for the demo page.
//!
//! Each export takes the sandwich element as text, e.g. `"[1,1,3]"`. Non
//! idempotent inputs are replaced by their normalization. Errors come back as
//! JS exceptions carrying the message.

use sandwich_tn::classification::{self, Family};
use sandwich_tn::oracle::{self, VerifyOptions};
use sandwich_tn::variants::normalize_sandwich;
use sandwich_tn::{ScanGuard, Transformation, SCHEMA_VERSION};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Degree cap for anything that builds the multiplication table in a tab.
pub const MAX_SCAN: u64 = 3125;

fn parse(alpha: &str) -> Result<Transformation, String> {
    alpha.trim().parse().map_err(|e: sandwich_tn::Error| e.to_string())
}

fn summary(list: &[Family]) -> Value {
    list.iter()
        .map(|f| json!({ "descriptor": f.descriptor.to_string(), "cardinality": f.cardinality }))
        .collect()
}

/// Normalization and closed-form counts; never scans, so any degree works.
pub fn describe_json(alpha: &str) -> Result<String, String> {
    let nz = normalize_sandwich(&parse(alpha)?);
    let counts = classification::count_report(&nz.context, None);
    let idempotents = sandwich_tn::idempotents::count_idempotents_formula(&nz.context);
    let v = json!({
        "schema_version": SCHEMA_VERSION,
        "context": nz,
        "idempotents": idempotents.to_string(),
        "counts": counts,
    });
    Ok(v.to_string())
}

/// The five lists, as descriptors with cardinalities.
pub fn classify_json(alpha: &str) -> Result<String, String> {
    let nz = normalize_sandwich(&parse(alpha)?);
    let c = classification::classify(&nz.context, ScanGuard::new(MAX_SCAN)).map_err(|e| e.to_string())?;
    let v = json!({
        "schema_version": SCHEMA_VERSION,
        "context": nz,
        "isolated": summary(&c.isolated),
        "completely_isolated": summary(&c.completely_isolated),
        "left_convex": summary(&c.left_convex),
        "right_convex": summary(&c.right_convex),
        "convex": summary(&c.convex),
        "counts": c.counts,
    });
    Ok(v.to_string())
}

/// Oracle report, with the pruned search so small degrees get a full verdict.
pub fn verify_json(alpha: &str) -> Result<String, String> {
    let nz = normalize_sandwich(&parse(alpha)?);
    let opts = VerifyOptions {
        guard: ScanGuard::new(MAX_SCAN),
        pruned: true,
        ..VerifyOptions::default()
    };
    let report = oracle::verify_classification(&nz.context, opts).map_err(|e| e.to_string())?;
    Ok(serde_json::to_string(&report).expect("serializable"))
}

#[wasm_bindgen]
pub fn describe(alpha: &str) -> Result<String, JsError> {
    describe_json(alpha).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn classify(alpha: &str) -> Result<String, JsError> {
    classify_json(alpha).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn verify(alpha: &str) -> Result<String, JsError> {
    verify_json(alpha).map_err(|e| JsError::new(&e))
}
