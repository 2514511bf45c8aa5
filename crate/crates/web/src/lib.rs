//! Browser bindings. Every export takes exact rational strings and returns a
//! JSON string; errors come back as `{"error": ...}` so the page needs no
//! exception handling. Build with `wasm-pack build --target web`.

use serde_json::{json, Value};
use virasoro_core::exactalg::{bareiss_det, parse_rational, Rational, ToJson};
use virasoro_core::virasoro::{self, degeneracy_classify, eval_hc, gram_level, kac_det_compare, kac_product, KacVariant};
use wasm_bindgen::prelude::*;

/// Levels above this are refused; the symbolic Kac comparison grows quickly.
pub const MAX_LEVEL: u32 = 6;

fn point(h: &str, c: &str) -> Result<(Rational, Rational), String> {
    let h = parse_rational(h).map_err(|e| e.to_string())?;
    let c = parse_rational(c).map_err(|e| e.to_string())?;
    Ok((h, c))
}

fn level_ok(level: u32) -> Result<(), String> {
    if level > MAX_LEVEL {
        return Err(format!("level {level} is above the demo limit {MAX_LEVEL}"));
    }
    Ok(())
}

fn finish(r: Result<Value, String>) -> String {
    r.unwrap_or_else(|e| json!({ "error": e })).to_string()
}

pub fn gram_value(level: u32, h: &str, c: &str) -> Result<Value, String> {
    level_ok(level)?;
    let (h, c) = point(h, c)?;
    let g = gram_level(level, &h, &c);
    let det = bareiss_det(&g).map_err(|e| e.to_string())?;
    let cmp = kac_det_compare(level, KacVariant::Corrected).map_err(|e| e.to_string())?;
    let phi = eval_hc(&kac_product(level, KacVariant::Corrected), &h, &c);
    let rows: Vec<Value> = g.to_rows().iter().map(|r| Value::Array(r.iter().map(ToJson::to_json).collect())).collect();
    Ok(json!({
        "level": level,
        "h": h.to_json(),
        "c": c.to_json(),
        "gram": rows,
        "determinant": det.to_json(),
        "phi_product": phi.to_json(),
        "constant": cmp.constant.as_ref().map(ToJson::to_json),
        "matches": cmp.matches,
    }))
}

pub fn unitarity_value(h: &str, c: &str, max_level: u32) -> Result<Value, String> {
    level_ok(max_level)?;
    let (h, c) = point(h, c)?;
    serde_json::to_value(virasoro::unitarity_scan(&h, &c, max_level)).map_err(|e| e.to_string())
}

pub fn classify_value(h: &str, c: &str, bound: i64) -> Result<Value, String> {
    let (h, c) = point(h, c)?;
    let class = degeneracy_classify(&h, &c, bound.min(24)).map_err(|e| e.to_string())?;
    serde_json::to_value(class).map_err(|e| e.to_string())
}

/// Level-`level` Gram matrix at `(h, c)`, its determinant and the Kac comparison.
#[wasm_bindgen]
pub fn gram_report(level: u32, h: &str, c: &str) -> String {
    finish(gram_value(level, h, c))
}

/// Inertia of the Gram form at every level up to `max_level`.
#[wasm_bindgen]
pub fn unitarity_scan(h: &str, c: &str, max_level: u32) -> String {
    finish(unitarity_value(h, c, max_level))
}

/// Vanishing Kac factors with `α, β ≤ bound` and the two-pair matches.
#[wasm_bindgen]
pub fn classify(h: &str, c: &str, bound: i64) -> String {
    finish(classify_value(h, c, bound))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exports_answer_in_json() {
        let g: Value = serde_json::from_str(&gram_report(1, "1/16", "1/2")).unwrap();
        assert_eq!(g["determinant"], "1/8");
        let u: Value = serde_json::from_str(&unitarity_scan("1", "2", 3)).unwrap();
        assert_eq!(u["verdict"], "positive-definite");
        let k: Value = serde_json::from_str(&classify("1/16", "1/2", 4)).unwrap();
        assert_eq!(k["kind"], "two-or-more");
    }

    #[test]
    fn errors_are_reported_in_band() {
        let e: Value = serde_json::from_str(&gram_report(2, "x", "1")).unwrap();
        assert!(e["error"].as_str().unwrap().contains("rational"));
        let e: Value = serde_json::from_str(&unitarity_scan("1", "2", 40)).unwrap();
        assert!(e["error"].is_string());
    }
}
