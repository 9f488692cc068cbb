//! JSON-in, JSON-out bindings for the browser demo. Each exported function
//! has a plain Rust twin returning `Result<String, String>` so it can be
//! tested natively.

use std::collections::BTreeMap;
use std::str::FromStr;

use polydiv::divisor::PolyhedralDivisor;
use polydiv::examples;
use polydiv::lattice::{LatticeVector, RatVector};
use polydiv::polyhedron::SupportValue;
use polydiv::toroidal::{canonical_point_set, fan_from_divisor, verify_theorem1};
use serde::Serialize;
use serde_json::json;
use wasm_bindgen::prelude::*;

fn parse_divisor(text: &str) -> Result<PolyhedralDivisor, String> {
    serde_json::from_str(text).map_err(|e| format!("invalid divisor: {e}"))
}

fn parse_weight(text: &str) -> Result<LatticeVector, String> {
    text.split(',')
        .map(|x| {
            i64::from_str(&x.trim().replace('\u{2212}', "-"))
                .map_err(|_| format!("invalid weight entry {x:?}"))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(|v| LatticeVector::from_i64s(&v))
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

pub fn example_names() -> String {
    to_json(&examples::NAMES)
}

pub fn example_doc(name: &str) -> Result<String, String> {
    let d = examples::by_name(name).ok_or_else(|| {
        format!("unknown example {name:?}; available: {}", examples::NAMES.join(", "))
    })?;
    let mut v = serde_json::to_value(&d).expect("serializable");
    if let Some(desc) = examples::description(name) {
        v["description"] = json!(desc);
    }
    Ok(to_json(&v))
}

#[derive(Serialize)]
struct PointEvaluation {
    value: String,
    /// Vertices where `<u, .>` attains its minimum.
    argmin: Vec<RatVector>,
    vertices: Vec<RatVector>,
    rays: Vec<LatticeVector>,
}

/// `D(u)` and its floor, plus the data needed to draw each coefficient with
/// its supporting line `<u, x> = min`.
pub fn evaluate_doc(divisor: &str, weight: &str) -> Result<String, String> {
    let d = parse_divisor(divisor)?;
    let u = parse_weight(weight)?;
    let values = d.evaluate(&u).map_err(|e| e.to_string())?;
    let floor = d.evaluate_floor(&u).map_err(|e| e.to_string())?;
    let mut points = BTreeMap::new();
    for (label, p) in d.coefficients() {
        let SupportValue::Finite(m) = p.support_min(&u).map_err(|e| e.to_string())? else {
            unreachable!("weight was checked against the tail");
        };
        let argmin = p
            .vertices()
            .iter()
            .filter(|v| u.dot_rat(v) == m)
            .cloned()
            .collect();
        points.insert(
            label.clone(),
            PointEvaluation {
                value: m.to_string(),
                argmin,
                vertices: p.vertices().to_vec(),
                rays: p.rays().to_vec(),
            },
        );
    }
    Ok(to_json(&json!({
        "rank": d.rank(),
        "weight": u,
        "values": values,
        "degree": values.degree().to_string(),
        "floor": floor,
        "points": points,
        "tail": d.tail(),
    })))
}

pub fn fan_doc(divisor: &str) -> Result<String, String> {
    let d = parse_divisor(divisor)?;
    let fan = fan_from_divisor(&d, None).map_err(|e| e.to_string())?;
    Ok(to_json(&json!({
        "fan": fan,
        "points": canonical_point_set(&d),
        "properness": d.check_proper(),
    })))
}

pub fn verify_doc(divisor: &str, box_cap: u32) -> Result<String, String> {
    let d = parse_divisor(divisor)?;
    Ok(to_json(&verify_theorem1(&d, box_cap)))
}

fn js<T>(r: Result<T, String>) -> Result<T, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn examples_list() -> String {
    example_names()
}

#[wasm_bindgen]
pub fn example(name: &str) -> Result<String, JsError> {
    js(example_doc(name))
}

#[wasm_bindgen]
pub fn evaluate(divisor: &str, weight: &str) -> Result<String, JsError> {
    js(evaluate_doc(divisor, weight))
}

#[wasm_bindgen]
pub fn fan(divisor: &str) -> Result<String, JsError> {
    js(fan_doc(divisor))
}

#[wasm_bindgen]
pub fn verify(divisor: &str, box_cap: u32) -> Result<String, JsError> {
    js(verify_doc(divisor, box_cap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn sl2() -> String {
        example_doc("sl2").unwrap()
    }

    #[test]
    fn evaluates_with_argmin() {
        let v: Value = serde_json::from_str(&evaluate_doc(&sl2(), "-1,-1").unwrap()).unwrap();
        assert_eq!(v["values"], json!({"0": "-1", "1": "-1"}));
        assert_eq!(v["points"]["0"]["argmin"], json!([["1", "0"]]));
        assert_eq!(v["degree"], json!("-2"));
    }

    #[test]
    fn fan_and_verify() {
        let v: Value = serde_json::from_str(&fan_doc(&sl2()).unwrap()).unwrap();
        assert_eq!(v["fan"]["charts"]["0"]["generators"], json!([[1, 0, 0], [1, 1, 0]]));
        assert_eq!(v["points"]["essential_points"], json!(["0", "1"]));
        let r: Value = serde_json::from_str(&verify_doc(&sl2(), 16).unwrap()).unwrap();
        assert_eq!(r["overall"], json!(true));
    }

    #[test]
    fn errors_are_messages() {
        assert!(evaluate_doc("{", "0,0").is_err());
        assert!(evaluate_doc(&sl2(), "a,b").is_err());
        let t = example_doc("translate").unwrap();
        assert!(evaluate_doc(&t, "-1,0").unwrap_err().contains("(1,0)"));
        assert!(example_doc("nope").unwrap_err().contains("sl2"));
    }
}
