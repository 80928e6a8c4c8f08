//! Browser bindings: the Rieffel projection with its Chern number, the index of
//! a finite Fredholm module and the winding number on the circle. Every entry
//! point returns a JSON string; errors come back as `{"error": ...}`.

use lrcyclic::demos::{demo_circle, demo_fredholm, demo_nctorus, rieffel_projection, torus_values, FredholmModel, Ramp, RieffelSpec};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn respond(v: Result<Value, String>) -> String {
    match v {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

fn ramp_of(name: &str) -> Result<Ramp, String> {
    match name {
        "bump" => Ok(Ramp::Bump),
        "smoothstep" => Ok(Ramp::Smoothstep),
        other => Err(format!("unknown ramp {other:?}")),
    }
}

/// Profile samples of `f` and `g` on `[0, 1)` plus the full torus report.
pub fn torus_json(theta: f64, delta: f64, truncation: usize, ramp: &str, samples: usize) -> String {
    respond((|| {
        let spec = RieffelSpec { ramp: ramp_of(ramp)?, ..RieffelSpec::new(theta, delta, truncation) };
        let report = demo_nctorus(&spec).map_err(|e| e.to_string())?;
        let ts: Vec<f64> = (0..samples).map(|i| i as f64 / samples as f64).collect();
        let f: Vec<f64> = ts.iter().map(|t| spec.f(*t)).collect();
        let g: Vec<f64> = ts.iter().map(|t| spec.g(*t)).collect();
        Ok(json!({ "report": report, "t": ts, "f": f, "g": g }))
    })())
}

/// `P₀` and the Chern number for the projection alone, skipping the report.
pub fn chern_json(theta: f64, delta: f64, truncation: usize) -> String {
    respond((|| {
        let spec = RieffelSpec::new(theta, delta, truncation);
        let (e, idem) = rieffel_projection(&spec).map_err(|e| e.to_string())?;
        let v = torus_values(theta, &e, idem).map_err(|e| e.to_string())?;
        Ok(json!({ "trace": v.p0.re, "chern": v.chern.re, "p_hat": v.p_hat, "q_hat": v.q_hat, "idempotency_residual": idem }))
    })())
}

/// `diag` lists the 2n diagonal entries of e, separated by commas.
pub fn fredholm_json(n: usize, diag: &str, p: usize) -> String {
    respond((|| {
        let entries = diag
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| s.trim().parse::<i64>().map_err(|e| format!("{s:?}: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        let model = FredholmModel::diagonal(n, &entries, p).map_err(|e| e.to_string())?;
        let report = demo_fredholm(&model).map_err(|e| e.to_string())?;
        Ok(json!({ "report": report }))
    })())
}

pub fn winding_json(n: i64) -> String {
    respond(demo_circle(n).map(|r| json!({ "report": r })).map_err(|e| e.to_string()))
}

#[wasm_bindgen]
pub fn torus(theta: f64, delta: f64, truncation: usize, ramp: &str, samples: usize) -> String {
    torus_json(theta, delta, truncation, ramp, samples)
}

#[wasm_bindgen]
pub fn chern(theta: f64, delta: f64, truncation: usize) -> String {
    chern_json(theta, delta, truncation)
}

#[wasm_bindgen]
pub fn fredholm(n: usize, diag: &str, p: usize) -> String {
    fredholm_json(n, diag, p)
}

#[wasm_bindgen]
pub fn winding(n: i32) -> String {
    winding_json(n as i64)
}
