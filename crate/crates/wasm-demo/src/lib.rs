//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Every export returns a JSON string. Series are always summed with the
//! radius guard off, since the estimated radius is far below any eps worth
//! plotting.

use std::f64::consts::TAU;

use anosov_core::acceptance::default_perturbation;
use anosov_core::conjugacy::SeriesContext;
use anosov_core::oracle::{stable_direction, DEFAULT_ITERS};
use anosov_core::slope::{slope, OrderValue};
use anosov_core::torus::{HyperbolicAuto, PerturbedMap, TorusPoint};
use anosov_core::trees::{catalan, RestrictMode, MAX_NODES};
use serde::Serialize;
use wasm_bindgen::prelude::*;

fn context(pmax: u32, order: usize) -> Result<SeriesContext, String> {
    SeriesContext::new(HyperbolicAuto::fibonacci(), default_perturbation(), pmax)
        .and_then(|c| c.with_k_max(order.clamp(5, MAX_NODES)))
        .map_err(|e| e.to_string())
}

fn mode(s: &str) -> Result<RestrictMode, String> {
    s.parse::<RestrictMode>().map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct FieldPoint {
    theta1: f64,
    theta2: f64,
    slope: f64,
    tangent: [f64; 2],
}

/// Slopes on an `n x n` grid.
pub fn slope_field_json(n: usize, eps: f64, order: usize, pmax: u32, restrict: &str) -> Result<String, String> {
    if n == 0 || n > 64 {
        return Err("grid size must be in 1..=64".into());
    }
    let ctx = context(pmax, order)?;
    let m = mode(restrict)?;
    let mut out = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            let psi = TorusPoint::new(TAU * (i as f64 + 0.5) / n as f64, TAU * (j as f64 + 0.5) / n as f64);
            let r = slope(&ctx, psi, eps, order, m, true).map_err(|e| e.to_string())?;
            out.push(FieldPoint {
                theta1: psi.theta1(),
                theta2: psi.theta2(),
                slope: r.slope,
                tangent: r.tangent,
            });
        }
    }
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct Table {
    per_order: Vec<OrderValue>,
    slope: f64,
    oracle_slope: f64,
    abs_err: f64,
    radius: f64,
}

/// Per-order values `Val[q_k(0)]` at one point, with the oracle slope.
pub fn per_order_json(
    theta1: f64,
    theta2: f64,
    eps: f64,
    order: usize,
    pmax: u32,
    restrict: &str,
) -> Result<String, String> {
    let ctx = context(pmax, order + 2)?;
    let psi = TorusPoint::new(theta1, theta2);
    let r = slope(&ctx, psi, eps, order, mode(restrict)?, true).map_err(|e| e.to_string())?;
    let map = PerturbedMap::new(ctx.auto().clone(), ctx.f().clone(), eps);
    let at = ctx.conjugate(psi, eps, (order + 2).min(MAX_NODES)).map_err(|e| e.to_string())?;
    let o = stable_direction(&map, at, DEFAULT_ITERS).map_err(|e| e.to_string())?;
    let table = Table {
        abs_err: (r.slope - o.slope).abs(),
        oracle_slope: o.slope,
        slope: r.slope,
        radius: r.radius,
        per_order: r.per_order,
    };
    serde_json::to_string(&table).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct CountRow {
    k: usize,
    shapes: String,
    sign_trees: String,
    derivative_keys: String,
}

/// Tree counts for `k = 1..=k_max`. Counts are strings since they overflow
/// JavaScript numbers for large `k`.
pub fn tree_counts_json(k_max: usize) -> Result<String, String> {
    if k_max == 0 || k_max > 30 {
        return Err("k_max must be in 1..=30".into());
    }
    let rows: Vec<CountRow> = (1..=k_max)
        .map(|k| {
            let shapes = catalan(k - 1);
            let signs = shapes * (1u128 << (k - 1));
            CountRow {
                k,
                shapes: shapes.to_string(),
                sign_trees: signs.to_string(),
                derivative_keys: (signs * k as u128).to_string(),
            }
        })
        .collect();
    serde_json::to_string(&rows).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn slope_field(n: usize, eps: f64, order: usize, pmax: u32, restrict: &str) -> Result<String, JsError> {
    slope_field_json(n, eps, order, pmax, restrict).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn per_order(
    theta1: f64,
    theta2: f64,
    eps: f64,
    order: usize,
    pmax: u32,
    restrict: &str,
) -> Result<String, JsError> {
    per_order_json(theta1, theta2, eps, order, pmax, restrict).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn tree_counts(k_max: usize) -> Result<String, JsError> {
    tree_counts_json(k_max).map_err(|e| JsError::new(&e))
}
