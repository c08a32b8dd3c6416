//! Browser bindings for the demo page in `www/`.

use causal_ladder::exact::{fmt_ratio, parse_ratio, ratio, to_f64};
use causal_ladder::gap::degree_bound;
use causal_ladder::infer::interventional;
use causal_ladder::nfl::closed_form_error;
use causal_ladder::oracle::d_int;
use causal_ladder::{compute_oracle, BipartiteGraph, Caps, Error, HiddenParam, Intervention, OracleKind};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn js(e: Error) -> JsValue {
    JsValue::from_str(&e.to_string())
}

/// Canonical oracle bytes for a hidden-parameter JSON document.
#[wasm_bindgen]
pub fn oracle_text(param_json: &str, kind: &str) -> Result<String, JsValue> {
    let param = HiddenParam::from_json(param_json).map_err(js)?;
    let kind: OracleKind = kind.parse().map_err(js)?;
    let oracle = compute_oracle(&param.build_scm(), kind, &Caps::default()).map_err(js)?;
    Ok(oracle.serialize().as_str().to_owned())
}

/// `P(X_j = 1)` for every `j`, observationally (`var < 0`) or under `do(X_var = value)`.
#[wasm_bindgen]
pub fn marginals(param_json: &str, var: i32, value: bool) -> Result<String, JsValue> {
    let scm = HiddenParam::from_json(param_json).map_err(js)?.build_scm();
    let iv = match usize::try_from(var) {
        Ok(v) => Intervention::single(v, value),
        Err(_) => Intervention::none(),
    };
    let dist = interventional(&scm, &iv, &Caps::default()).map_err(js)?;
    let probs: Vec<_> = (0..scm.n())
        .map(|j| {
            let p = dist.marginal_prob(j, true);
            json!({ "exact": fmt_ratio(&p), "value": to_f64(&p) })
        })
        .collect();
    Ok(json!({ "n": scm.n(), "probs": probs }).to_string())
}

/// Exact `d_Int` between the INT1 oracles of two bipartite graphs given as masks.
#[wasm_bindgen]
pub fn bipartite_distance(m: usize, mask_a: u32, mask_b: u32) -> Result<String, JsValue> {
    if m == 0 || m > 3 {
        return Err(JsValue::from_str("m must be 1, 2 or 3"));
    }
    let caps = Caps::default();
    let oracle = |mask: u32| {
        let g = BipartiteGraph::from_mask(m, u64::from(mask) & ((1 << (m * m)) - 1));
        compute_oracle(&HiddenParam::Graph(g).build_scm(), OracleKind::Int1, &caps)
    };
    let d = d_int(&oracle(mask_a).map_err(js)?, &oracle(mask_b).map_err(js)?).map_err(js)?;
    Ok(fmt_ratio(&d))
}

/// Expected absolute error of a constant per-query predictor `p̂ = k/steps`, `k = 0..=steps`.
#[wasm_bindgen]
pub fn per_query_error_curve(steps: u32) -> Result<String, JsValue> {
    let steps = steps.clamp(1, 256);
    let points: Vec<_> = (0..=steps)
        .map(|k| {
            let p = parse_ratio(&format!("{k}/{steps}")).expect("well-formed");
            let e = closed_form_error(&[(ratio(1, 1), p.clone())]);
            json!({ "p": to_f64(&p), "error": to_f64(&e), "exact": fmt_ratio(&e) })
        })
        .collect();
    Ok(serde_json::Value::from(points).to_string())
}

/// Exact parent-set counts against the closed-form bound for `d = 1..n-1`.
#[wasm_bindgen]
pub fn degree_bound_rows(n: usize) -> Result<String, JsValue> {
    let n = n.clamp(2, 40);
    let rows: Vec<_> = (1..n)
        .map(|d| {
            let r = degree_bound(n, d).expect("d in range");
            json!({
                "d": d,
                "parent_choices": r.parent_choices,
                "rhs_floor": r.rhs_floor,
                "check": format!("{:?}", r.closed_form_check),
            })
        })
        .collect::<Vec<_>>();
    Ok(serde_json::Value::from(rows).to_string())
}
