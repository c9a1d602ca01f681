//! Browser bindings: JSON-in/JSON-out wrappers around the coherence library
//! for the static demo page in `www/`.
//!
//! Every export returns a JSON string; failures come back as
//! `{"error": "..."}` so the page needs no exception handling.

use wasm_bindgen::prelude::*;

use azcoherence::coherence::closed_z1_value_unchecked;
use azcoherence::states;
use azcoherence::{
    classify_regime, coherence_with, f_az, gen_div, qubit_pure_closed, renyi_div, tsallis_div,
    AlphaZ, EvalMethod, OptimizerConfig, QubitVariant, StateFile,
};
use serde_json::json;

fn wrap(result: Result<serde_json::Value, String>) -> String {
    match result {
        Ok(value) => value.to_string(),
        Err(message) => json!({ "error": message }).to_string(),
    }
}

fn parse_params(alpha: f64, z: f64) -> Result<AlphaZ, String> {
    AlphaZ::new(alpha, z).map_err(|e| e.to_string())
}

fn parse_state(text: &str) -> Result<azcoherence::DensityMatrix, String> {
    StateFile::from_json(text)
        .and_then(|sf| sf.to_density())
        .map_err(|e| e.to_string())
}

/// Coherence of pure qubit states over c3 in [-1, 1] at the given
/// parameters: numeric optimizer values plus a closed-form overlay where one
/// exists (the alpha = 1/2 special cases and the z = 1 formula).
#[wasm_bindgen]
pub fn sweep_qubit(alpha: f64, z: f64, points: usize) -> String {
    wrap(sweep_qubit_impl(alpha, z, points))
}

fn sweep_qubit_impl(alpha: f64, z: f64, points: usize) -> Result<serde_json::Value, String> {
    let p = parse_params(alpha, z)?;
    if !(2..=2001).contains(&points) {
        return Err("points must be between 2 and 2001".into());
    }
    let cfg = OptimizerConfig::fast(7);
    let variant = if alpha == 0.5 {
        if z == 0.5 {
            Some(QubitVariant::ZHalf)
        } else if z == 1.0 {
            Some(QubitVariant::ZOne)
        } else if z == 2.0 {
            Some(QubitVariant::ZTwo)
        } else {
            None
        }
    } else {
        None
    };
    let z_one_closed = p.is_z_one();
    let mut c3s = Vec::with_capacity(points);
    let mut numeric = Vec::with_capacity(points);
    let mut closed: Vec<Option<f64>> = Vec::with_capacity(points);
    for i in 0..points {
        let c3 = -1.0 + 2.0 * i as f64 / (points - 1) as f64;
        let bloch = [(1.0 - c3 * c3).max(0.0).sqrt(), 0.0, c3];
        let rho = states::qubit_pure_c3(c3).map_err(|e| e.to_string())?;
        let value = coherence_with(&rho, &p, EvalMethod::Numeric, &cfg)
            .map_err(|e| e.to_string())?
            .value;
        c3s.push(c3);
        numeric.push(value);
        closed.push(if let Some(v) = variant {
            Some(qubit_pure_closed(bloch, v).map_err(|e| e.to_string())?)
        } else if z_one_closed {
            Some(closed_z1_value_unchecked(&rho, alpha).0)
        } else {
            None
        });
    }
    Ok(json!({
        "alpha": alpha,
        "z": z,
        "regime": classify_regime(&p).label(),
        "c3": c3s,
        "numeric": numeric,
        "closed": closed,
    }))
}

/// Coherence of a state pasted as `{"dim": d, "re": [[..]], "im": [[..]]}`.
/// `method` is one of auto | closed | numeric | grid.
#[wasm_bindgen]
pub fn coherence_of_state(state_json: &str, alpha: f64, z: f64, method: &str) -> String {
    wrap(coherence_of_state_impl(state_json, alpha, z, method))
}

fn coherence_of_state_impl(
    state_json: &str,
    alpha: f64,
    z: f64,
    method: &str,
) -> Result<serde_json::Value, String> {
    let rho = parse_state(state_json)?;
    let p = parse_params(alpha, z)?;
    let method: EvalMethod = method.parse()?;
    let result = coherence_with(&rho, &p, method, &OptimizerConfig::fast(7))
        .map_err(|e| e.to_string())?;
    Ok(json!({
        "value": result.value,
        "optimal_sigma": result.optimal_sigma.probs(),
        "method": result.method,
        "regime": {
            "label": result.regime.label(),
            "proven": result.regime.is_proven(),
        },
        "converged": result.converged,
    }))
}

/// A divergence between two pasted states; `kind` is one of
/// renyi | generalized | tsallis | f.
#[wasm_bindgen]
pub fn divergence_of_states(
    rho_json: &str,
    sigma_json: &str,
    alpha: f64,
    z: f64,
    kind: &str,
) -> String {
    wrap(divergence_impl(rho_json, sigma_json, alpha, z, kind))
}

fn divergence_impl(
    rho_json: &str,
    sigma_json: &str,
    alpha: f64,
    z: f64,
    kind: &str,
) -> Result<serde_json::Value, String> {
    let rho = parse_state(rho_json)?;
    let sigma = parse_state(sigma_json)?;
    if rho.dim() != sigma.dim() {
        return Err(format!(
            "dimension mismatch: {} vs {}",
            rho.dim(),
            sigma.dim()
        ));
    }
    let p = parse_params(alpha, z)?;
    let f = f_az(&rho, &sigma, &p);
    let value = match kind {
        "renyi" => renyi_div(&rho, &sigma, &p),
        "generalized" => gen_div(&rho, &sigma, &p),
        "tsallis" => {
            if !p.is_z_one() {
                return Err("the Tsallis divergence requires z = 1".into());
            }
            tsallis_div(&rho, &sigma, alpha).map_err(|e| e.to_string())?
        }
        "f" => f,
        other => return Err(format!("unknown divergence kind {other:?}")),
    };
    Ok(json!({
        "kind": kind,
        "alpha": alpha,
        "z": z,
        "regime": classify_regime(&p).label(),
        "value": if value.is_finite() { json!(value) } else { json!(null) },
        "f": if f.is_finite() { json!(f) } else { json!(null) },
        "infinite": value.is_infinite() || f.is_infinite(),
    }))
}
