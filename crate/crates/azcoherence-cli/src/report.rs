//! JSON rendering of command outputs.

use azcoherence::{AlphaZ, CoherenceResult};
use serde_json::json;

use crate::DivergenceKind;

pub(crate) fn coherence_json(result: &CoherenceResult) -> String {
    let value = json!({
        "value": result.value,
        "optimal_sigma": result.optimal_sigma.probs(),
        "method": result.method,
        "regime": {
            "label": result.regime.label(),
            "cases": result.regime.cases(),
            "proven": result.regime.is_proven(),
        },
        "converged": result.converged,
    });
    serde_json::to_string_pretty(&value).expect("serializable")
}

pub(crate) fn divergence_json(kind: DivergenceKind, p: &AlphaZ, value: f64, f: f64) -> String {
    let kind = match kind {
        DivergenceKind::Renyi => "renyi",
        DivergenceKind::Generalized => "generalized",
        DivergenceKind::Tsallis => "tsallis",
        DivergenceKind::F => "f",
    };
    let out = json!({
        "kind": kind,
        "alpha": p.alpha(),
        "z": p.z(),
        "value": if value.is_finite() { json!(value) } else { json!(null) },
        "f": if f.is_finite() { json!(f) } else { json!(null) },
        "infinite": value.is_infinite() || f.is_infinite(),
    });
    serde_json::to_string_pretty(&out).expect("serializable")
}
