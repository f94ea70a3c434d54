//! Deterministic artifact formatting: 17-significant-digit CSV and the
//! JSON run summary.
//!
//! Every float in a CSV cell is written as `{:.16e}` — 17 significant
//! digits, enough to round-trip any f64 bit pattern — so identical
//! configs produce byte-identical files. The JSON summary goes through
//! the serializer's shortest-round-trip float encoding, which preserves
//! the exact values with the same determinism.

use serde_json::{json, Value};

use vvlab_core::rates::RateFit;

use crate::config::ExperimentConfig;

/// A float as 17 significant digits in scientific notation.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// The finished artifacts of one run, formatted and ready to write.
pub struct Artifacts {
    pub csv: String,
    pub json: String,
}

/// The JSON summary: the effective config (sufficient to reproduce the
/// run), the result rows, the rate fit when one was accepted, and the
/// code versions that produced it.
pub fn summary(cfg: &ExperimentConfig, rows: Vec<Value>, fit: Option<&RateFit>) -> String {
    let fit_value = match fit {
        Some(f) => json!({
            "alpha": f.alpha,
            "prefactor": f.prefactor,
            "residual": f.residual,
        }),
        None => Value::Null,
    };
    let doc = json!({
        "config_echo": serde_json::to_value(cfg).expect("config serializes"),
        "rows": rows,
        "fit": fit_value,
        "versions": {
            "vvlab": env!("CARGO_PKG_VERSION"),
            "vvlab_core": vvlab_core::VERSION,
            "schema": 1,
        },
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("summary serializes");
    text.push('\n');
    text
}
