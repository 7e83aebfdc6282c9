#![allow(dead_code)]

use serde_json::{Map, Value};
use sop_cli::{parse_config, ExperimentConfig};

/// Reference scenario of the cross-engine checks: `K = 2`, `m = 2`,
/// `Ω₁ = 12 dB`, `Ω₂ = Ω_R = 10 dB`, `Ω_E = -5 dB`. Keys in `extra` override.
pub fn base_json(extra: &str) -> String {
    let mut base: Map<String, Value> = serde_json::from_str(
        r#"{"K":2,"mR":2,"mU":2,"mE":2,"omegaR_dB":10,"omega1_dB":12,"omega2_dB":10,"omegaE_dB":-5,"P_dB":10,"R1_s":0.1,"R2_s":0.05}"#,
    )
    .unwrap();
    let extra: Map<String, Value> = serde_json::from_str(&format!("{{{extra}}}")).unwrap();
    base.extend(extra);
    Value::Object(base).to_string()
}

pub fn config(extra: &str) -> ExperimentConfig {
    parse_config(&base_json(extra)).expect("valid config")
}
