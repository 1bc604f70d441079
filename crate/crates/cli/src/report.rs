//! Report assembly: key-sorted JSON with a deterministic byte layout.
//!
//! Values are rendered through `serde_json::Value`, whose object maps are
//! ordered, and floats use the shortest representation that round-trips
//! exactly to the same double.

use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use krein_core::FrameAnalysis;

pub fn digest(parts: &[&[u8]]) -> String {
    let mut hasher = Sha256::new();
    for part in parts {
        hasher.update(part);
    }
    let out = hasher.finalize();
    let hex: String = out.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

pub fn opt_num(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

pub fn analysis_value(a: &FrameAnalysis) -> Value {
    let mut m = Map::new();
    m.insert(
        "is_j_fusion_frame".into(),
        Value::Bool(a.is_j_fusion_frame),
    );
    m.insert("a_plus".into(), opt_num(a.bounds_plus.map(|b| b.0)));
    m.insert("b_plus".into(), opt_num(a.bounds_plus.map(|b| b.1)));
    m.insert("a_minus".into(), opt_num(a.bounds_minus.map(|b| b.0)));
    m.insert("b_minus".into(), opt_num(a.bounds_minus.map(|b| b.1)));
    m.insert("tight_plus".into(), Value::Bool(a.tight_plus));
    m.insert("tight_minus".into(), Value::Bool(a.tight_minus));
    m.insert("parseval".into(), Value::Bool(a.parseval));
    m.insert("alpha_plus".into(), opt_num(a.alpha_plus));
    m.insert("beta_plus".into(), opt_num(a.beta_plus));
    m.insert("zeta".into(), opt_num(a.zeta));
    m.insert(
        "per_term_definite".into(),
        Value::Bool(a.per_term_definite),
    );
    Value::Object(m)
}

pub struct Report {
    pub command: &'static str,
    pub input_digest: String,
    pub tolerance: f64,
    pub variant: Option<&'static str>,
    pub verdict: bool,
    pub payload: Value,
    pub diagnostics: Vec<String>,
}

impl Report {
    pub fn render(&self) -> String {
        let mut m = Map::new();
        m.insert("command".into(), Value::String(self.command.to_string()));
        m.insert(
            "input_digest".into(),
            Value::String(self.input_digest.clone()),
        );
        m.insert(
            "tool_version".into(),
            Value::String(env!("CARGO_PKG_VERSION").to_string()),
        );
        m.insert("tolerance".into(), num(self.tolerance));
        m.insert(
            "variant".into(),
            self.variant
                .map_or(Value::Null, |v| Value::String(v.to_string())),
        );
        m.insert(
            "verdict".into(),
            Value::String(if self.verdict { "pass" } else { "fail" }.to_string()),
        );
        m.insert(
            "diagnostics".into(),
            Value::Array(
                self.diagnostics
                    .iter()
                    .map(|d| Value::String(d.clone()))
                    .collect(),
            ),
        );
        m.insert("payload".into(), self.payload.clone());
        let mut text =
            serde_json::to_string_pretty(&Value::Object(m)).expect("report serialises");
        text.push('\n');
        text
    }
}
