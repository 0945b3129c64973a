use std::collections::BTreeMap;
use std::process::ExitCode;

use serde::Serialize;
use serde_json::{json, Value};

/// Uniform output of every subcommand.
#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub values: BTreeMap<String, Value>,
    pub error_estimate: f64,
    pub converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Value>,
    pub wall_time: f64,
}

impl RunRecord {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            parameters: BTreeMap::new(),
            values: BTreeMap::new(),
            error_estimate: 0.0,
            converged: true,
            trace: None,
            wall_time: 0.0,
        }
    }

    pub fn param(mut self, key: &str, v: impl Serialize) -> Self {
        self.parameters.insert(key.to_string(), json!(v));
        self
    }

    pub fn value(&mut self, key: &str, v: impl Serialize) {
        self.values.insert(key.to_string(), json!(v));
    }

    pub fn exit_code(&self) -> ExitCode {
        if self.converged {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(2)
        }
    }
}

/// `1e-01` style, as in the published excision table.
pub fn format_eps(eps: f64) -> String {
    let s = format!("{eps:.0e}");
    match s.split_once('e') {
        Some((m, e)) => {
            let (sign, digits) = match e.strip_prefix('-') {
                Some(d) => ("-", d),
                None => ("+", e),
            };
            format!("{m}e{sign}{digits:0>2}")
        }
        None => s,
    }
}
