use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

/// One JSON document per run. `serde_json` maps are ordered, so the
/// rendering is byte-stable for identical inputs.
#[derive(Debug)]
pub struct RunReport {
    pub command: Vec<String>,
    pub inputs_digest: String,
    pub results: Value,
    /// `None` for commands that check nothing.
    pub pass: Option<bool>,
}

impl RunReport {
    pub fn new(args: &[String], theory_bytes: Option<&[u8]>, results: Value, pass: Option<bool>) -> Self {
        let mut hasher = Sha256::new();
        for a in args {
            hasher.update(a.as_bytes());
            hasher.update([0u8]);
        }
        if let Some(bytes) = theory_bytes {
            hasher.update(bytes);
        }
        RunReport {
            command: args.to_vec(),
            inputs_digest: hex::encode(hasher.finalize()),
            results,
            pass,
        }
    }

    pub fn render(&self) -> String {
        let mut obj = Map::new();
        obj.insert("command".into(), Value::from(self.command.clone()));
        obj.insert("inputs_digest".into(), Value::from(self.inputs_digest.clone()));
        obj.insert("results".into(), self.results.clone());
        obj.insert("pass".into(), self.pass.map(Value::from).unwrap_or(Value::Null));
        serde_json::to_string_pretty(&Value::Object(obj)).expect("serializable")
    }
}
