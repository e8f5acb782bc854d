//! Machine-readable output and human rendering of the same values.

use serde_json::{Map, Value};

/// `{command, inputs, results, artifact_version}`. Keys are kept sorted,
/// so output is byte-stable for identical inputs.
#[derive(Debug, Default)]
pub struct Envelope {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub results: Map<String, Value>,
}

impl Envelope {
    pub fn new(command: &str) -> Self {
        Self { command: command.to_string(), ..Self::default() }
    }

    pub fn input(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.inputs.insert(key.to_string(), value.into());
        self
    }

    pub fn result(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.results.insert(key.to_string(), value.into());
        self
    }

    pub fn to_json(&self) -> String {
        let mut root = Map::new();
        root.insert("artifact_version".into(), env!("CARGO_PKG_VERSION").into());
        root.insert("command".into(), self.command.clone().into());
        root.insert("inputs".into(), Value::Object(self.inputs.clone()));
        root.insert("results".into(), Value::Object(self.results.clone()));
        let mut text = serde_json::to_string_pretty(&Value::Object(root)).expect("envelope serializes");
        text.push('\n');
        text
    }
}

/// Length with an SI unit chosen for readability, e.g. `59.9585 m`.
pub fn auto_length(meters: f64) -> String {
    let abs = meters.abs();
    if abs >= 1e3 {
        format!("{:.4} km", meters / 1e3)
    } else if abs >= 1e-3 || abs == 0.0 {
        format!("{meters:.4} m")
    } else {
        format!("{:.4} µm", meters * 1e6)
    }
}

/// Micrometres with 4 decimals followed by the full-precision SI value.
pub fn micrometres(meters: f64) -> String {
    format!("{:.4} µm ({meters:e} m)", meters * 1e6)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_is_sorted_and_versioned() {
        let mut env = Envelope::new("optical");
        env.input("n", 1).result("z_m", 2.5).result("a_m", 1.0);
        let text = env.to_json();
        assert!(text.find("\"a_m\"").unwrap() < text.find("\"z_m\"").unwrap());
        assert!(text.contains("\"artifact_version\": \"0.1.0\""));
    }

    #[test]
    fn auto_scaling() {
        assert_eq!(auto_length(59.958_491_6), "59.9585 m");
        assert_eq!(auto_length(2.5e4), "25.0000 km");
        assert_eq!(auto_length(1.0243e-6), "1.0243 µm");
    }
}
