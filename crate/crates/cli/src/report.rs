//! Report envelope shared by every subcommand.
//!
//! The JSON form is schema-stable: struct fields serialize in declaration
//! order, maps are ordered, and no timestamps or environment data enter the
//! payload, so identical inputs produce byte-identical reports.

use serde::Serialize;

/// Envelope wrapping each command's payload.
#[derive(Debug, Serialize)]
pub struct Envelope<T: Serialize> {
    pub command: String,
    pub inputs: InputsEcho,
    pub results: T,
    pub pass: bool,
    pub version: String,
}

/// Echo of the parameters the command ran with.
#[derive(Debug, Default, Serialize)]
pub struct InputsEcho {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub isolated: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runs: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state: Option<String>,
}

/// Table source name used in reports when no file is given.
pub const EMBEDDED_TABLE: &str = "embedded canonical";

impl<T: Serialize> Envelope<T> {
    pub fn new(command: &str, inputs: InputsEcho, results: T, pass: bool) -> Self {
        Envelope {
            command: command.to_string(),
            inputs,
            results,
            pass,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("reports always serialize");
        out.push('\n');
        out
    }

    /// Header lines shared by the text renderings.
    pub fn text_header(&self) -> String {
        let mut out = format!("mmescheck {} (v{})\n", self.command, self.version);
        let mut field = |name: &str, value: Option<String>| {
            if let Some(v) = value {
                out.push_str(&format!("  {name}: {v}\n"));
            }
        };
        field("table", self.inputs.table.clone());
        field("tolerance", self.inputs.tolerance.map(|t| format!("{t:e}")));
        field("model", self.inputs.model.clone());
        field("isolated", self.inputs.isolated.clone());
        field("runs", self.inputs.runs.map(|r| r.to_string()));
        field("seed", self.inputs.seed.map(|s| s.to_string()));
        field("state", self.inputs.state.clone());
        out
    }

    pub fn text_footer(&self) -> String {
        format!("overall: {}\n", if self.pass { "PASS" } else { "FAIL" })
    }
}

/// `PASS` / `FAIL` tag for row-level lines.
pub fn tag(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}
