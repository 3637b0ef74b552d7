use serde_json::{json, Value};

use crate::{Command, Format};

/// Output of one command: a text rendering, a JSON result, certificates and
/// the exit status.
pub struct Report {
    pub text: String,
    pub result: Value,
    pub certificates: Vec<Value>,
    pub exit: u8,
    /// Raw JSON printed as is for `export`.
    pub raw: Option<Value>,
}

impl Report {
    pub fn new(text: String, result: Value) -> Self {
        Self {
            text,
            result,
            certificates: Vec::new(),
            exit: 0,
            raw: None,
        }
    }

    pub fn render(&self, command: Command, format: Format) -> String {
        match (format, &self.raw) {
            (Format::Text, _) => self.text.clone(),
            (Format::Hrep | Format::Vrep, Some(raw)) => pretty(raw),
            _ => pretty(&json!({
                "command": command_name(command),
                "result": self.result,
                "certificates": self.certificates,
            })),
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

pub fn command_name(command: Command) -> &'static str {
    match command {
        Command::Validate => "validate",
        Command::Analyze => "analyze",
        Command::Nested => "nested",
        Command::Realize => "realize",
        Command::Skew => "skew",
        Command::Decompose => "decompose",
        Command::Verify => "verify",
        Command::Export => "export",
    }
}
