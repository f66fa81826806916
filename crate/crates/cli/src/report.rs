use std::collections::BTreeMap;

use serde::{Serialize, Serializer};
use serde_json::Value;

/// Output of one subcommand. Serialized as JSON with `--json`; `text` is the
/// human-readable form.
pub struct Report {
    command: &'static str,
    invocation: String,
    inputs: BTreeMap<String, Value>,
    results: BTreeMap<String, Value>,
    notes: Vec<String>,
    body: Option<Value>,
    pub pass: bool,
    pub text: String,
}

impl Report {
    pub fn new(command: &'static str, invocation: String) -> Report {
        Report {
            command,
            invocation,
            inputs: BTreeMap::new(),
            results: BTreeMap::new(),
            notes: Vec::new(),
            body: None,
            pass: true,
            text: String::new(),
        }
    }

    /// A report whose JSON form is exactly the value given to [`Report::set_body`].
    pub fn bare(invocation: String) -> Report {
        Report::new("", invocation)
    }

    pub fn set_body<T: Serialize>(&mut self, v: &T) {
        self.body = Some(serde_json::to_value(v).expect("serializable"));
    }

    pub fn input<T: Serialize>(&mut self, key: &str, v: T) {
        self.inputs
            .insert(key.into(), serde_json::to_value(v).expect("serializable"));
    }

    pub fn result<T: Serialize + ?Sized>(&mut self, key: &str, v: &T) {
        self.results
            .insert(key.into(), serde_json::to_value(v).expect("serializable"));
    }

    pub fn line(&mut self, s: String) {
        self.text.push_str(&s);
        self.text.push('\n');
    }

    pub fn note(&mut self, s: String) {
        self.line(format!("note: {s}"));
        self.notes.push(s);
    }

    pub fn fail(&mut self) {
        self.pass = false;
    }
}

impl Serialize for Report {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if let Some(body) = &self.body {
            return body.serialize(s);
        }
        #[derive(Serialize)]
        struct Full<'a> {
            command: &'a str,
            invocation: &'a str,
            version: &'a str,
            inputs: &'a BTreeMap<String, Value>,
            results: &'a BTreeMap<String, Value>,
            notes: &'a [String],
            pass: bool,
        }
        Full {
            command: self.command,
            invocation: &self.invocation,
            version: env!("CARGO_PKG_VERSION"),
            inputs: &self.inputs,
            results: &self.results,
            notes: &self.notes,
            pass: self.pass,
        }
        .serialize(s)
    }
}
