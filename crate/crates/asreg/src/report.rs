//! Machine-readable reports.
//!
//! A report is a JSON object with sorted keys:
//!
//! | key            | content                                            |
//! |----------------|----------------------------------------------------|
//! | `version`      | schema version, currently 1                        |
//! | `command`      | subcommand name and its arguments                  |
//! | `input_digest` | SHA-256 of the input files, concatenated in order   |
//! | `caps`         | the caps in effect (`homcap`, `degcap`)            |
//! | `status`       | `pass`, `fail`, `inconclusive`                     |
//! | `exit_code`    | 0, 1 or 3                                          |
//! | `results`      | command-specific tree                              |
//! | `timing_ms`    | wall time; the only field that varies between runs |

use std::time::Duration;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Inconclusive => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        }
    }

    /// The worse of two outcomes; inconclusive outranks a failure only when
    /// nothing failed outright.
    pub fn and(self, other: Status) -> Status {
        match (self, other) {
            (Status::Fail, _) | (_, Status::Fail) => Status::Fail,
            (Status::Inconclusive, _) | (_, Status::Inconclusive) => Status::Inconclusive,
            _ => Status::Pass,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub args: Vec<String>,
    pub inputs: Vec<Vec<u8>>,
    pub caps: Option<(usize, i32)>,
    pub status: Status,
    pub results: Map<String, Value>,
    pub summary: Vec<String>,
}

impl Report {
    pub fn new(command: &str, args: &[String]) -> Report {
        Report {
            command: command.into(),
            args: args.to_vec(),
            inputs: Vec::new(),
            caps: None,
            status: Status::Pass,
            results: Map::new(),
            summary: Vec::new(),
        }
    }

    pub fn set(&mut self, key: &str, v: impl Into<Value>) {
        self.results.insert(key.into(), v.into());
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.summary.push(line.into());
    }

    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        for i in &self.inputs {
            h.update(i);
        }
        hex::encode(h.finalize())
    }

    pub fn to_value(&self, elapsed: Duration) -> Value {
        let mut v = json!({
            "version": SCHEMA_VERSION,
            "command": { "name": self.command, "args": self.args },
            "input_digest": self.digest(),
            "status": self.status.as_str(),
            "exit_code": self.status.exit_code(),
            "results": Value::Object(self.results.clone()),
            "timing_ms": elapsed.as_millis() as u64,
        });
        if let Some((homcap, degcap)) = self.caps {
            v["caps"] = json!({ "homcap": homcap, "degcap": degcap });
        }
        v
    }

    pub fn render(&self, elapsed: Duration) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value(elapsed)).expect("values are serializable");
        s.push('\n');
        s
    }
}

/// Drops `timing_ms` so two reports can be compared.
pub fn without_timing(mut v: Value) -> Value {
    if let Some(o) = v.as_object_mut() {
        o.remove("timing_ms");
    }
    v
}
