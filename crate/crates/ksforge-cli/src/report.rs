use std::fmt::Write as _;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

use ksforge::search_engine::HistogramRow as HistRow;

pub const SCHEMA: &str = "ksforge-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

/// How a command ended, mapped onto the exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// The input is not a valid structure of the requested kind.
    Invalid,
    /// A budget cut the search short.
    Truncated,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Invalid => 1,
            Status::Truncated => 3,
        }
    }
}

pub struct Outcome {
    pub command: &'static str,
    pub text: String,
    pub json: Value,
    pub dot: Option<String>,
    pub status: Status,
}

impl Outcome {
    pub fn new(command: &'static str, text: String, json: impl Serialize) -> Outcome {
        Outcome {
            command,
            text,
            json: serde_json::to_value(json).expect("report types serialise"),
            dot: None,
            status: Status::Ok,
        }
    }

    pub fn status(mut self, s: Status) -> Outcome {
        self.status = s;
        self
    }

    pub fn truncated_if(self, t: bool) -> Outcome {
        if t {
            self.status(Status::Truncated)
        } else {
            self
        }
    }

    pub fn render(&self, format: Format) -> Result<String, String> {
        match format {
            Format::Text => {
                let mut t = self.text.clone();
                if !t.ends_with('\n') {
                    t.push('\n');
                }
                Ok(t)
            }
            Format::Json => {
                let v = json!({
                    "schema": SCHEMA,
                    "command": self.command,
                    "status": match self.status {
                        Status::Ok => "ok",
                        Status::Invalid => "invalid",
                        Status::Truncated => "truncated",
                    },
                    "result": self.json,
                });
                Ok(serde_json::to_string_pretty(&v).expect("json") + "\n")
            }
            Format::Dot => self.dot.clone().ok_or_else(|| format!("{} has no DOT output", self.command)),
        }
    }
}

/// Aligned three-column histogram with a total line.
pub fn histogram_table(rows: &[HistRow]) -> String {
    if rows.is_empty() {
        return "0 results\n".into();
    }
    let head = ("Compact Symbol", "Expanded Symbol", "# of Proofs");
    let w0 = rows.iter().map(|r| r.compact.len()).max().unwrap_or(0).max(head.0.len());
    let w1 = rows.iter().map(|r| r.expanded.len()).max().unwrap_or(0).max(head.1.len());
    let mut s = String::new();
    let _ = writeln!(s, "{:<w0$}  {:<w1$}  {}", head.0, head.1, head.2);
    for r in rows {
        let _ = writeln!(s, "{:<w0$}  {:<w1$}  {:>11}", r.compact, r.expanded, r.count);
    }
    let total: usize = rows.iter().map(|r| r.count).sum();
    let _ = writeln!(s, "{:<w0$}  {:<w1$}  {:>11}", "Total", "", total);
    s
}
