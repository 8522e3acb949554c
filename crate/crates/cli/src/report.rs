use serde::Serialize;
use serde_json::Value;

use crate::config::{Backend, TaskSpec};
use crate::tasks::Verdict;

pub const SCHEMA_VERSION: &str = "divalg-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Complete,
    Error,
}

/// One report per task. Keys are emitted in sorted order.
#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub config: String,
    pub index: usize,
    pub task: TaskSpec,
    pub backend: Backend,
    pub status: Status,
    pub verdict: Verdict,
    pub summary: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

impl Report {
    pub fn file_name(&self) -> String {
        match &self.task.name {
            Some(n) => format!("{:02}-{}-{}.json", self.index, self.task.kind, sanitize(n)),
            None => format!("{:02}-{}.json", self.index, self.task.kind),
        }
    }

    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn render(&self) -> String {
        // Value maps are ordered by key.
        let v = serde_json::to_value(self).expect("reports serialize");
        let mut s = serde_json::to_string_pretty(&v).expect("reports serialize");
        s.push('\n');
        s
    }
}

fn sanitize(name: &str) -> String {
    name.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect()
}
