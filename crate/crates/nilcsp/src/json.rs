//! JSON shapes for command output and error payloads.
//!
//! Keys are emitted in declaration order, so output is byte-stable.

use nilcsp_core::{ErrorKind, LawReport, ParseError, TraceSet};
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Serialize)]
pub struct TracesJson<'a> {
    pub process: &'a str,
    pub depth: usize,
    pub truncated: bool,
    pub traces: Vec<String>,
}

impl<'a> TracesJson<'a> {
    pub fn new(process: &'a str, set: &TraceSet) -> Self {
        TracesJson {
            process,
            depth: set.depth,
            truncated: set.truncated,
            traces: set.sorted().into_iter().map(ToString::to_string).collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CounterexampleJson<'a> {
    pub term: &'a str,
    pub witness: &'a str,
}

#[derive(Debug, Serialize)]
pub struct LawReportJson<'a> {
    pub law: &'static str,
    pub instances: usize,
    pub passed: bool,
    pub counterexamples: Vec<CounterexampleJson<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<&'static str>,
}

impl<'a> From<&'a LawReport> for LawReportJson<'a> {
    fn from(report: &'a LawReport) -> Self {
        LawReportJson {
            law: report.law.as_str(),
            instances: report.instances_checked,
            passed: report.passed,
            counterexamples: report
                .counterexamples
                .iter()
                .map(|c| CounterexampleJson { term: &c.term, witness: &c.witness })
                .collect(),
            note: report.note,
        }
    }
}

#[derive(Debug, Serialize)]
struct ParseErrorJson<'a> {
    error: &'static str,
    kind: &'static str,
    line: usize,
    column: usize,
    message: &'a str,
    expected: &'a [String],
}

pub fn parse_error_json(error: &ParseError) -> Value {
    let kind = match error.kind {
        ErrorKind::Syntax => "syntax",
        ErrorKind::Resolution => "resolution",
    };
    serde_json::to_value(ParseErrorJson {
        error: "parse error",
        kind,
        line: error.line,
        column: error.column,
        message: &error.message,
        expected: &error.expected,
    })
    .expect("plain data serializes")
}
