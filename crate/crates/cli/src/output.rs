//! Command outcome envelope: one status, an optional payload in both
//! text and JSON form, and optional condition diagnostics. The text and
//! JSON renderings carry the same information.

use plr_core::report::ConditionReport;
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Yes,
    No,
    Completed,
    Error,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Yes => "yes",
            Status::No => "no",
            Status::Completed => "completed",
            Status::Error => "error",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Status::Yes | Status::Completed => 0,
            Status::No => 1,
            Status::Error => 2,
        }
    }
}

#[derive(Debug)]
pub struct Outcome {
    pub status: Status,
    pub payload_text: Option<String>,
    pub payload_json: Option<Value>,
    pub diagnostics: Option<ConditionReport>,
    pub message: Option<String>,
}

impl Outcome {
    pub fn bare(status: Status) -> Self {
        Outcome {
            status,
            payload_text: None,
            payload_json: None,
            diagnostics: None,
            message: None,
        }
    }

    pub fn with_payload(status: Status, text: String, json: Value) -> Self {
        Outcome {
            status,
            payload_text: Some(text),
            payload_json: Some(json),
            diagnostics: None,
            message: None,
        }
    }

    pub fn diagnostics(mut self, report: ConditionReport) -> Self {
        self.diagnostics = Some(report);
        self
    }

    pub fn error(message: String) -> Self {
        Outcome {
            status: Status::Error,
            payload_text: None,
            payload_json: None,
            diagnostics: None,
            message: Some(message),
        }
    }

    pub fn print(&self, as_json: bool) {
        if as_json {
            let mut obj = json!({ "status": self.status.as_str() });
            if let Some(payload) = &self.payload_json {
                obj["payload"] = payload.clone();
            }
            if let Some(report) = &self.diagnostics {
                obj["diagnostics"] =
                    serde_json::to_value(report).expect("reports serialize");
            }
            if let Some(message) = &self.message {
                obj["message"] = Value::String(message.clone());
            }
            println!("{obj}");
        } else {
            println!("status: {}", self.status.as_str());
            if let Some(text) = &self.payload_text {
                print!("{text}");
                if !text.ends_with('\n') {
                    println!();
                }
            }
            if let Some(report) = &self.diagnostics {
                println!("diagnostics:");
                print!("{report}");
            }
            if let Some(message) = &self.message {
                println!("message: {message}");
            }
        }
    }
}
