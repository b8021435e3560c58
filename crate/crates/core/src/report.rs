//! Machine-readable command reports.

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// One command's output: the parsed inputs echoed back, a command-specific
/// payload, and lap-budget usage. Rationals inside are canonical strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub budget: BudgetUsage,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetUsage {
    pub limit: usize,
    pub laps_used: Option<usize>,
}

/// Error payload written to standard output when a command fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub command: String,
    pub error: ErrorBody,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub class: String,
    pub message: String,
    pub exit_code: i32,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}
