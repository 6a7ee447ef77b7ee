//! Report assembly: typed per-analysis results, warnings for every
//! uncertified or degenerate numeric claim, and a timing block kept
//! separate so reports stay byte-identical across runs of the same
//! config.

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Serialize)]
pub struct Report {
    pub tool_version: String,
    pub config_digest: String,
    pub branch: String,
    pub results: Vec<AnalysisResult>,
    pub warnings: Vec<Warning>,
    pub timing: Timing,
}

#[derive(Debug, Serialize)]
pub struct AnalysisResult {
    pub index: usize,
    pub op: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Error,
}

#[derive(Debug, Serialize)]
pub struct Warning {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub analysis: Option<usize>,
    pub code: String,
    pub message: String,
}

#[derive(Debug, Default, Serialize)]
pub struct Timing {
    pub total_ms: f64,
    pub per_analysis_ms: Vec<f64>,
}
