//! Wire types.

use std::collections::BTreeMap;

use ppco_core::workflow::{ChangePayload, Decision};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Error,
}

/// Envelope returned by every endpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApiResponse {
    pub correlation_id: String,
    pub status: Status,
    /// Error name from the module vocabularies, e.g. `NotConcerned`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    /// JSON for filter and workflow operations, a string of DRP XML for export.
    #[serde(default)]
    pub body: serde_json::Value,
}

impl ApiResponse {
    pub fn ok(correlation_id: String, body: serde_json::Value) -> Self {
        Self {
            correlation_id,
            status: Status::Ok,
            error: None,
            message: None,
            body,
        }
    }

    pub fn error(correlation_id: String, name: &str, message: String) -> Self {
        Self {
            correlation_id,
            status: Status::Error,
            error: Some(name.to_owned()),
            message: Some(message),
            body: serde_json::Value::Null,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Operation {
    Filter,
    Export,
    Propose,
    Vote,
    ViewLog,
}

/// Generic request accepted by `POST /api`.
///
/// `params` is flat. `filter`/`export` take `artifact`; `propose` takes `artifact`,
/// `batch` and either `content_id`/`text`/`function` or `field:<name>` entries;
/// `vote` takes `proposal` and `decision`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApiRequest {
    pub operation: Operation,
    pub actor: String,
    #[serde(default)]
    pub params: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub correlation_id: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViewQuery {
    pub actor: String,
    pub artifact: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActorQuery {
    pub actor: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProposeRequest {
    pub actor: String,
    pub artifact: String,
    pub batch: String,
    pub payload: ChangePayload,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VoteRequest {
    pub proposal: String,
    pub actor: String,
    pub decision: Decision,
}
