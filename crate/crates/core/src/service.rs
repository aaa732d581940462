//! Client for a planning-as-a-service solve endpoint.
//!
//! The request is a form-encoded POST with fields `domain` and `problem`.
//! The expected response body is JSON of the shape
//!
//! ```text
//! {"status": "ok", "result": {"plan": [<step>, ...], ...}}
//! {"status": "error", "result": <message or object>}
//! ```
//!
//! where each `<step>` is either a string such as `"(pick-up a)"` or an
//! object whose `name` field holds that string. Anything else is rejected.

use std::time::Duration;

use serde_json::Value as Json;
use thiserror::Error;

use crate::pddl::{parse_step, PlanStep, PlanText};

pub const DEFAULT_ENDPOINT: &str = "https://solver.planning.domains/solve";
pub const ENDPOINT_ENV: &str = "PLANIM_ENDPOINT";
pub const DEFAULT_TIMEOUT_SECONDS: u64 = 60;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveRequest {
    pub domain_text: String,
    pub problem_text: String,
    pub endpoint_url: String,
    pub timeout_seconds: u64,
}

impl SolveRequest {
    /// Request against `$PLANIM_ENDPOINT`, or the public endpoint when unset.
    pub fn new(domain_text: impl Into<String>, problem_text: impl Into<String>) -> Self {
        SolveRequest {
            domain_text: domain_text.into(),
            problem_text: problem_text.into(),
            endpoint_url: default_endpoint(),
            timeout_seconds: DEFAULT_TIMEOUT_SECONDS,
        }
    }
}

pub fn default_endpoint() -> String {
    std::env::var(ENDPOINT_ENV)
        .ok()
        .filter(|s| !s.trim().is_empty())
        .unwrap_or_else(|| DEFAULT_ENDPOINT.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Ok,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResponse {
    pub status: SolveStatus,
    /// Empty unless the status is ok.
    pub plan: Vec<PlanStep>,
    /// The service's own failure text, verbatim.
    pub message: Option<String>,
}

impl SolveResponse {
    /// The plan, or the service's failure as an error.
    pub fn into_plan(self) -> Result<PlanText, ServiceError> {
        match self.status {
            SolveStatus::Ok => Ok(PlanText { steps: self.plan }),
            SolveStatus::Error => Err(ServiceError::Service(self.message.unwrap_or_default())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ServiceError {
    #[error("timeout must be positive")]
    InvalidTimeout,
    #[error("cannot reach {endpoint}: {message}")]
    Transport { endpoint: String, message: String },
    #[error("no answer from {endpoint} within {seconds} s")]
    Timeout { endpoint: String, seconds: u64 },
    #[error("{endpoint} answered HTTP {code}")]
    Status { endpoint: String, code: u16 },
    #[error("planner reported: {0}")]
    Service(String),
    #[error("unexpected response: {0}")]
    Unparseable(String),
}

fn is_timeout(err: &(dyn std::error::Error + 'static)) -> bool {
    let mut cur = Some(err);
    while let Some(e) = cur {
        if let Some(io) = e.downcast_ref::<std::io::Error>() {
            if matches!(io.kind(), std::io::ErrorKind::TimedOut | std::io::ErrorKind::WouldBlock) {
                return true;
            }
        }
        cur = e.source();
    }
    false
}

/// Sends the request and interprets the reply.
pub fn solve_remote(request: &SolveRequest) -> Result<SolveResponse, ServiceError> {
    if request.timeout_seconds == 0 {
        return Err(ServiceError::InvalidTimeout);
    }
    let endpoint = request.endpoint_url.clone();
    let agent = ureq::AgentBuilder::new()
        .timeout(Duration::from_secs(request.timeout_seconds))
        .build();
    let reply = agent.post(&endpoint).send_form(&[
        ("domain", request.domain_text.as_str()),
        ("problem", request.problem_text.as_str()),
    ]);
    let response = match reply {
        Ok(r) => r,
        Err(ureq::Error::Status(code, _)) => return Err(ServiceError::Status { endpoint, code }),
        Err(ureq::Error::Transport(t)) => {
            if is_timeout(&t) {
                return Err(ServiceError::Timeout {
                    endpoint,
                    seconds: request.timeout_seconds,
                });
            }
            let message = match std::error::Error::source(&t) {
                Some(cause) => format!("{}: {cause}", t.kind()),
                None => t
                    .message()
                    .map_or_else(|| t.kind().to_string(), |m| format!("{}: {m}", t.kind())),
            };
            return Err(ServiceError::Transport { endpoint, message });
        }
    };
    let body = response.into_string().map_err(|e| {
        if is_timeout(&e) {
            ServiceError::Timeout {
                endpoint: endpoint.clone(),
                seconds: request.timeout_seconds,
            }
        } else {
            ServiceError::Transport {
                endpoint: endpoint.clone(),
                message: e.to_string(),
            }
        }
    })?;
    parse_response(&body)
}

fn step_text(step: &Json) -> Option<&str> {
    match step {
        Json::String(s) => Some(s),
        Json::Object(o) => o.get("name").and_then(Json::as_str),
        _ => None,
    }
}

/// Interprets a response body; see the module docs for the accepted shape.
pub fn parse_response(body: &str) -> Result<SolveResponse, ServiceError> {
    let json: Json = serde_json::from_str(body).map_err(|e| ServiceError::Unparseable(format!("not JSON ({e})")))?;
    let status = json
        .get("status")
        .and_then(Json::as_str)
        .ok_or_else(|| ServiceError::Unparseable("missing status".into()))?;
    match status {
        "ok" => {
            let plan = json
                .get("result")
                .and_then(|r| r.get("plan"))
                .and_then(Json::as_array)
                .ok_or_else(|| ServiceError::Unparseable("status ok without result.plan".into()))?;
            let steps = plan
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    let text = step_text(s)
                        .ok_or_else(|| ServiceError::Unparseable(format!("plan entry {i} has no action name")))?
                        .trim();
                    let wrapped = if text.starts_with('(') {
                        text.to_string()
                    } else {
                        format!("({text})")
                    };
                    parse_step(&wrapped).ok_or_else(|| ServiceError::Unparseable(format!("plan entry {i}: {text}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(SolveResponse {
                status: SolveStatus::Ok,
                plan: steps,
                message: None,
            })
        }
        "error" => {
            let message = match json.get("result") {
                Some(Json::String(s)) => s.clone(),
                Some(Json::Object(o)) => ["error", "output", "message"]
                    .iter()
                    .find_map(|k| o.get(*k).and_then(Json::as_str))
                    .map(str::to_string)
                    .unwrap_or_else(|| Json::Object(o.clone()).to_string()),
                Some(other) => other.to_string(),
                None => json
                    .get("message")
                    .and_then(Json::as_str)
                    .unwrap_or_default()
                    .to_string(),
            };
            Ok(SolveResponse {
                status: SolveStatus::Error,
                plan: Vec::new(),
                message: Some(message),
            })
        }
        other => Err(ServiceError::Unparseable(format!("unknown status {other:?}"))),
    }
}
