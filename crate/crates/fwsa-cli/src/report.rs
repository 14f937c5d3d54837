//! Report types: a deterministic `payload` (resolved config plus result)
//! wrapped with an `envelope` (version, timing) that may vary run to run.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use fwsa::group::FiniteAbelianGroup;

/// The resolved configuration embedded in every JSON report. Fields not
/// applicable to the subcommand are omitted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub format: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub category: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub src: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dst: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub at: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub apex: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pointing: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub claim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub imax: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gmax: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub guard: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_scale: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_multiplicity: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weighted: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit: Option<bool>,
}

impl RunConfig {
    pub fn new(command: &str, format: &str, output: Option<String>) -> Self {
        RunConfig {
            command: command.to_string(),
            format: format.to_string(),
            output,
            group: None,
            category: None,
            module: None,
            src: None,
            dst: None,
            at: None,
            apex: None,
            map: None,
            pointing: None,
            mode: None,
            max_size: None,
            claim: None,
            truncation: None,
            imax: None,
            gmax: None,
            guard: None,
            max_scale: None,
            max_multiplicity: None,
            weighted: None,
            fit: None,
        }
    }
}

#[derive(Serialize, Deserialize)]
pub struct Report<T> {
    pub payload: Payload<T>,
    pub envelope: Envelope,
}

#[derive(Serialize, Deserialize)]
pub struct Payload<T> {
    pub config: RunConfig,
    pub result: T,
}

#[derive(Serialize, Deserialize)]
pub struct Envelope {
    pub version: String,
    pub elapsed_ms: u128,
}

/// The canonical spelling of a group: `1` for the trivial group, otherwise
/// `Z<n1>x...xZ<nk>`.
pub fn canonical_group_spec(group: &FiniteAbelianGroup) -> String {
    if group.is_trivial() {
        "1".to_string()
    } else {
        group
            .factors()
            .iter()
            .map(|n| format!("Z{n}"))
            .collect::<Vec<_>>()
            .join("x")
    }
}

/// Serializes a finished report, pretty-printed with a trailing newline.
pub fn render_json<T: Serialize>(config: RunConfig, result: T, started: Instant) -> String {
    let report = Report {
        payload: Payload { config, result },
        envelope: Envelope {
            version: env!("CARGO_PKG_VERSION").to_string(),
            elapsed_ms: started.elapsed().as_millis(),
        },
    };
    let mut out = serde_json::to_string_pretty(&report).expect("reports serialize");
    out.push('\n');
    out
}
