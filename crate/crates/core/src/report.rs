//! Versioned JSON documents written by the command-line tool.
//!
//! Every document starts with a [`Meta`] block that is enough to rerun the
//! computation bit for bit. Deserialization rejects unknown fields, so
//! parsing a document back is also a schema check.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fluctuations::FluctuationVector;
use crate::stats::{ExperimentPlan, ExperimentResult, Summary, Thresholds};

pub const SCHEMA_VERSION: u32 = 1;

pub const THRESHOLD_NOTE: &str =
    "thresholds are engineering choices for finite n; no finite-n error rates are known";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Meta {
    pub schema_version: u32,
    pub code_version: String,
    pub command: String,
    /// Echo of the validated configuration.
    pub config: serde_json::Value,
    pub master_seed: Option<u64>,
    pub thresholds: Option<Thresholds>,
    pub threshold_note: String,
    /// Seconds since the Unix epoch; omitted for reproducible output.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

impl Meta {
    pub fn new(command: &str, config: serde_json::Value) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            code_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config,
            master_seed: None,
            thresholds: None,
            threshold_note: THRESHOLD_NOTE.to_string(),
            timestamp: None,
        }
    }
}

/// Result of a fluctuation experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentDocument {
    pub meta: Meta,
    pub plan: ExperimentPlan,
    pub summary: Summary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_trial: Option<Vec<FluctuationVector>>,
}

impl ExperimentDocument {
    pub fn new(mut meta: Meta, result: ExperimentResult, include_trials: bool) -> Self {
        meta.master_seed = Some(result.plan.master_seed);
        meta.thresholds = Some(result.plan.thresholds);
        Self {
            meta,
            plan: result.plan,
            summary: result.summary,
            per_trial: include_trials.then_some(result.per_trial),
        }
    }
}

/// Any other computation: a meta block and a free-form result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document<B> {
    pub meta: Meta,
    pub result: B,
}

/// Parses `text` as a document of type `D` and checks its schema version.
pub fn parse_document<D: DeserializeOwned + HasMeta>(text: &str) -> Result<D> {
    let doc: D = serde_json::from_str(text)
        .map_err(|e| Error::InvalidData(format!("document does not match the schema: {e}")))?;
    let v = doc.meta().schema_version;
    if v != SCHEMA_VERSION {
        return Err(Error::InvalidData(format!(
            "schema version {v}, expected {SCHEMA_VERSION}"
        )));
    }
    Ok(doc)
}

pub trait HasMeta {
    fn meta(&self) -> &Meta;
}

impl HasMeta for ExperimentDocument {
    fn meta(&self) -> &Meta {
        &self.meta
    }
}

impl<B> HasMeta for Document<B> {
    fn meta(&self) -> &Meta {
        &self.meta
    }
}

/// Per-trial vectors as CSV with header `X_1,…,X_m`.
pub fn per_trial_csv(trials: &[FluctuationVector]) -> String {
    let m = trials.first().map_or(0, |t| t.x.len());
    let header: Vec<String> = (1..=m).map(|i| format!("X_{i}")).collect();
    let mut out = header.join(",");
    out.push('\n');
    for t in trials {
        let row: Vec<String> = t.x.iter().map(|v| v.to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let rows = vec![
            FluctuationVector { x: vec![0.5, -1.0], trial: 0 },
            FluctuationVector { x: vec![2.0, 0.25], trial: 1 },
        ];
        assert_eq!(per_trial_csv(&rows), "X_1,X_2\n0.5,-1\n2,0.25\n");
    }

    #[test]
    fn version_mismatch_rejected() {
        let mut doc = Document { meta: Meta::new("kernel", serde_json::json!({})), result: 1.0 };
        let ok = serde_json::to_string(&doc).unwrap();
        assert!(parse_document::<Document<f64>>(&ok).is_ok());
        doc.meta.schema_version = 99;
        let bad = serde_json::to_string(&doc).unwrap();
        assert!(parse_document::<Document<f64>>(&bad).is_err());
        assert!(parse_document::<Document<f64>>("{\"meta\":1}").is_err());
    }
}
