//! OpenSVP-style suite (STE) and test (TST) files, CSV measurement logs,
//! and the annotation graph built from them.

mod annotate;
mod config;
mod log;
mod sources;

use std::collections::BTreeMap;
use std::fmt;

use chrono::{DateTime, Utc};
use serde::Serialize;
use thiserror::Error;

use crate::ns::annot;
use crate::rdf::{is_absolute_iri, Iri};

pub use annotate::{annotate, AnnotationContext, AnnotationInput, LogInput};
pub use config::{check_suite_tree, parse_channel_map, parse_context, parse_suite, parse_test, ContextDoc};
pub use log::{parse_log, write_log};
pub use sources::{annotate_sources, AnnotationSources, LogSource};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OpensvpError {
    #[error("{line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("suite {} includes itself", .0.join(" -> "))]
    CyclicSuite(Vec<String>),
    #[error("line {line}: timestamp does not increase")]
    NonMonotoneTimestamps { line: usize },
    #[error("line {line}: expected {expected} fields, found {found}")]
    ArityMismatch { line: usize, expected: usize, found: usize },
    #[error("column {0:?} is not bound in the channel map")]
    UnmappedColumn(String),
    #[error("line {line}: value {value:?} in column {column:?} is not a finite number")]
    NonNumericValue { line: usize, column: String, value: String },
    #[error("line {line}: timestamp {value:?} is neither seconds nor RFC 3339")]
    BadTimestamp { line: usize, value: String },
    #[error("{kind} {name:?} is referenced but not provided")]
    UnresolvedReference { kind: &'static str, name: String },
    #[error("{0}")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ParamValue {
    Integer(i64),
    Number(f64),
    Bool(bool),
    Text(String),
}

impl ParamValue {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            ParamValue::Integer(i) => Some(*i as f64),
            ParamValue::Number(n) => Some(*n),
            _ => None,
        }
    }
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Integer(i) => write!(f, "{i}"),
            ParamValue::Number(n) => write!(f, "{n}"),
            ParamValue::Bool(b) => write!(f, "{b}"),
            ParamValue::Text(t) => f.write_str(t),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteConfig {
    pub suite_name: String,
    pub test_refs: Vec<String>,
    pub nested_suite_refs: Vec<String>,
    pub global_params: BTreeMap<String, ParamValue>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TestConfig {
    pub test_name: String,
    pub script_ref: String,
    pub standard_ref: Option<String>,
    pub params: BTreeMap<String, ParamValue>,
    /// Phenomena the test needs recorded, as IRIs.
    pub required_phenomena: Vec<Iri>,
}

impl TestConfig {
    pub fn param_f64(&self, name: &str) -> Option<f64> {
        self.params.get(name).and_then(ParamValue::as_f64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Channel {
    pub name: String,
    pub phenomenon: Iri,
    pub unit: String,
    /// Aggregation window of each sample, in seconds.
    pub window: Option<f64>,
}

/// Column bindings for CSV logs.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMap {
    pub time_column: String,
    /// Absolute time of offset 0 when the time column holds seconds.
    pub start: Option<DateTime<Utc>>,
    pub channels: Vec<Channel>,
}

impl ChannelMap {
    pub fn channel(&self, column: &str) -> Option<&Channel> {
        self.channels.iter().find(|c| c.name == column)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasurementTrace {
    pub channels: Vec<Channel>,
    /// Seconds since the first sample.
    pub time: Vec<f64>,
    /// One row per sample, aligned with `channels`.
    pub rows: Vec<Vec<f64>>,
    pub start: Option<DateTime<Utc>>,
}

impl MeasurementTrace {
    pub fn len(&self) -> usize {
        self.time.len()
    }

    pub fn is_empty(&self) -> bool {
        self.time.is_empty()
    }

    pub fn duration(&self) -> f64 {
        self.time.last().copied().unwrap_or(0.0)
    }

    pub fn channel_index(&self, name: &str) -> Option<usize> {
        self.channels.iter().position(|c| c.name == name)
    }

    /// First channel recording `phenomenon`.
    pub fn channel_for(&self, phenomenon: &Iri) -> Option<usize> {
        self.channels.iter().position(|c| &c.phenomenon == phenomenon)
    }

    pub fn column(&self, index: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[index]).collect()
    }

    /// `(time, value)` pairs of one channel.
    pub fn series(&self, index: usize) -> Vec<(f64, f64)> {
        self.time.iter().zip(&self.rows).map(|(t, r)| (*t, r[index])).collect()
    }
}

/// `annot:` local name or absolute IRI.
pub fn phenomenon_iri(name: &str) -> Result<Iri, OpensvpError> {
    let text = if is_absolute_iri(name) {
        name.to_owned()
    } else if crate::rdf::is_plain_local_name(name) {
        format!("{}{name}", annot::NS)
    } else {
        return Err(OpensvpError::Malformed(format!("invalid phenomenon {name:?}")));
    };
    Iri::new(text).map_err(|e| OpensvpError::Malformed(e.to_string()))
}
