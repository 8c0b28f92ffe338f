use super::{annotate, parse_channel_map, parse_context, parse_log, parse_suite, parse_test, AnnotationContext};
use super::{AnnotationInput, LogInput, OpensvpError};
use crate::catalog::sha256_hex;
use crate::rdf::{BaseIri, Graph};

#[derive(Debug, Clone, PartialEq)]
pub struct LogSource {
    pub test: String,
    /// Path recorded in the graph.
    pub path: String,
    pub csv: String,
}

/// Raw texts of one annotation run. The first suite is the root; the rest
/// are the suites it nests.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AnnotationSources {
    pub suites: Vec<String>,
    pub tests: Vec<String>,
    pub logs: Vec<LogSource>,
    pub channel_map: String,
    pub context: String,
    /// The system configuration named by the context, when available.
    pub config: Option<String>,
}

fn at(what: &str, e: OpensvpError) -> OpensvpError {
    match e {
        OpensvpError::Syntax { line, column, message } => {
            OpensvpError::Syntax { line, column, message: format!("{what}: {message}") }
        }
        OpensvpError::Malformed(m) => OpensvpError::Malformed(format!("{what}: {m}")),
        other => other,
    }
}

/// Parses every source and annotates. Log checksums are computed from the
/// CSV text.
pub fn annotate_sources(src: &AnnotationSources, base: &BaseIri) -> Result<Graph, OpensvpError> {
    let mut suites = src.suites.iter().enumerate().map(|(i, s)| parse_suite(s).map_err(|e| at(&format!("suite {}", i + 1), e)));
    let suite = suites.next().ok_or_else(|| OpensvpError::Malformed("no suite file given".into()))??;
    let nested = suites.collect::<Result<Vec<_>, _>>()?;
    let tests = src
        .tests
        .iter()
        .enumerate()
        .map(|(i, t)| parse_test(t).map_err(|e| at(&format!("test {}", i + 1), e)))
        .collect::<Result<Vec<_>, _>>()?;
    let map = parse_channel_map(&src.channel_map).map_err(|e| at("channel map", e))?;
    let ctx = parse_context(&src.context).map_err(|e| at("context", e))?;
    let system_config = src
        .config
        .as_deref()
        .map(|c| crate::scm::parse_config(c).map_err(|e| OpensvpError::Malformed(format!("configuration: {e}"))))
        .transpose()?;
    let logs = src
        .logs
        .iter()
        .map(|l| {
            Ok(LogInput {
                test: l.test.clone(),
                path: l.path.clone(),
                sha256: sha256_hex(l.csv.as_bytes()),
                trace: parse_log(&l.csv, &map).map_err(|e| at(&l.path, e))?,
            })
        })
        .collect::<Result<Vec<_>, OpensvpError>>()?;
    let input = AnnotationInput {
        suite,
        nested,
        tests,
        logs,
        context: AnnotationContext {
            organization_id: ctx.organization_id,
            organization_label: ctx.organization_label,
            dataset_id: ctx.dataset_id,
            dataset_title: ctx.dataset_title,
            system_config_id: ctx.system_config_id,
            system_config,
            start: ctx.start,
        },
    };
    annotate(&input, base)
}
