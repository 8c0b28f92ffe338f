//! Every generated file of the `fixtures/` tree. Hand-written inputs
//! (the two lab configurations and the README) are not listed.

use super::provenance::{
    apr_complete_account, apr_procedure_template, apr_ramping_gap_account, digital_twin_account,
    testing_process_account, testing_process_template,
};
use super::traces::{generate_synthetic_trace, lab_trace, FixtureError};
use crate::en50549::{apr_spec, nor_spec, TestSequenceSpec};
use crate::opensvp::{annotate_sources, write_log, AnnotationSources, LogSource};
use crate::prov::{template_to_rdf, to_prov_rdf, ExecutionAccount, WorkflowTemplate};
use crate::rdf::{BaseIri, Graph};
use crate::turtle::serialize_turtle;

/// Nominal values of the lab inverters.
pub const UCD_UN: f64 = 230.0;
pub const UCD_PN: f64 = 3000.0;
pub const UCD_OPERATING_POINT: f64 = 0.62;
/// Per-unit standard deviation of the noise on lab logs.
pub const LAB_NOISE: f64 = 0.002;
pub const NOR_SEED: u64 = 0x5054_9001;
pub const APR_SEED: u64 = 0x5054_9002;
pub const DISCONNECT_AT: f64 = 700.0;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixtureFile {
    /// Relative to `fixtures/`.
    pub path: String,
    pub contents: String,
}

pub const UCD_SUITE: &str = r#"# UCD reproduction of two EN 50549-10 conformity tests.
[suite]
name = "ucd-en50549-10"
tests = ["nor", "apr"]

[params]
lab = "UCD"
sampleRate = 1
"#;

pub const NOR_TEST: &str = r#"[test]
name = "nor"
script = "en50549_10/continuous_voltage_range.py"
standard = "EN 50549-10:2022"
requires = ["Voltage", "Current", "ActivePower", "ReactivePower"]

[params]
Un = 230
Pn = 3000
lowerLimit = 0.85
upperLimit = 1.10
dwell = 600
averagingWindow = 60
"#;

pub const APR_TEST: &str = r#"[test]
name = "apr"
script = "en50549_10/active_power_reduction.py"
standard = "EN 50549-10:2022"
requires = ["Voltage", "Current", "ActivePower", "ReactivePower"]

[params]
Un = 230
Pn = 3000
step = 0.1
dwell = 120
averagingWindow = 60
"#;

/// The power reduction test once the breaker state is demanded as well.
pub const APR_BREAKER_TEST: &str = r#"[test]
name = "apr"
script = "en50549_10/active_power_reduction.py"
standard = "EN 50549-10:2022"
requires = ["Voltage", "Current", "ActivePower", "ReactivePower", "BreakerState"]

[params]
Un = 230
Pn = 3000
step = 0.1
dwell = 120
averagingWindow = 60
"#;

pub const UCD_CHANNELS: &str = r#"time = "time"

[[channel]]
column = "V"
phenomenon = "Voltage"
unit = "V"
window = 1.0

[[channel]]
column = "I"
phenomenon = "Current"
unit = "A"
window = 1.0

[[channel]]
column = "P"
phenomenon = "ActivePower"
unit = "W"
window = 1.0

[[channel]]
column = "Q"
phenomenon = "ReactivePower"
unit = "var"
window = 1.0
"#;

pub const UCD_CONTEXT: &str = r#"start = "2023-05-10T09:00:00Z"

[organization]
id = "ucd"
label = "University College Dublin"

[dataset]
id = "ucd-inverter"
title = "UCD PV inverter EN 50549-10 tests"

[configuration]
id = "ucd-pv-inverter-setup"
path = "config.toml"
"#;

pub const SYNTHETIC_CHANNELS: &str = r#"time = "time"

[[channel]]
column = "AC_VRMS"
phenomenon = "Voltage"
unit = "V"
window = 1.0

[[channel]]
column = "AC_P"
phenomenon = "ActivePower"
unit = "W"
window = 1.0
"#;

/// The UCD annotation run over the fixture texts.
pub fn ucd_sources(ucd_config: &str, breaker_gap: bool) -> Result<AnnotationSources, FixtureError> {
    let nor = write_log(&lab_trace(&nor_ucd()?, UCD_UN, UCD_PN, UCD_OPERATING_POINT, 1.0, LAB_NOISE, NOR_SEED)?);
    let apr = write_log(&lab_trace(&apr_ucd()?, UCD_UN, UCD_PN, UCD_OPERATING_POINT, 1.0, LAB_NOISE, APR_SEED)?);
    Ok(AnnotationSources {
        suites: vec![UCD_SUITE.into()],
        tests: vec![NOR_TEST.into(), if breaker_gap { APR_BREAKER_TEST } else { APR_TEST }.into()],
        logs: vec![
            LogSource { test: "nor".into(), path: "logs/nor.csv".into(), csv: nor },
            LogSource { test: "apr".into(), path: "logs/apr.csv".into(), csv: apr },
        ],
        channel_map: UCD_CHANNELS.into(),
        context: UCD_CONTEXT.into(),
        config: Some(ucd_config.into()),
    })
}

fn invalid(e: impl ToString) -> FixtureError {
    FixtureError::InvalidSpec(e.to_string())
}

fn nor_ucd() -> Result<TestSequenceSpec, FixtureError> {
    nor_spec(UCD_UN).and_then(|s| s.with_nominal_power(UCD_PN)).map_err(invalid)
}

fn apr_ucd() -> Result<TestSequenceSpec, FixtureError> {
    apr_spec(UCD_PN).and_then(|s| s.with_nominal_voltage(UCD_UN)).map_err(invalid)
}

fn turtle(graphs: &[Graph]) -> String {
    let mut g = Graph::with_standard_prefixes();
    for x in graphs {
        g.extend_from(x);
    }
    serialize_turtle(&g)
}

fn provenance(template: Option<&WorkflowTemplate>, account: &ExecutionAccount) -> Result<String, FixtureError> {
    let base = BaseIri::default();
    let mut graphs = vec![to_prov_rdf(account, template, &base).map_err(invalid)?];
    if let Some(t) = template {
        graphs.push(template_to_rdf(t, &base).map_err(invalid)?);
    }
    Ok(turtle(&graphs))
}

fn file(path: &str, contents: impl Into<String>) -> FixtureFile {
    FixtureFile { path: path.to_owned(), contents: contents.into() }
}

/// Every generated fixture file, sorted by path. `ucd_config` is the text
/// of `fixtures/ucd/config.toml`.
pub fn generated_fixtures(ucd_config: &str) -> Result<Vec<FixtureFile>, FixtureError> {
    let base = BaseIri::default();
    let annotate = |gap| -> Result<String, FixtureError> {
        let g = annotate_sources(&ucd_sources(ucd_config, gap)?, &base).map_err(invalid)?;
        Ok(serialize_turtle(&g))
    };
    let ucd = ucd_sources(ucd_config, false)?;
    let nor = nor_spec(UCD_UN).map_err(invalid)?;
    let apr = apr_spec(UCD_PN).map_err(invalid)?;

    let mut files = vec![
        file("ucd/suite.toml", UCD_SUITE),
        file("ucd/tests/nor.toml", NOR_TEST),
        file("ucd/tests/apr.toml", APR_TEST),
        file("ucd/gap/apr-breaker.toml", APR_BREAKER_TEST),
        file("ucd/channels.toml", UCD_CHANNELS),
        file("ucd/context.toml", UCD_CONTEXT),
        file("ucd/logs/nor.csv", ucd.logs[0].csv.clone()),
        file("ucd/logs/apr.csv", ucd.logs[1].csv.clone()),
        file("ucd/expected/ucd-inverter.ttl", annotate(false)?),
        file("ucd/expected/ucd-inverter-breaker-gap.ttl", annotate(true)?),
        file("synthetic/channels.toml", SYNTHETIC_CHANNELS),
        file("synthetic/nor-clean.csv", write_log(&generate_synthetic_trace(&nor, 1.0, 0.0, None, 0)?)),
        file("synthetic/apr-clean.csv", write_log(&generate_synthetic_trace(&apr, 1.0, 0.0, None, 0)?)),
        file(
            "synthetic/apr-disconnect.csv",
            write_log(&generate_synthetic_trace(&apr, 1.0, 0.0, Some(DISCONNECT_AT), 0)?),
        ),
        file("digital-twin/provenance.ttl", provenance(None, &digital_twin_account())?),
        file("digital-twin/DS1.csv", "time,irradiance,power\n0,812.5,2410.0\n900,830.1,2466.2\n1800,845.9,2511.7\n"),
        file("digital-twin/DS2.csv", "time,irradiation,tilt,azimuth\n0,798.0,30,180\n900,811.4,30,180\n1800,826.3,30,180\n"),
        file("digital-twin/DS3.csv", "time,irradiation,predicted_power\n0,798.0,2368.4\n900,811.4,2407.9\n1800,826.3,2452.0\n"),
        file(
            "provenance/testing-process.ttl",
            provenance(Some(&testing_process_template()), &testing_process_account())?,
        ),
        file("provenance/apr-complete.ttl", provenance(Some(&apr_procedure_template()), &apr_complete_account())?),
        file(
            "provenance/apr-ramping-gap.ttl",
            provenance(Some(&apr_procedure_template()), &apr_ramping_gap_account())?,
        ),
    ];
    files.sort_by(|a, b| a.path.cmp(&b.path));
    Ok(files)
}
