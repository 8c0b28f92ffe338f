use std::fmt::{self, Write as _};

use serde::Serialize;

use super::{
    detect_steps, window_average, EvalError, SpecKind, StepSegment, TestSequenceSpec, DEFAULT_DEADBAND,
    DISCONNECT_FRACTION,
};
use crate::ns::{annot, htd, rdf, rdfs};
use crate::opensvp::MeasurementTrace;
use crate::rdf::{format_decimal, BaseIri, Graph, Iri, Literal, Term};
use crate::report::{Finding, Report, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Outcome {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LevelVerdict {
    pub expected: f64,
    pub observed_mean: f64,
    pub within_tolerance: bool,
    pub connected: bool,
    pub segment: StepSegment,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Verdict {
    pub outcome: Outcome,
    pub kind: SpecKind,
    pub per_level: Vec<LevelVerdict>,
    pub reasons: Vec<String>,
    pub segments: Vec<StepSegment>,
    /// True when connectivity was inferred rather than read from a breaker
    /// channel.
    pub connectivity_inferred: bool,
    /// First sample time at which the unit was seen disconnected.
    pub disconnected_at: Option<f64>,
}

/// Knobs of [`evaluate`]; the defaults follow the module constants.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EvalOptions {
    /// Breaker-state channel; values at or above 0.5 mean connected.
    pub connectivity_channel: Option<String>,
    pub deadband: Option<f64>,
    /// Defaults to half the shortest dwell.
    pub min_dwell: Option<f64>,
}

fn target_phenomenon(kind: SpecKind) -> (&'static str, &'static str) {
    match kind {
        SpecKind::NormalOperatingRange => (annot::VOLTAGE, "Voltage"),
        SpecKind::ActivePowerReduction => (annot::ACTIVE_POWER, "ActivePower"),
    }
}

/// The evaluated channel in per unit of the spec's nominal value.
pub fn normalized_series(trace: &MeasurementTrace, spec: &TestSequenceSpec) -> Result<Vec<(f64, f64)>, EvalError> {
    let (iri, name) = target_phenomenon(spec.kind);
    let index = trace
        .channel_for(&Iri::new(iri).expect("vocabulary constant"))
        .ok_or_else(|| EvalError::ChannelMissing(name.to_owned()))?;
    let nominal = spec
        .target_nominal()
        .ok_or_else(|| EvalError::InvalidSpec(format!("{} needs a nominal {}", spec.kind.short_name(), name)))?;
    Ok(trace.series(index).into_iter().map(|(t, v)| (t, v / nominal)).collect())
}

struct Signal {
    samples: Vec<(f64, bool)>,
    inferred: Option<&'static str>,
}

fn connectivity(trace: &MeasurementTrace, spec: &TestSequenceSpec, opts: &EvalOptions) -> Result<Signal, EvalError> {
    if let Some(name) = &opts.connectivity_channel {
        let i = trace.channel_index(name).ok_or_else(|| EvalError::ChannelMissing(name.clone()))?;
        let samples = trace.series(i).into_iter().map(|(t, v)| (t, v >= 0.5)).collect();
        return Ok(Signal { samples, inferred: None });
    }
    let power = trace.channel_for(&Iri::new(annot::ACTIVE_POWER).expect("vocabulary constant"));
    let (index, nominal, what) = match (power, spec.nominal_power) {
        (Some(i), Some(pn)) => (i, pn, "active power above 2% of Pn"),
        _ => {
            let (iri, _) = target_phenomenon(spec.kind);
            let i = trace.channel_for(&Iri::new(iri).expect("vocabulary constant")).expect("checked by caller");
            (i, spec.target_nominal().expect("checked by caller"), "voltage above 2% of Un")
        }
    };
    let samples = trace.series(index).into_iter().map(|(t, v)| (t, v / nominal > DISCONNECT_FRACTION)).collect();
    Ok(Signal { samples, inferred: Some(what) })
}

/// Segments the target channel, matches segments to the spec's levels in
/// order and judges each level's window average against the tolerance.
/// A detected disconnection fails the test even when segmentation does not
/// match the level count.
pub fn evaluate(trace: &MeasurementTrace, spec: &TestSequenceSpec, opts: &EvalOptions) -> Result<Verdict, EvalError> {
    spec.validate()?;
    let series = normalized_series(trace, spec)?;
    let signal = connectivity(trace, spec, opts)?;
    let min_dwell = opts.min_dwell.unwrap_or(spec.min_dwell() / 2.0);
    let segments = detect_steps(&series, min_dwell, opts.deadband.unwrap_or(DEFAULT_DEADBAND))?;

    let mut reasons = Vec::new();
    if let Some(what) = signal.inferred {
        reasons.push(format!("connectivity inferred from {what}; no breaker-state channel"));
    }
    let disconnected_at = signal.samples.iter().find(|(_, c)| !c).map(|(t, _)| *t);
    if disconnected_at.is_some() {
        reasons.push("disconnection detected".to_owned());
    }

    let mut per_level = Vec::new();
    let mut outcome = if segments.len() != spec.levels.len() {
        reasons.push(format!("found {} segments for {} levels", segments.len(), spec.levels.len()));
        Outcome::Inconclusive
    } else {
        let mut ok = true;
        for (i, (level, seg)) in spec.levels.iter().zip(&segments).enumerate() {
            let observed = match window_average(&series, seg, spec.averaging_window) {
                Ok(v) => v,
                Err(e) => {
                    reasons.push(format!("level {}: {e}", i + 1));
                    per_level.clear();
                    ok = false;
                    break;
                }
            };
            let within = (observed - level.setpoint).abs() <= spec.tolerance + 1e-12;
            let end = seg.end_time();
            let connected = signal.samples.iter().filter(|(t, _)| *t >= seg.start_time && *t < end).all(|(_, c)| *c);
            if !within {
                reasons.push(format!(
                    "level {}: observed {} pu, expected {} pu",
                    i + 1,
                    format_decimal(round6(observed)),
                    format_decimal(level.setpoint)
                ));
            }
            per_level.push(LevelVerdict {
                expected: level.setpoint,
                observed_mean: observed,
                within_tolerance: within,
                connected,
                segment: *seg,
            });
        }
        if !ok {
            Outcome::Inconclusive
        } else if per_level.iter().all(|l| l.within_tolerance && l.connected) {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    };
    if disconnected_at.is_some() {
        outcome = Outcome::Fail;
    }
    Ok(Verdict {
        outcome,
        kind: spec.kind,
        per_level,
        reasons,
        segments,
        connectivity_inferred: signal.inferred.is_some(),
        disconnected_at,
    })
}

fn round6(v: f64) -> f64 {
    (v * 1e6).round() / 1e6
}

impl Verdict {
    pub fn to_report(&self) -> Report {
        let mut findings = Vec::new();
        let kind = self.kind.short_name();
        if let Some(t) = self.disconnected_at {
            findings.push(Finding::violation("disconnection", kind, format!("disconnection detected at {t} s")));
        }
        for (i, l) in self.per_level.iter().enumerate() {
            let subject = format!("{kind} level {}", i + 1);
            if !l.within_tolerance {
                findings.push(Finding::violation(
                    "level-out-of-tolerance",
                    &*subject,
                    format!("observed {} pu, expected {} pu", format_decimal(round6(l.observed_mean)), format_decimal(l.expected)),
                ));
            }
            if !l.connected {
                findings.push(Finding::violation("level-disconnected", &*subject, "unit disconnected during the level"));
            }
        }
        if self.outcome == Outcome::Inconclusive {
            for r in self.reasons.iter().filter(|r| r.contains("segments") || r.starts_with("level")) {
                findings.push(Finding::warning("segmentation-mismatch", kind, r.clone()));
            }
        }
        if self.connectivity_inferred {
            findings.push(Finding::warning("connectivity-inferred", kind, self.reasons[0].clone()));
        }
        let mut r = Report::new("verdict")
            .with_summary("outcome", self.outcome.to_string())
            .with_summary("test", kind)
            .with_summary("levels", self.per_level.len())
            .with_summary("segments", self.segments.len())
            .with_summary("connectivityInferred", self.connectivity_inferred)
            .with_findings(findings);
        r.status = match self.outcome {
            Outcome::Pass => Status::Pass,
            Outcome::Fail => Status::Fail,
            Outcome::Inconclusive => Status::Inconclusive,
        };
        r
    }
}

/// `time,observed,expected` rows of the per-unit series; `expected` is
/// empty outside matched segments.
pub fn plot_csv(series: &[(f64, f64)], verdict: &Verdict) -> String {
    let mut out = String::from("time,observed,expected\n");
    for &(t, v) in series {
        let expected = verdict
            .per_level
            .iter()
            .find(|l| t >= l.segment.start_time && t < l.segment.end_time())
            .map(|l| l.expected.to_string())
            .unwrap_or_default();
        let _ = writeln!(out, "{t},{v},{expected}");
    }
    out
}

/// Verdict node with one level result per matched level, linked to the
/// assessed execution and the evaluated specification when given.
pub fn verdict_to_rdf(
    verdict: &Verdict,
    id: &str,
    base: &BaseIri,
    execution: Option<&Iri>,
    specification: Option<&Iri>,
) -> Graph {
    let p = |s: &str| Iri::new(s).expect("vocabulary constant");
    let mut g = Graph::with_standard_prefixes();
    let node = base.mint(&["verdict", id]);
    g.add(node.clone(), &p(rdf::TYPE), Term::Iri(p(htd::TEST_VERDICT)));
    g.add(node.clone(), &p(rdfs::LABEL), Term::string(format!("{} verdict {id}", verdict.kind.short_name())));
    g.add(node.clone(), &p(htd::OUTCOME), Term::string(verdict.outcome.to_string()));
    for r in &verdict.reasons {
        g.add(node.clone(), &p(htd::REASON), Term::string(r.clone()));
    }
    if let Some(e) = execution {
        g.add(node.clone(), &p(htd::ASSESSES_EXECUTION), e.clone());
    }
    if let Some(s) = specification {
        g.add(node.clone(), &p(htd::EVALUATES_SPECIFICATION), s.clone());
    }
    for (i, l) in verdict.per_level.iter().enumerate() {
        let n = (i + 1).to_string();
        let lr = base.mint(&["verdict", id, "level", &n]);
        g.add(node.clone(), &p(htd::HAS_LEVEL_RESULT), lr.clone());
        g.add(lr.clone(), &p(rdf::TYPE), Term::Iri(p(htd::LEVEL_RESULT)));
        g.add(lr.clone(), &p(htd::LEVEL_INDEX), Literal::integer(i as i64 + 1));
        g.add(lr.clone(), &p(htd::EXPECTED_LEVEL), Literal::decimal(l.expected));
        g.add(lr.clone(), &p(htd::OBSERVED_MEAN), Literal::decimal(round6(l.observed_mean)));
        g.add(lr.clone(), &p(htd::WITHIN_TOLERANCE), Literal::boolean(l.within_tolerance));
        g.add(lr, &p(htd::CONNECTED), Literal::boolean(l.connected));
    }
    g
}
