//! Step reconstruction and pass/fail evaluation of the continuous voltage
//! operating range (NOR) and active power reduction (APR) sequences.

mod evaluate;
mod steps;

use serde::Serialize;
use thiserror::Error;

pub use evaluate::{evaluate, normalized_series, EvalOptions, plot_csv, verdict_to_rdf, LevelVerdict, Outcome, Verdict};
pub use steps::{detect_steps, window_average, StepSegment};

/// Level tolerance used unless configured otherwise, in per unit.
pub const DEFAULT_TOLERANCE: f64 = 0.05;
/// Step-detection deadband, in per unit.
pub const DEFAULT_DEADBAND: f64 = 0.02;
/// Power below this fraction of Pn counts as disconnected.
pub const DISCONNECT_FRACTION: f64 = 0.02;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("nominal value must be positive and finite, got {0}")]
    InvalidNominal(f64),
    #[error("invalid test sequence: {0}")]
    InvalidSpec(String),
    #[error("series needs at least two samples")]
    EmptySeries,
    #[error("window of {window} s exceeds the segment duration of {duration} s")]
    WindowTooLong { window: f64, duration: f64 },
    #[error("trace has no {0} channel")]
    ChannelMissing(String),
    #[error("unknown test kind {0:?}, expected nor or apr")]
    UnknownKind(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SpecKind {
    NormalOperatingRange,
    ActivePowerReduction,
}

impl SpecKind {
    pub fn short_name(self) -> &'static str {
        match self {
            SpecKind::NormalOperatingRange => "nor",
            SpecKind::ActivePowerReduction => "apr",
        }
    }

    pub fn from_short_name(name: &str) -> Result<Self, EvalError> {
        match name.to_ascii_lowercase().as_str() {
            "nor" => Ok(SpecKind::NormalOperatingRange),
            "apr" => Ok(SpecKind::ActivePowerReduction),
            _ => Err(EvalError::UnknownKind(name.to_owned())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Level {
    /// Per unit of the nominal value.
    pub setpoint: f64,
    /// Seconds.
    pub dwell: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TestSequenceSpec {
    pub kind: SpecKind,
    /// Volts.
    pub nominal_voltage: Option<f64>,
    /// Watts.
    pub nominal_power: Option<f64>,
    pub levels: Vec<Level>,
    /// Seconds averaged at the end of each level.
    pub averaging_window: f64,
    /// Seconds each sensor sample aggregates.
    pub instantaneous_window: f64,
    /// Per unit.
    pub tolerance: f64,
}

fn check_nominal(v: f64) -> Result<f64, EvalError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(EvalError::InvalidNominal(v))
    }
}

fn levels(setpoints: &[f64], dwell: f64) -> Vec<Level> {
    setpoints.iter().map(|&setpoint| Level { setpoint, dwell }).collect()
}

/// Continuous operating range: 0.85, 1.00 and 1.10 Un for 600 s each.
pub fn nor_spec(un: f64) -> Result<TestSequenceSpec, EvalError> {
    Ok(TestSequenceSpec {
        kind: SpecKind::NormalOperatingRange,
        nominal_voltage: Some(check_nominal(un)?),
        nominal_power: None,
        levels: levels(&[0.85, 1.00, 1.10], 600.0),
        averaging_window: 60.0,
        instantaneous_window: 1.0,
        tolerance: DEFAULT_TOLERANCE,
    })
}

/// Active power reduction: 0.9 down to 0.1 Pn in 0.1 steps, then 0.3, 0.6
/// and 1.0 Pn, 120 s each.
pub fn apr_spec(pn: f64) -> Result<TestSequenceSpec, EvalError> {
    Ok(TestSequenceSpec {
        kind: SpecKind::ActivePowerReduction,
        nominal_voltage: None,
        nominal_power: Some(check_nominal(pn)?),
        levels: levels(&[0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1, 0.3, 0.6, 1.0], 120.0),
        averaging_window: 60.0,
        instantaneous_window: 1.0,
        tolerance: DEFAULT_TOLERANCE,
    })
}

impl TestSequenceSpec {
    pub fn with_nominal_voltage(mut self, un: f64) -> Result<Self, EvalError> {
        self.nominal_voltage = Some(check_nominal(un)?);
        Ok(self)
    }

    pub fn with_nominal_power(mut self, pn: f64) -> Result<Self, EvalError> {
        self.nominal_power = Some(check_nominal(pn)?);
        Ok(self)
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    /// Nominal value of the evaluated quantity.
    pub fn target_nominal(&self) -> Option<f64> {
        match self.kind {
            SpecKind::NormalOperatingRange => self.nominal_voltage,
            SpecKind::ActivePowerReduction => self.nominal_power,
        }
    }

    pub fn min_dwell(&self) -> f64 {
        self.levels.iter().map(|l| l.dwell).fold(f64::INFINITY, f64::min)
    }

    pub fn total_duration(&self) -> f64 {
        self.levels.iter().map(|l| l.dwell).sum()
    }

    pub fn validate(&self) -> Result<(), EvalError> {
        let bad = |m: String| Err(EvalError::InvalidSpec(m));
        if self.levels.is_empty() {
            return bad("no levels".into());
        }
        for (i, l) in self.levels.iter().enumerate() {
            if !(l.setpoint > 0.0 && l.setpoint <= 1.5) {
                return bad(format!("level {i}: setpoint {} outside (0, 1.5]", l.setpoint));
            }
            if !(l.dwell > 0.0 && l.dwell.is_finite()) {
                return bad(format!("level {i}: dwell must be positive"));
            }
        }
        if !(self.averaging_window > 0.0 && self.averaging_window <= self.min_dwell()) {
            return bad(format!("averaging window {} s must be positive and at most the shortest dwell", self.averaging_window));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return bad(format!("tolerance {} must be positive", self.tolerance));
        }
        if let Some(v) = self.nominal_voltage {
            check_nominal(v)?;
        }
        if let Some(v) = self.nominal_power {
            check_nominal(v)?;
        }
        Ok(())
    }
}
