use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use thiserror::Error;

use crate::en50549::{SpecKind, TestSequenceSpec};
use crate::ns::annot;
use crate::opensvp::{Channel, MeasurementTrace};
use crate::rdf::Iri;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FixtureError {
    #[error("invalid trace request: {0}")]
    InvalidSpec(String),
}

/// Per-unit setpoints at `sample_rate` Hz over the whole sequence, with
/// seeded Gaussian noise and a collapse to 0 from `disconnect_at` on.
fn per_unit_samples(
    spec: &TestSequenceSpec,
    sample_rate: f64,
    noise: f64,
    disconnect_at: Option<f64>,
    seed: u64,
) -> Result<Vec<(f64, f64)>, FixtureError> {
    spec.validate().map_err(|e| FixtureError::InvalidSpec(e.to_string()))?;
    if !(sample_rate > 0.0 && sample_rate.is_finite()) {
        return Err(FixtureError::InvalidSpec(format!("sample rate {sample_rate} must be positive")));
    }
    let normal = Normal::new(0.0, noise).map_err(|_| FixtureError::InvalidSpec(format!("noise {noise} must be non-negative")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = (spec.total_duration() * sample_rate).round() as usize;
    let mut bounds = Vec::with_capacity(spec.levels.len());
    let mut acc = 0.0;
    for l in &spec.levels {
        acc += l.dwell;
        bounds.push((acc, l.setpoint));
    }
    Ok((0..n)
        .map(|k| {
            let t = k as f64 / sample_rate;
            let level = bounds.iter().find(|(end, _)| t < *end - 1e-9).map_or(bounds[bounds.len() - 1].1, |b| b.1);
            let z = if noise > 0.0 { normal.sample(&mut rng) } else { 0.0 };
            let v = if disconnect_at.is_some_and(|d| t >= d) { 0.0 } else { level + z };
            (t, v)
        })
        .collect())
}

fn channel(name: &str, phenomenon: &str, unit: &str, window: f64) -> Channel {
    Channel {
        name: name.to_owned(),
        phenomenon: Iri::new(phenomenon).expect("vocabulary constant"),
        unit: unit.to_owned(),
        window: Some(window),
    }
}

/// Piecewise-constant trace of the spec's target quantity in absolute
/// units: `AC_VRMS` in volts for NOR, `AC_P` in watts for APR.
pub fn generate_synthetic_trace(
    spec: &TestSequenceSpec,
    sample_rate: f64,
    noise: f64,
    disconnect_at: Option<f64>,
    seed: u64,
) -> Result<MeasurementTrace, FixtureError> {
    let samples = per_unit_samples(spec, sample_rate, noise, disconnect_at, seed)?;
    let nominal = spec.target_nominal().ok_or_else(|| FixtureError::InvalidSpec("spec has no target nominal".into()))?;
    let c = match spec.kind {
        SpecKind::NormalOperatingRange => channel("AC_VRMS", annot::VOLTAGE, "V", spec.instantaneous_window),
        SpecKind::ActivePowerReduction => channel("AC_P", annot::ACTIVE_POWER, "W", spec.instantaneous_window),
    };
    Ok(MeasurementTrace {
        channels: vec![c],
        time: samples.iter().map(|s| s.0).collect(),
        rows: samples.iter().map(|s| vec![s.1 * nominal]).collect(),
        start: None,
    })
}

/// Lab-style log with `V`, `I`, `P` and `Q` channels. NOR steps the voltage
/// while the unit feeds `operating_point` × Pn; APR steps the power at Un.
/// Noise applies to the stepped quantity.
pub fn lab_trace(
    spec: &TestSequenceSpec,
    un: f64,
    pn: f64,
    operating_point: f64,
    sample_rate: f64,
    noise: f64,
    seed: u64,
) -> Result<MeasurementTrace, FixtureError> {
    let samples = per_unit_samples(spec, sample_rate, noise, None, seed)?;
    let w = spec.instantaneous_window;
    let channels = vec![
        channel("V", annot::VOLTAGE, "V", w),
        channel("I", annot::CURRENT, "A", w),
        channel("P", annot::ACTIVE_POWER, "W", w),
        channel("Q", annot::REACTIVE_POWER, "var", w),
    ];
    let round = |x: f64, digits: i32| {
        let f = 10f64.powi(digits);
        (x * f).round() / f
    };
    let rows = samples
        .iter()
        .map(|&(_, pu)| {
            let (v, p) = match spec.kind {
                SpecKind::NormalOperatingRange => (pu * un, operating_point * pn),
                SpecKind::ActivePowerReduction => (un, pu * pn),
            };
            let (v, p) = (round(v, 3), round(p, 2));
            vec![v, round(p / v, 4), p, 0.0]
        })
        .collect();
    Ok(MeasurementTrace { channels, time: samples.iter().map(|s| s.0).collect(), rows, start: None })
}
