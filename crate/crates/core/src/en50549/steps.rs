use serde::Serialize;

use super::EvalError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StepSegment {
    /// Median of the segment's samples.
    pub level: f64,
    pub start_time: f64,
    pub duration: f64,
}

impl StepSegment {
    pub fn end_time(&self) -> f64 {
        self.start_time + self.duration
    }
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

/// Time at which sample `i` stops holding: the next sample, or one median
/// sample interval after the last.
fn hold_end(series: &[(f64, f64)], i: usize, interval: f64) -> f64 {
    series.get(i + 1).map_or(series[i].0 + interval, |s| s.0)
}

fn median_interval(series: &[(f64, f64)]) -> f64 {
    let mut d: Vec<f64> = series.windows(2).map(|w| w[1].0 - w[0].0).collect();
    d.sort_by(f64::total_cmp);
    median(&d)
}

/// Splits a time-ordered series into plateaus whose samples stay within
/// `deadband` of the running median for at least `min_dwell` seconds. Each
/// sample holds its value until the next one. Samples of shorter runs
/// belong to no segment.
pub fn detect_steps(series: &[(f64, f64)], min_dwell: f64, deadband: f64) -> Result<Vec<StepSegment>, EvalError> {
    if series.len() < 2 {
        return Err(EvalError::EmptySeries);
    }
    let interval = median_interval(series);
    let mut segments = Vec::new();
    let mut i = 0;
    while i < series.len() {
        let mut sorted = vec![series[i].1];
        let mut j = i;
        while j + 1 < series.len() {
            let v = series[j + 1].1;
            let m = median(&sorted);
            let outside = |k: usize| series.get(k).is_none_or(|s| (s.1 - m).abs() > deadband);
            // A lone outlier stays in the run; two in a row end it.
            if outside(j + 1) && outside(j + 2) {
                break;
            }
            let at = sorted.partition_point(|x| *x < v);
            sorted.insert(at, v);
            j += 1;
        }
        let start = series[i].0;
        let duration = hold_end(series, j, interval) - start;
        if duration >= min_dwell - 1e-9 {
            segments.push(StepSegment { level: median(&sorted), start_time: start, duration });
            i = j + 1;
        } else {
            i += 1;
        }
    }
    Ok(segments)
}

/// Time-weighted mean over the final `window` seconds of `segment`, each
/// sample holding its value until the next. On a uniform grid this is the
/// arithmetic mean of the samples in the window.
pub fn window_average(series: &[(f64, f64)], segment: &StepSegment, window: f64) -> Result<f64, EvalError> {
    if series.is_empty() {
        return Err(EvalError::EmptySeries);
    }
    if window > segment.duration + 1e-9 || window <= 0.0 {
        return Err(EvalError::WindowTooLong { window, duration: segment.duration });
    }
    let end = segment.end_time();
    let lower = end - window;
    let interval = if series.len() > 1 { median_interval(series) } else { window };
    let mut acc = 0.0;
    for (i, &(t, v)) in series.iter().enumerate() {
        let a = t.max(lower);
        let b = hold_end(series, i, interval).min(end);
        if b > a {
            acc += v * (b - a);
        }
        if t >= end {
            break;
        }
    }
    Ok(acc / window)
}
