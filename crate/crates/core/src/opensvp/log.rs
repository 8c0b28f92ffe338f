use chrono::{DateTime, Duration, Utc};

use super::{ChannelMap, MeasurementTrace, OpensvpError};

enum Stamp {
    Seconds(f64),
    Absolute(DateTime<Utc>),
}

fn stamp(text: &str, line: usize) -> Result<Stamp, OpensvpError> {
    let text = text.trim();
    if let Ok(v) = text.parse::<f64>() {
        if v.is_finite() {
            return Ok(Stamp::Seconds(v));
        }
    }
    DateTime::parse_from_rfc3339(text)
        .map(|t| Stamp::Absolute(t.with_timezone(&Utc)))
        .map_err(|_| OpensvpError::BadTimestamp { line, value: text.to_owned() })
}

fn seconds_between(a: DateTime<Utc>, b: DateTime<Utc>) -> f64 {
    let d = b - a;
    d.num_seconds() as f64 + f64::from(d.subsec_nanos()) * 1e-9
}

pub(crate) fn offset(start: DateTime<Utc>, seconds: f64) -> DateTime<Utc> {
    start + Duration::nanoseconds((seconds * 1e9).round() as i64)
}

/// Parses a CSV log. Every column other than the time column must be bound
/// in `map`; channels keep the CSV column order. Times are normalized to
/// seconds since the first row.
pub fn parse_log(csv_text: &str, map: &ChannelMap) -> Result<MeasurementTrace, OpensvpError> {
    let mut reader = csv::ReaderBuilder::new().flexible(true).trim(csv::Trim::All).from_reader(csv_text.as_bytes());
    let header = reader.headers().map_err(|e| OpensvpError::Malformed(e.to_string()))?.clone();
    let time_index = header
        .iter()
        .position(|h| h == map.time_column)
        .ok_or_else(|| OpensvpError::Malformed(format!("time column {:?} not found", map.time_column)))?;
    let mut columns = Vec::new();
    let mut channels = Vec::new();
    for (i, h) in header.iter().enumerate() {
        if i == time_index {
            continue;
        }
        let c = map.channel(h).ok_or_else(|| OpensvpError::UnmappedColumn(h.to_owned()))?;
        if channels.iter().any(|x: &super::Channel| x.name == h) {
            return Err(OpensvpError::Malformed(format!("column {h:?} appears twice")));
        }
        columns.push(i);
        channels.push(c.clone());
    }

    let mut stamps = Vec::new();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| OpensvpError::Malformed(e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() != header.len() {
            return Err(OpensvpError::ArityMismatch { line, expected: header.len(), found: record.len() });
        }
        stamps.push((line, stamp(&record[time_index], line)?));
        let row = columns
            .iter()
            .map(|&i| {
                record[i].parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| OpensvpError::NonNumericValue {
                    line,
                    column: header[i].to_owned(),
                    value: record[i].to_owned(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }

    let (time, start) = match stamps.first() {
        None => (Vec::new(), map.start),
        Some((_, Stamp::Seconds(t0))) => {
            let t0 = *t0;
            let time = stamps
                .iter()
                .map(|(line, s)| match s {
                    Stamp::Seconds(t) => Ok(t - t0),
                    Stamp::Absolute(_) => Err(OpensvpError::BadTimestamp { line: *line, value: "mixed time formats".into() }),
                })
                .collect::<Result<Vec<_>, _>>()?;
            (time, map.start.map(|s| offset(s, t0)))
        }
        Some((_, Stamp::Absolute(t0))) => {
            let t0 = *t0;
            let time = stamps
                .iter()
                .map(|(line, s)| match s {
                    Stamp::Absolute(t) => Ok(seconds_between(t0, *t)),
                    Stamp::Seconds(_) => Err(OpensvpError::BadTimestamp { line: *line, value: "mixed time formats".into() }),
                })
                .collect::<Result<Vec<_>, _>>()?;
            (time, Some(t0))
        }
    };
    for (i, w) in time.windows(2).enumerate() {
        if w[1] <= w[0] {
            return Err(OpensvpError::NonMonotoneTimestamps { line: stamps[i + 1].0 });
        }
    }
    Ok(MeasurementTrace { channels, time, rows, start })
}

/// Writes a trace as CSV with a `time` column of second offsets.
pub fn write_log(trace: &MeasurementTrace) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header = std::iter::once("time").chain(trace.channels.iter().map(|c| c.name.as_str()));
    w.write_record(header).expect("in-memory write");
    for (t, row) in trace.time.iter().zip(&trace.rows) {
        let fields = std::iter::once(t.to_string()).chain(row.iter().map(|v| v.to_string()));
        w.write_record(fields).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("CSV of UTF-8 fields")
}
