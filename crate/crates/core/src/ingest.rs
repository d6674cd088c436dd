//! HTTP access-log ingestion into per-minute demand series.
//!
//! Input is either a Common Log Format file (the public Saskatchewan /
//! NASA / ClarkNet traces) or a pre-aggregated two-column CSV
//! `minute_index,value`. CLF timestamps are normalized to UTC before
//! binning so the log's timezone offsets cannot split a minute; malformed
//! lines are counted and skipped, never fatal.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use chrono::{DateTime, Duration, TimeZone, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// What one series value measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Unit {
    Requests,
    CpuUnits,
}

/// A gap-free per-minute demand series.
#[derive(Debug, Clone, PartialEq)]
pub struct DemandSeries {
    /// UTC minute of the first value.
    pub start_minute: DateTime<Utc>,
    /// One value per minute, contiguous; missing minutes are zero.
    pub values: Vec<f64>,
    pub unit: Unit,
}

impl DemandSeries {
    /// Timestamp of the i-th value.
    pub fn minute(&self, index: usize) -> DateTime<Utc> {
        self.start_minute + Duration::minutes(index as i64)
    }
}

/// Line counters from one ingestion pass.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct IngestReport {
    pub lines_total: u64,
    pub lines_parsed: u64,
    pub lines_skipped: u64,
    pub first_ts: Option<DateTime<Utc>>,
    pub last_ts: Option<DateTime<Utc>>,
}

impl IngestReport {
    fn record(&mut self, ts: DateTime<Utc>) {
        self.lines_parsed += 1;
        if self.first_ts.is_none_or(|f| ts < f) {
            self.first_ts = Some(ts);
        }
        if self.last_ts.is_none_or(|l| ts > l) {
            self.last_ts = Some(ts);
        }
    }
}

/// Extracts the bracketed CLF timestamp `[dd/Mon/yyyy:HH:MM:SS +zzzz]`
/// from a log line and normalizes it to UTC. Returns `None` for lines
/// without a parseable timestamp field.
pub fn parse_clf_line(line: &str) -> Option<DateTime<Utc>> {
    let open = line.find('[')?;
    let rest = &line[open + 1..];
    let close = rest.find(']')?;
    let stamp = &rest[..close];
    DateTime::parse_from_str(stamp, "%d/%b/%Y:%H:%M:%S %z")
        .ok()
        .map(|dt| dt.with_timezone(&Utc))
}

fn truncate_to_minute(ts: DateTime<Utc>) -> DateTime<Utc> {
    Utc.timestamp_opt(ts.timestamp() - ts.timestamp().rem_euclid(60), 0)
        .unwrap()
}

/// Counts timestamps per UTC minute over `range` (defaults to the observed
/// first..last minute), zero-filling empty minutes.
pub fn aggregate_per_minute(
    timestamps: &[DateTime<Utc>],
    range: Option<(DateTime<Utc>, DateTime<Utc>)>,
) -> Result<DemandSeries> {
    let (start, end) = match range {
        Some((s, e)) => (truncate_to_minute(s), truncate_to_minute(e)),
        None => {
            if timestamps.is_empty() {
                return Err(Error::EmptyInput);
            }
            let min = timestamps.iter().min().unwrap();
            let max = timestamps.iter().max().unwrap();
            (truncate_to_minute(*min), truncate_to_minute(*max))
        }
    };
    if end < start {
        return Err(Error::InvalidConfig("range end precedes start".into()));
    }

    let minutes = ((end - start).num_minutes() + 1) as usize;
    let mut values = vec![0.0; minutes];
    for ts in timestamps {
        let minute = truncate_to_minute(*ts);
        if minute < start || minute > end {
            continue;
        }
        values[(minute - start).num_minutes() as usize] += 1.0;
    }
    Ok(DemandSeries {
        start_minute: start,
        values,
        unit: Unit::Requests,
    })
}

/// Maps request counts to CPU units: each CPU serves `capacity_per_cpu`
/// requests per minute, and fractional demand rounds up. Zero requests
/// cost zero CPUs. This mapping is the library's stand-in for a
/// simulator-derived demand signal.
pub fn cpu_demand(series: &DemandSeries, capacity_per_cpu: f64) -> DemandSeries {
    debug_assert!(capacity_per_cpu > 0.0);
    DemandSeries {
        start_minute: series.start_minute,
        values: series
            .values
            .iter()
            .map(|&r| (r / capacity_per_cpu).ceil())
            .collect(),
        unit: Unit::CpuUnits,
    }
}

/// Streams a CLF file into a per-minute request series plus counters.
pub fn read_clf(path: &Path) -> Result<(DemandSeries, IngestReport)> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let reader = BufReader::new(file);

    let mut report = IngestReport::default();
    let mut timestamps = Vec::new();
    for line in reader.lines() {
        let line = line.map_err(|e| Error::io(path, e))?;
        report.lines_total += 1;
        match parse_clf_line(&line) {
            Some(ts) => {
                report.record(ts);
                timestamps.push(ts);
            }
            None => report.lines_skipped += 1,
        }
    }
    let series = aggregate_per_minute(&timestamps, None)?;
    Ok((series, report))
}

/// Reads a pre-aggregated `minute_index,value` CSV. A single header line
/// is tolerated; indices must be strictly increasing and gaps are
/// zero-filled. The series is anchored at the Unix epoch plus the first
/// minute index.
pub fn read_csv_series(path: &Path) -> Result<DemandSeries> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let reader = BufReader::new(file);

    let parse_err = |line: usize, message: &str| Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.to_string(),
    };

    let mut rows: Vec<(u64, f64)> = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let mut fields = trimmed.split(',');
        let (a, b) = match (fields.next(), fields.next(), fields.next()) {
            (Some(a), Some(b), None) => (a.trim(), b.trim()),
            _ => return Err(parse_err(lineno + 1, "expected two comma-separated columns")),
        };
        match (a.parse::<u64>(), b.parse::<f64>()) {
            (Ok(index), Ok(value)) => {
                if value < 0.0 || !value.is_finite() {
                    return Err(parse_err(
                        lineno + 1,
                        "demand values must be finite and nonnegative",
                    ));
                }
                if rows.last().is_some_and(|&(prev, _)| index <= prev) {
                    return Err(parse_err(
                        lineno + 1,
                        "minute_index must be strictly increasing",
                    ));
                }
                rows.push((index, value));
            }
            _ if lineno == 0 => continue, // header
            _ => return Err(parse_err(lineno + 1, "expected numeric minute_index,value")),
        }
    }
    if rows.is_empty() {
        return Err(Error::EmptyInput);
    }

    let first = rows[0].0;
    let last = rows[rows.len() - 1].0;
    let mut values = vec![0.0; (last - first + 1) as usize];
    for (index, value) in rows {
        values[(index - first) as usize] = value;
    }
    Ok(DemandSeries {
        start_minute: Utc.timestamp_opt(first as i64 * 60, 0).unwrap(),
        values,
        unit: Unit::Requests,
    })
}

/// Serializes a series as `timestamp,value` CSV rows.
pub fn write_series_csv<W: Write>(series: &DemandSeries, mut out: W) -> std::io::Result<()> {
    writeln!(out, "timestamp,value")?;
    for (i, value) in series.values.iter().enumerate() {
        writeln!(
            out,
            "{},{}",
            series.minute(i).format("%Y-%m-%dT%H:%M:%SZ"),
            value
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clf_line_with_negative_offset() {
        let line = r#"h1 - - [01/Jun/1995:00:00:59 -0600] "GET / HTTP/1.0" 200 1839"#;
        let ts = parse_clf_line(line).unwrap();
        assert_eq!(ts, Utc.with_ymd_and_hms(1995, 6, 1, 6, 0, 59).unwrap());
    }

    #[test]
    fn clf_line_without_brackets_is_skipped() {
        assert_eq!(parse_clf_line("h1 - - \"GET / HTTP/1.0\" 200 1839"), None);
        assert_eq!(parse_clf_line(""), None);
        assert_eq!(parse_clf_line("h1 - - [not a date] \"GET /\" 200 1"), None);
    }

    #[test]
    fn clf_line_zero_offset() {
        let line = r#"[31/Dec/1995:23:59:59 +0000] "GET /x HTTP/1.0" 200 10"#;
        let ts = parse_clf_line(line).unwrap();
        assert_eq!(ts, Utc.with_ymd_and_hms(1995, 12, 31, 23, 59, 59).unwrap());
    }

    fn at(h: u32, m: u32, s: u32) -> DateTime<Utc> {
        Utc.with_ymd_and_hms(2001, 5, 5, h, m, s).unwrap()
    }

    #[test]
    fn aggregate_counts_per_minute() {
        let series =
            aggregate_per_minute(&[at(0, 0, 10), at(0, 0, 50), at(0, 1, 5)], None).unwrap();
        assert_eq!(series.values, vec![2.0, 1.0]);
        assert_eq!(series.start_minute, at(0, 0, 0));
    }

    #[test]
    fn aggregate_fills_gaps_with_zero() {
        let series = aggregate_per_minute(&[at(0, 0, 10), at(0, 2, 10)], None).unwrap();
        assert_eq!(series.values, vec![1.0, 0.0, 1.0]);
    }

    #[test]
    fn aggregate_empty_with_explicit_range() {
        let series = aggregate_per_minute(&[], Some((at(0, 0, 0), at(0, 2, 30)))).unwrap();
        assert_eq!(series.values, vec![0.0, 0.0, 0.0]);
        assert!(matches!(
            aggregate_per_minute(&[], None),
            Err(Error::EmptyInput)
        ));
    }

    #[test]
    fn aggregate_sums_match_input_count() {
        let stamps: Vec<_> = (0..200u32)
            .map(|i| at(i / 60, i % 60, (i * 7) % 60))
            .collect();
        let series = aggregate_per_minute(&stamps, None).unwrap();
        assert_eq!(series.values.iter().sum::<f64>(), 200.0);
    }

    #[test]
    fn cpu_demand_rounds_up() {
        let series = DemandSeries {
            start_minute: at(0, 0, 0),
            values: vec![120.0, 61.0, 0.0, 60.0],
            unit: Unit::Requests,
        };
        let cpus = cpu_demand(&series, 60.0);
        assert_eq!(cpus.values, vec![2.0, 2.0, 0.0, 1.0]);
        assert_eq!(cpus.unit, Unit::CpuUnits);
    }

    #[test]
    fn cpu_demand_is_monotone() {
        let mk = |v: f64| DemandSeries {
            start_minute: at(0, 0, 0),
            values: vec![v],
            unit: Unit::Requests,
        };
        for r in 0..200 {
            let lo = cpu_demand(&mk(r as f64), 60.0).values[0];
            let hi = cpu_demand(&mk(r as f64 + 1.0), 60.0).values[0];
            assert!(hi >= lo);
            let tight = cpu_demand(&mk(r as f64), 30.0).values[0];
            assert!(tight >= lo);
        }
    }

    #[test]
    fn csv_series_roundtrip_with_gaps() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("series.csv");
        std::fs::write(&path, "minute_index,value\n10,5\n11,0\n14,2.5\n").unwrap();
        let series = read_csv_series(&path).unwrap();
        assert_eq!(series.values, vec![5.0, 0.0, 0.0, 0.0, 2.5]);
        assert_eq!(series.start_minute, Utc.timestamp_opt(600, 0).unwrap());

        let mut out = Vec::new();
        write_series_csv(&series, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("timestamp,value\n"));
        assert_eq!(text.lines().count(), 6);
    }

    #[test]
    fn csv_series_rejects_disorder() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "3,1\n2,1\n").unwrap();
        assert!(matches!(read_csv_series(&path), Err(Error::Parse { .. })));
    }

    #[test]
    fn synthetic_log_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("access.log");
        let mut text = String::new();
        for i in 0..500u32 {
            text.push_str(&format!(
                "host{} - - [01/Jun/1995:{:02}:{:02}:{:02} -0600] \"GET /page{} HTTP/1.0\" 200 {}\n",
                i % 7,
                i / 3600,
                (i / 60) % 60,
                i % 60,
                i,
                100 + i
            ));
        }
        std::fs::write(&path, &text).unwrap();
        let (series, report) = read_clf(&path).unwrap();
        assert_eq!(report.lines_total, 500);
        assert_eq!(report.lines_parsed, 500);
        assert_eq!(report.lines_skipped, 0);
        assert_eq!(series.values.iter().sum::<f64>(), 500.0);
    }
}
