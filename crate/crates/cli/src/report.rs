use std::io::Write;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    SkippedCapacity,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::SkippedCapacity => "skipped-capacity",
        }
    }
}

/// One verified case. `measured` and `expected` hold the actual numbers;
/// `millis` is only filled in when timings were requested, so that reports
/// stay byte-identical across runs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub case_id: String,
    pub statement: String,
    pub family: String,
    pub n: usize,
    pub p: u32,
    pub ring: String,
    pub status: Status,
    pub measured: Value,
    pub expected: Value,
    pub millis: Option<u64>,
    pub detail: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub const CSV_COLUMNS: [&str; 10] = [
    "case_id",
    "statement",
    "family",
    "n",
    "p",
    "ring",
    "status",
    "measured",
    "expected",
    "millis",
];

pub fn write_reports(
    reports: &[VerificationReport],
    format: Format,
    out: &mut dyn Write,
) -> anyhow::Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, reports)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(CSV_COLUMNS)?;
            for r in reports {
                w.write_record([
                    r.case_id.clone(),
                    r.statement.clone(),
                    r.family.clone(),
                    r.n.to_string(),
                    r.p.to_string(),
                    r.ring.clone(),
                    r.status.as_str().to_string(),
                    r.measured.to_string(),
                    r.expected.to_string(),
                    r.millis.map_or(String::new(), |m| m.to_string()),
                ])?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

/// Integers that fit in `i64` as JSON numbers, larger ones as strings.
pub fn big(x: &BigInt) -> Value {
    i64::try_from(x).map_or_else(|_| Value::String(x.to_string()), Value::from)
}

pub fn bigs(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(big).collect())
}
