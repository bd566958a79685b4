//! Append-only JSON-lines run store.
//!
//! Line 1 is `{"header": {...}}` holding the experiment name, master seed and
//! full plan. Every further line is one trial record:
//!
//! ```text
//! {"trial_index":0,"seed":123,"point":{"x":5.0000000000000000e-1},"metric":9.9000000000000000e-1,"status":"ok","wall_time":1.0000000000000000e-3}
//! ```
//!
//! Reals in records are written with 17 significant digits, so a load
//! restores every field bit-for-bit.

use std::fmt::Write as _;
use std::fs::{File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{HyperParamPoint, SweepError, SweepPlan, TrialRecord, TrialSpec, TrialStatus};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StoreHeader {
    pub experiment: String,
    pub master_seed: u64,
    pub plan: SweepPlan,
}

impl StoreHeader {
    pub fn new(experiment: impl Into<String>, plan: SweepPlan) -> Self {
        Self {
            experiment: experiment.into(),
            master_seed: plan.master_seed,
            plan,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HeaderLine {
    header: StoreHeader,
}

#[derive(Deserialize)]
#[serde(rename_all = "lowercase")]
enum StatusLine {
    Ok,
    Failed(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RecordLine {
    trial_index: u64,
    seed: u64,
    point: HyperParamPoint,
    metric: Option<f64>,
    status: StatusLine,
    wall_time: f64,
}

fn real(v: f64) -> String {
    format!("{v:.16e}")
}

fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

/// Serialize one record as a single line (no trailing newline).
pub(crate) fn record_line(rec: &TrialRecord) -> String {
    let mut out = String::with_capacity(160);
    write!(
        out,
        "{{\"trial_index\":{},\"seed\":{},\"point\":{{",
        rec.spec.trial_index, rec.spec.seed
    )
    .unwrap();
    for (i, (name, v)) in rec.spec.point.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        write!(out, "{}:{}", json_str(name), real(v)).unwrap();
    }
    out.push_str("},\"metric\":");
    match rec.metric() {
        Some(m) => out.push_str(&real(m)),
        None => out.push_str("null"),
    }
    out.push_str(",\"status\":");
    match rec.status() {
        TrialStatus::Ok => out.push_str("\"ok\""),
        TrialStatus::Failed(msg) => write!(out, "{{\"failed\":{}}}", json_str(msg)).unwrap(),
    }
    write!(out, ",\"wall_time\":{}}}", real(rec.wall_time)).unwrap();
    out
}

fn parse_record(line: &str) -> Result<TrialRecord, String> {
    let r: RecordLine = serde_json::from_str(line).map_err(|e| e.to_string())?;
    let spec = TrialSpec {
        trial_index: r.trial_index,
        point: r.point,
        seed: r.seed,
    };
    match (r.status, r.metric) {
        (StatusLine::Ok, Some(m)) if m.is_finite() => Ok(TrialRecord::ok(spec, m, r.wall_time)),
        (StatusLine::Ok, _) => Err("ok record without a finite metric".into()),
        (StatusLine::Failed(msg), None) => Ok(TrialRecord::failed(spec, msg, r.wall_time)),
        (StatusLine::Failed(_), Some(_)) => Err("failed record carries a metric".into()),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StoreContents {
    /// `None` only for an empty file.
    pub header: Option<StoreHeader>,
    pub records: Vec<TrialRecord>,
}

/// Read a store; a malformed line fails with its 1-based line number.
pub fn load_records(path: &Path) -> Result<StoreContents, SweepError> {
    let text = std::fs::read_to_string(path)?;
    let malformed = |line: usize, message: String| SweepError::MalformedLine {
        path: path.display().to_string(),
        line,
        message,
    };
    let mut lines = text.lines().enumerate();
    let header = match lines.next() {
        None => None,
        Some((_, first)) => {
            let h: HeaderLine = serde_json::from_str(first).map_err(|e| malformed(1, format!("bad header: {e}")))?;
            Some(h.header)
        }
    };
    let records = lines
        .map(|(i, line)| parse_record(line).map_err(|m| malformed(i + 1, m)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(StoreContents { header, records })
}

/// Single-writer handle on a store file.
#[derive(Debug)]
pub struct RunStore {
    path: PathBuf,
    header: StoreHeader,
    writer: BufWriter<File>,
}

impl RunStore {
    /// Create (or truncate) the file and write the header line.
    pub fn create(path: &Path, header: StoreHeader) -> Result<Self, SweepError> {
        let file = File::create(path)?;
        let mut writer = BufWriter::new(file);
        let line = serde_json::to_string(&HeaderLine { header: header.clone() }).expect("header serializes");
        writeln!(writer, "{line}")?;
        writer.flush()?;
        Ok(Self {
            path: path.to_owned(),
            header,
            writer,
        })
    }

    /// Open an existing store for appending after checking its header, or
    /// create a fresh one. Returns the records already present.
    pub fn open_or_create(path: &Path, header: StoreHeader) -> Result<(Self, Vec<TrialRecord>), SweepError> {
        let existing = match std::fs::metadata(path) {
            Ok(m) if m.len() > 0 => load_records(path)?,
            _ => return Ok((Self::create(path, header)?, Vec::new())),
        };
        let found = existing.header.expect("non-empty file has a header");
        if found.master_seed != header.master_seed {
            return Err(SweepError::PlanMismatch(format!(
                "store master_seed {} differs from plan master_seed {}",
                found.master_seed, header.master_seed
            )));
        }
        if found != header {
            return Err(SweepError::PlanMismatch(format!(
                "store {} was written for a different experiment or plan",
                path.display()
            )));
        }
        let file = OpenOptions::new().append(true).open(path)?;
        Ok((
            Self {
                path: path.to_owned(),
                header,
                writer: BufWriter::new(file),
            },
            existing.records,
        ))
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn header(&self) -> &StoreHeader {
        &self.header
    }

    /// Append one record line and flush it to the file.
    pub fn append_record(&mut self, record: &TrialRecord) -> Result<(), SweepError> {
        writeln!(self.writer, "{}", record_line(record))?;
        self.writer.flush()?;
        Ok(())
    }
}
