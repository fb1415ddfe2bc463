use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use super::HarnessError;
use crate::search::Outcome;

pub const CSV_HEADER: [&str; 8] = ["instance", "algorithm", "seed", "outcome", "plan_len", "expansions", "reexp_rate", "time_s"];

/// Outcome of one suite cell; `Error` marks an instance or configuration
/// that could not be run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellOutcome {
    Search(Outcome),
    Error,
}

impl fmt::Display for CellOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CellOutcome::Search(o) => f.write_str(o.as_str()),
            CellOutcome::Error => f.write_str("error"),
        }
    }
}

impl FromStr for CellOutcome {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "error" {
            Ok(CellOutcome::Error)
        } else {
            s.parse().map(CellOutcome::Search)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub instance: String,
    pub algorithm: String,
    pub seed: u64,
    pub outcome: CellOutcome,
    pub plan_len: Option<usize>,
    pub expansions: u64,
    /// Percentage of expansions that re-expanded a node.
    pub reexp_rate: f64,
    pub time_s: f64,
}

impl RunRecord {
    pub fn is_solved(&self) -> bool {
        self.outcome == CellOutcome::Search(Outcome::Solved)
    }

    pub fn error(instance: &str, algorithm: &str, seed: u64) -> Self {
        RunRecord {
            instance: instance.to_string(),
            algorithm: algorithm.to_string(),
            seed,
            outcome: CellOutcome::Error,
            plan_len: None,
            expansions: 0,
            reexp_rate: 0.0,
            time_s: 0.0,
        }
    }

    pub fn csv_fields(&self) -> [String; 8] {
        [
            self.instance.clone(),
            self.algorithm.clone(),
            self.seed.to_string(),
            self.outcome.to_string(),
            self.plan_len.map(|l| l.to_string()).unwrap_or_default(),
            self.expansions.to_string(),
            format!("{:.4}", self.reexp_rate),
            format!("{:.4}", self.time_s),
        ]
    }

    fn from_fields(r: &csv::StringRecord) -> Result<Self, String> {
        if r.len() != CSV_HEADER.len() {
            return Err(format!("expected {} fields, got {}", CSV_HEADER.len(), r.len()));
        }
        let num = |i: usize| -> Result<f64, String> { r[i].parse().map_err(|_| format!("bad number `{}`", &r[i])) };
        Ok(RunRecord {
            instance: r[0].to_string(),
            algorithm: r[1].to_string(),
            seed: r[2].parse().map_err(|_| format!("bad seed `{}`", &r[2]))?,
            outcome: r[3].parse()?,
            plan_len: if r[4].is_empty() {
                None
            } else {
                Some(r[4].parse().map_err(|_| format!("bad plan length `{}`", &r[4]))?)
            },
            expansions: r[5].parse().map_err(|_| format!("bad expansion count `{}`", &r[5]))?,
            reexp_rate: num(6)?,
            time_s: num(7)?,
        })
    }
}

pub fn write_records<W: Write>(out: W, records: &[RunRecord]) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record(r.csv_fields())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_records<R: Read>(input: R) -> Result<Vec<RunRecord>, HarnessError> {
    let mut rd = csv::Reader::from_reader(input);
    let header = rd.headers()?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(HarnessError::Csv(format!("unexpected header `{}`", header.iter().collect::<Vec<_>>().join(","))));
    }
    rd.records()
        .enumerate()
        .map(|(i, r)| RunRecord::from_fields(&r?).map_err(|e| HarnessError::Csv(format!("row {}: {e}", i + 2))))
        .collect()
}

/// Instance family: the part of the id before `[`, or the file stem.
pub fn domain_of(instance: &str) -> &str {
    match instance.split_once('[') {
        Some((d, _)) => d,
        None => {
            let name = instance.rsplit(['/', '\\']).next().unwrap_or(instance);
            name.split_once('.').map_or(name, |(stem, _)| stem)
        }
    }
}
