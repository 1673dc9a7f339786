//! Aggregated sweep rows and their CSV form.

use std::path::Path;

use crate::error::{HarnessError, Result};
use crate::stats::confidence_interval;

pub const CSV_HEADER: &str =
    "sweep_name,sweep_value,classifier,mean_error,ci_lo,ci_hi,bound_value,replicates,master_seed";

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub sweep_name: String,
    pub sweep_value: f64,
    pub classifier: String,
    pub mean_error: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub bound_value: Option<f64>,
    pub replicates: usize,
    pub master_seed: u64,
}

impl SweepRow {
    /// Aggregate per-replicate values. With `unit_range` the interval is
    /// clipped to `[0, 1]`, as befits an error rate.
    pub fn from_samples(
        sweep_name: &str,
        sweep_value: f64,
        classifier: &str,
        samples: &[f64],
        bound_value: Option<f64>,
        master_seed: u64,
        unit_range: bool,
    ) -> Result<Self> {
        let (mean, mut lo, mut hi) = confidence_interval(samples)?;
        if unit_range {
            lo = lo.max(0.0);
            hi = hi.min(1.0);
        }
        Ok(Self {
            sweep_name: sweep_name.to_string(),
            sweep_value,
            classifier: classifier.to_string(),
            mean_error: mean,
            ci_lo: lo,
            ci_hi: hi,
            bound_value,
            replicates: samples.len(),
            master_seed,
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

fn field<T: std::str::FromStr>(rec: &csv::StringRecord, i: usize, line: u64) -> Result<T> {
    let s = rec.get(i).unwrap_or("");
    s.parse()
        .map_err(|_| HarnessError::Format(format!("line {line}: bad field {} {s:?}", i + 1)))
}

impl SweepResult {
    /// Classifier ids in order of first appearance.
    pub fn classifiers(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for r in &self.rows {
            if !out.contains(&r.classifier.as_str()) {
                out.push(&r.classifier);
            }
        }
        out
    }

    pub fn series(&self, classifier: &str) -> Vec<&SweepRow> {
        self.rows.iter().filter(|r| r.classifier == classifier).collect()
    }

    pub fn row(&self, classifier: &str, sweep_value: f64) -> Option<&SweepRow> {
        self.rows
            .iter()
            .find(|r| r.classifier == classifier && r.sweep_value == sweep_value)
    }

    pub fn to_csv_string(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .has_headers(false)
            .from_writer(Vec::new());
        w.write_record(CSV_HEADER.split(',')).expect("in-memory write");
        for r in &self.rows {
            w.write_record([
                r.sweep_name.clone(),
                r.sweep_value.to_string(),
                r.classifier.clone(),
                r.mean_error.to_string(),
                r.ci_lo.to_string(),
                r.ci_hi.to_string(),
                r.bound_value.map(|b| b.to_string()).unwrap_or_default(),
                r.replicates.to_string(),
                r.master_seed.to_string(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        let header = text.lines().next().unwrap_or("");
        if header != CSV_HEADER {
            return Err(HarnessError::Format(format!("unexpected header {header:?}")));
        }
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(text.as_bytes());
        let mut rows = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let line = i as u64 + 2;
            let rec = rec.map_err(|e| HarnessError::Format(format!("line {line}: {e}")))?;
            if rec.len() != 9 {
                return Err(HarnessError::Format(format!("line {line}: expected 9 fields, got {}", rec.len())));
            }
            let bound = match rec.get(6).unwrap_or("") {
                "" => None,
                _ => Some(field(&rec, 6, line)?),
            };
            rows.push(SweepRow {
                sweep_name: rec[0].to_string(),
                sweep_value: field(&rec, 1, line)?,
                classifier: rec[2].to_string(),
                mean_error: field(&rec, 3, line)?,
                ci_lo: field(&rec, 4, line)?,
                ci_hi: field(&rec, 5, line)?,
                bound_value: bound,
                replicates: field(&rec, 7, line)?,
                master_seed: field(&rec, 8, line)?,
            });
        }
        Ok(Self { rows })
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv_string()).map_err(HarnessError::io(path))
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(HarnessError::io(path))?;
        Self::from_csv_str(&text)
    }
}
