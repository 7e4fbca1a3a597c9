//! Experiment run records (JSON Lines) and their `(r, s)` matrix.
//!
//! One line per trained model instance:
//! `{"r": 16, "s": 256, "i": 0, "iou": 0.61, "seconds": 812.5, "epochs": 74}`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dataset::SizeGrid;
use crate::error::{Error, Result};

/// `(real size r, synthetic size s)`.
pub type Cell = (u64, u64);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentRecord {
    pub r: u64,
    pub s: u64,
    pub i: u64,
    pub iou: f64,
    pub seconds: f64,
    pub epochs: u64,
}

impl ExperimentRecord {
    pub fn cell(&self) -> Cell {
        (self.r, self.s)
    }

    pub fn validate(&self) -> std::result::Result<(), String> {
        for (name, v) in [("r", self.r), ("s", self.s)] {
            if !SizeGrid::is_grid_size(v) {
                return Err(format!("{name} = {v} is not a grid size (0, 16, 32, 64, ...)"));
            }
        }
        if self.r == 0 && self.s == 0 {
            return Err("cell (0, 0) has no training data".into());
        }
        if !(0.0..=1.0).contains(&self.iou) {
            return Err(format!("iou {} outside [0, 1]", self.iou));
        }
        if !(self.seconds >= 0.0 && self.seconds.is_finite()) {
            return Err(format!("seconds {} is not a finite non-negative number", self.seconds));
        }
        Ok(())
    }
}

pub fn parse_run_records(text: &str) -> Result<Vec<ExperimentRecord>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let rec: ExperimentRecord = serde_json::from_str(line).map_err(|e| Error::Parse {
            line: i + 1,
            message: e.to_string(),
        })?;
        rec.validate().map_err(|message| Error::Parse { line: i + 1, message })?;
        out.push(rec);
    }
    Ok(out)
}

pub fn read_run_records(path: impl AsRef<Path>) -> Result<Vec<ExperimentRecord>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_run_records(&text)
}

pub fn write_run_records(records: &[ExperimentRecord]) -> String {
    records
        .iter()
        .map(|r| serde_json::to_string(r).expect("record serializes") + "\n")
        .collect()
}

/// Records grouped by cell, in input order within each cell.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunMatrix {
    cells: BTreeMap<Cell, Vec<ExperimentRecord>>,
}

impl RunMatrix {
    pub fn cells(&self) -> impl Iterator<Item = (Cell, &[ExperimentRecord])> {
        self.cells.iter().map(|(&k, v)| (k, v.as_slice()))
    }

    pub fn get(&self, cell: Cell) -> Option<&[ExperimentRecord]> {
        self.cells.get(&cell).map(Vec::as_slice)
    }

    pub fn ious(&self, cell: Cell) -> Option<Vec<f64>> {
        self.get(cell).map(|rs| rs.iter().map(|r| r.iou).collect())
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn real_sizes(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.cells.keys().map(|c| c.0).collect();
        v.dedup();
        v
    }

    pub fn synthetic_sizes(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.cells.keys().map(|c| c.1).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Mean IoU per populated cell.
    pub fn means(&self) -> BTreeMap<Cell, f64> {
        self.cells.iter().map(|(&k, v)| (k, mean(v.iter().map(|r| r.iou)))).collect()
    }
}

pub(crate) fn mean(values: impl ExactSizeIterator<Item = f64>) -> f64 {
    let n = values.len();
    values.sum::<f64>() / n as f64
}

pub fn aggregate_matrix(records: &[ExperimentRecord]) -> Result<RunMatrix> {
    if records.is_empty() {
        return Err(Error::input("no run records"));
    }
    let mut m = RunMatrix::default();
    for r in records {
        m.cells.entry(r.cell()).or_default().push(r.clone());
    }
    Ok(m)
}
