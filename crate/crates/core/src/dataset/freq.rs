use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scene::FeatureClass;

use super::manifest::DatasetManifest;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyRow {
    pub class: FeatureClass,
    /// Records with at least one pixel of the class.
    pub count: usize,
    /// `count / total`.
    pub frequency: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyTable {
    pub total: usize,
    pub rows: Vec<FrequencyRow>,
}

impl FrequencyTable {
    pub fn from_counts(counts: &[usize; crate::scene::CLASS_COUNT], total: usize) -> Result<FrequencyTable> {
        if total == 0 {
            return Err(Error::UndefinedFrequency);
        }
        let rows = FeatureClass::all()
            .map(|class| {
                let count = counts[class.index()];
                FrequencyRow {
                    class,
                    count,
                    frequency: count as f64 / total as f64,
                }
            })
            .collect();
        Ok(FrequencyTable { total, rows })
    }

    pub fn row(&self, class: FeatureClass) -> &FrequencyRow {
        &self.rows[class.index()]
    }

    /// Fixed-width text table, one row per class.
    pub fn render_text(&self) -> String {
        let mut out = format!("{:<14} {:>9} {:>10}\n", "feature", "examples", "frequency");
        for r in &self.rows {
            out.push_str(&format!(
                "{:<14} {:>9} {:>9.2}%\n",
                r.class.name(),
                r.count,
                100.0 * r.frequency
            ));
        }
        out.push_str(&format!("{:<14} {:>9}\n", "total", self.total));
        out
    }
}

pub fn compute_frequency_table(manifest: &DatasetManifest) -> Result<FrequencyTable> {
    let mut counts = [0usize; crate::scene::CLASS_COUNT];
    for r in &manifest.records {
        for c in FeatureClass::all() {
            if r.is_present(c) {
                counts[c.index()] += 1;
            }
        }
    }
    FrequencyTable::from_counts(&counts, manifest.len())
}
