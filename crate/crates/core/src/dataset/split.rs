//! Holdout splitting, subset sampling and nested size grids.
//!
//! All selections are seeded permutations from the counter-based RNG, so
//! they depend only on `(seed, record count)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{CounterRng, StreamTag};

use super::manifest::DatasetManifest;

/// Smallest nonzero grid size.
pub const GRID_BASE: u64 = 16;

/// `{0, 16, 32, 64, …}` up to a configured maximum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct SizeGrid(Vec<u64>);

impl SizeGrid {
    /// All grid sizes `≤ max`.
    pub fn up_to(max: u64) -> SizeGrid {
        let mut v = vec![0];
        let mut n = GRID_BASE;
        while n <= max {
            v.push(n);
            match n.checked_mul(2) {
                Some(next) => n = next,
                None => break,
            }
        }
        SizeGrid(v)
    }

    /// Validates an explicit list: starts at 0, then 16, each next one double.
    pub fn from_sizes(sizes: Vec<u64>) -> Result<SizeGrid> {
        if sizes.first() != Some(&0) {
            return Err(Error::param("size grid must start at 0"));
        }
        for (i, w) in sizes.windows(2).enumerate() {
            let want = if i == 0 { Some(GRID_BASE) } else { w[0].checked_mul(2) };
            if Some(w[1]) != want {
                return Err(Error::param(format!("size grid element {} is {}, expected {:?}", i + 1, w[1], want)));
            }
        }
        Ok(SizeGrid(sizes))
    }

    pub fn sizes(&self) -> &[u64] {
        &self.0
    }

    pub fn max(&self) -> u64 {
        *self.0.last().expect("grid is never empty")
    }

    /// Whether `n` belongs to the unbounded grid `{0, 16, 32, …}`.
    pub fn is_grid_size(n: u64) -> bool {
        n == 0 || (n >= GRID_BASE && n.is_power_of_two())
    }
}

impl TryFrom<Vec<u64>> for SizeGrid {
    type Error = Error;
    fn try_from(v: Vec<u64>) -> Result<SizeGrid> {
        SizeGrid::from_sizes(v)
    }
}

impl From<SizeGrid> for Vec<u64> {
    fn from(g: SizeGrid) -> Vec<u64> {
        g.0
    }
}

fn permutation(n: usize, seed: u64, tag: StreamTag) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    CounterRng::for_stream(seed, n as u64, tag).shuffle(&mut idx);
    idx
}

/// Number of holdout records: `fraction · total` rounded half up.
pub fn holdout_size(total: usize, fraction: f64) -> Result<usize> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::param(format!("holdout fraction must lie in (0, 1), got {fraction}")));
    }
    Ok((fraction * total as f64 + 0.5).floor() as usize)
}

/// Returns `(train, holdout)`. Both keep the source record order.
pub fn split_holdout(manifest: &DatasetManifest, fraction: f64, seed: u64) -> Result<(DatasetManifest, DatasetManifest)> {
    let total = manifest.len();
    let k = holdout_size(total, fraction)?;
    let mut in_holdout = vec![false; total];
    for &i in &permutation(total, seed, StreamTag::Holdout)[..k] {
        in_holdout[i] = true;
    }
    let (mut train, mut hold) = (Vec::with_capacity(total - k), Vec::with_capacity(k));
    for (r, h) in manifest.records.iter().zip(in_holdout) {
        if h {
            hold.push(r.clone());
        } else {
            train.push(r.clone());
        }
    }
    Ok((manifest.with_records(train), manifest.with_records(hold)))
}

/// Uniform sample without replacement, in sampled order.
pub fn sample_subset(manifest: &DatasetManifest, size: usize, seed: u64) -> Result<DatasetManifest> {
    if size > manifest.len() {
        return Err(Error::Sampling {
            requested: size,
            available: manifest.len(),
        });
    }
    let perm = permutation(manifest.len(), seed, StreamTag::Subset);
    Ok(manifest.with_records(perm[..size].iter().map(|&i| manifest.records[i].clone()).collect()))
}

/// One subset per grid size; each is a prefix of the next, and the largest
/// equals `sample_subset(manifest, grid.max(), seed)`.
pub fn nested_subsets(manifest: &DatasetManifest, grid: &SizeGrid, seed: u64) -> Result<Vec<DatasetManifest>> {
    let largest = sample_subset(manifest, grid.max() as usize, seed)?;
    Ok(grid
        .sizes()
        .iter()
        .map(|&n| largest.with_records(largest.records[..n as usize].to_vec()))
        .collect())
}
