use serde::{Deserialize, Serialize};

use super::Instance;
use crate::error::{Error, Result};

/// Axis-aligned grid of half-open cubes `[origin + j*side, origin + (j+1)*side)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub cell_side: f64,
    pub origin: Vec<f64>,
}

impl GridSpec {
    pub fn new(cell_side: f64, origin: Vec<f64>) -> Result<Self> {
        if !(cell_side > 0.0 && cell_side.is_finite()) {
            return Err(Error::InvalidCellSide(cell_side));
        }
        Ok(GridSpec { cell_side, origin })
    }

    /// Grid anchored at the componentwise minimum of the instance.
    pub fn anchored(instance: &Instance, cell_side: f64) -> Result<Self> {
        GridSpec::new(cell_side, instance.bounding_box().0)
    }

    pub fn dim(&self) -> usize {
        self.origin.len()
    }
}

/// Cell coordinates of `point`: `floor((p_k - origin_k) / side)` per axis.
pub fn bucket_of(point: &[f64], grid: &GridSpec) -> Vec<i64> {
    point
        .iter()
        .zip(&grid.origin)
        .map(|(p, o)| ((p - o) / grid.cell_side).floor() as i64)
        .collect()
}

/// Bucket plus the position inside it on the `d`-per-axis subdivision
/// (side `cell_side / d`), where `d` is the point dimension.
pub fn sub_bucket_of(point: &[f64], grid: &GridSpec) -> (Vec<i64>, Vec<usize>) {
    let d = point.len();
    let mut bucket = Vec::with_capacity(d);
    let mut sub = Vec::with_capacity(d);
    for (p, o) in point.iter().zip(&grid.origin) {
        let f = (p - o) / grid.cell_side;
        let j = f.floor();
        let s = ((f - j) * d as f64).floor() as usize;
        bucket.push(j as i64);
        sub.push(s.min(d - 1));
    }
    (bucket, sub)
}

/// Chebyshev distance between two cell coordinates.
pub fn chebyshev(a: &[i64], b: &[i64]) -> u64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.abs_diff(*y))
        .max()
        .unwrap_or(0)
}
