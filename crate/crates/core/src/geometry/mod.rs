//! Geometric substrate: sensor instances, distances, grid bucketing, the
//! Euclidean minimum spanning tree and nearest-neighbor queries.

mod grid;
mod mst;

pub use grid::{bucket_of, chebyshev, sub_bucket_of, GridSpec};
pub use mst::{emst, r_min, Edge};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::SCHEMA;

/// An ordered set of sensor positions in `R^d`.
///
/// Sensors are identified by their zero-based position in the list, and the
/// indices are stable across every operation in this crate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "InstanceRepr", into = "InstanceRepr")]
pub struct Instance {
    dim: usize,
    coords: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct InstanceRepr {
    #[serde(default = "default_schema")]
    schema: String,
    /// Inferred from the first point when absent.
    #[serde(default)]
    dim: Option<usize>,
    points: Vec<Vec<f64>>,
}

fn default_schema() -> String {
    SCHEMA.to_string()
}

impl TryFrom<InstanceRepr> for Instance {
    type Error = Error;

    fn try_from(repr: InstanceRepr) -> Result<Self> {
        if repr.schema != SCHEMA {
            return Err(Error::InvalidParameter(format!(
                "unsupported schema {:?}",
                repr.schema
            )));
        }
        let dim = repr
            .dim
            .or_else(|| repr.points.first().map(Vec::len))
            .ok_or(Error::EmptyInstance)?;
        Instance::new(dim, repr.points)
    }
}

impl From<Instance> for InstanceRepr {
    fn from(instance: Instance) -> Self {
        InstanceRepr {
            schema: SCHEMA.to_string(),
            dim: Some(instance.dim),
            points: instance.points().map(<[f64]>::to_vec).collect(),
        }
    }
}

impl Instance {
    pub fn new(dim: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if points.is_empty() {
            return Err(Error::EmptyInstance);
        }
        let mut coords = Vec::with_capacity(dim * points.len());
        for (index, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.len(),
                });
            }
            if let Some(&value) = p.iter().find(|x| !x.is_finite()) {
                return Err(Error::NonFiniteCoordinate { index, value });
            }
            coords.extend_from_slice(p);
        }
        Ok(Instance { dim, coords })
    }

    /// One-dimensional instance from scalar positions.
    pub fn on_line(xs: &[f64]) -> Result<Self> {
        Instance::new(1, xs.iter().map(|&x| vec![x]).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    /// Always false: an instance holds at least one sensor.
    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i < self.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: i,
                n: self.len(),
            })
        }
    }

    /// Distance between two sensors, without index validation.
    #[inline]
    pub fn dist(&self, u: usize, v: usize) -> f64 {
        euclidean(self.point(u), self.point(v))
    }

    /// Componentwise minimum and maximum of the coordinates.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = self.point(0).to_vec();
        let mut hi = lo.clone();
        for p in self.points() {
            for k in 0..self.dim {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        (lo, hi)
    }

    /// Largest pairwise distance; zero for a single sensor.
    pub fn diameter(&self) -> f64 {
        let n = self.len();
        let mut best = 0.0f64;
        for u in 0..n {
            for v in u + 1..n {
                best = best.max(self.dist(u, v));
            }
        }
        best
    }

    /// Returns a copy with `p` appended as sensor `len()`.
    pub fn with_point(&self, p: &[f64]) -> Result<Self> {
        if p.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: p.len(),
            });
        }
        let mut coords = self.coords.clone();
        coords.extend_from_slice(p);
        Ok(Instance {
            dim: self.dim,
            coords,
        })
    }
}

#[inline]
pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Euclidean distance between sensors `u` and `v`.
pub fn distance(instance: &Instance, u: usize, v: usize) -> Result<f64> {
    instance.check_index(u)?;
    instance.check_index(v)?;
    Ok(instance.dist(u, v))
}

/// Nearest sensor to `s` among `among \ {s}`; ties go to the smaller index.
pub fn nearest_neighbor(instance: &Instance, s: usize, among: &[usize]) -> Result<usize> {
    instance.check_index(s)?;
    let mut best: Option<(f64, usize)> = None;
    for &t in among {
        instance.check_index(t)?;
        if t == s {
            continue;
        }
        let d = instance.dist(s, t);
        let better = match best {
            None => true,
            Some((bd, bt)) => d < bd || (d == bd && t < bt),
        };
        if better {
            best = Some((d, t));
        }
    }
    best.map(|(_, t)| t).ok_or(Error::EmptyCandidates)
}
