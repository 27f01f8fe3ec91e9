//! Communication graphs induced by a radii assignment.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{euclidean, Instance};
use crate::SCHEMA;

/// One nonnegative, finite communication radius per sensor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AssignmentRepr", into = "AssignmentRepr")]
pub struct RadiiAssignment {
    radii: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct AssignmentRepr {
    #[serde(default = "default_schema")]
    schema: String,
    radii: Vec<f64>,
}

fn default_schema() -> String {
    SCHEMA.to_string()
}

impl TryFrom<AssignmentRepr> for RadiiAssignment {
    type Error = Error;

    fn try_from(repr: AssignmentRepr) -> Result<Self> {
        if repr.schema != SCHEMA {
            return Err(Error::InvalidParameter(format!(
                "unsupported schema {:?}",
                repr.schema
            )));
        }
        RadiiAssignment::new(repr.radii)
    }
}

impl From<RadiiAssignment> for AssignmentRepr {
    fn from(a: RadiiAssignment) -> Self {
        AssignmentRepr {
            schema: SCHEMA.to_string(),
            radii: a.radii,
        }
    }
}

impl RadiiAssignment {
    pub fn new(radii: Vec<f64>) -> Result<Self> {
        if let Some((index, &value)) = radii
            .iter()
            .enumerate()
            .find(|(_, r)| !(r.is_finite() && **r >= 0.0))
        {
            return Err(Error::InvalidRadius { index, value });
        }
        Ok(RadiiAssignment { radii })
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.radii[i]
    }

    pub fn max_radius(&self) -> f64 {
        self.radii.iter().copied().fold(0.0, f64::max)
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.radii
    }

    pub(crate) fn check_len(&self, instance: &Instance) -> Result<()> {
        if self.len() == instance.len() {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                expected: instance.len(),
                found: self.len(),
            })
        }
    }
}

/// Every sensor gets radius `radius`.
pub fn uniform_assignment(instance: &Instance, radius: f64) -> Result<RadiiAssignment> {
    if !(radius >= 0.0 && radius.is_finite()) {
        return Err(Error::InvalidRadius {
            index: 0,
            value: radius,
        });
    }
    RadiiAssignment::new(vec![radius; instance.len()])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// Undirected edge `uv` iff `min(r(u), r(v)) >= d(u, v)`.
    #[default]
    Symmetric,
    /// Directed edge `u -> v` iff `r(u) >= d(u, v)`.
    Asymmetric,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Symmetric => "symmetric",
            Model::Asymmetric => "asymmetric",
        })
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "symmetric" => Ok(Model::Symmetric),
            "asymmetric" => Ok(Model::Asymmetric),
            other => Err(Error::InvalidParameter(format!("unknown model {other:?}"))),
        }
    }
}

/// Communication graph of an assignment.
///
/// Symmetric networks store each undirected edge once as `(u, v)` with
/// `u < v`; asymmetric networks store directed arcs `(from, to)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    pub model: Model,
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Network {
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let key = match self.model {
            Model::Symmetric => (u.min(v), u.max(v)),
            Model::Asymmetric => (u, v),
        };
        self.edges.binary_search(&key).is_ok()
    }

    fn adjacency(&self, reverse: bool) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            match (self.model, reverse) {
                (Model::Symmetric, _) => {
                    adj[u].push(v);
                    adj[v].push(u);
                }
                (Model::Asymmetric, false) => adj[u].push(v),
                (Model::Asymmetric, true) => adj[v].push(u),
            }
        }
        adj
    }

    /// Connected (symmetric) or strongly connected (asymmetric).
    ///
    /// Strong connectivity is tested by full reachability from sensor 0 in
    /// the graph and in its reverse.
    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let forward = reaches_all(&self.adjacency(false));
        match self.model {
            Model::Symmetric => forward,
            Model::Asymmetric => forward && reaches_all(&self.adjacency(true)),
        }
    }
}

fn reaches_all(adj: &[Vec<usize>]) -> bool {
    let mut seen = vec![false; adj.len()];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                count += 1;
                queue.push_back(v);
            }
        }
    }
    count == adj.len()
}

pub fn build_network(instance: &Instance, r: &RadiiAssignment, model: Model) -> Result<Network> {
    r.check_len(instance)?;
    let n = instance.len();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u == v {
                continue;
            }
            let d = instance.dist(u, v);
            match model {
                Model::Symmetric if u < v && r.get(u).min(r.get(v)) >= d => edges.push((u, v)),
                Model::Asymmetric if r.get(u) >= d => edges.push((u, v)),
                _ => {}
            }
        }
    }
    Ok(Network { model, n, edges })
}

/// Whether `r` induces a connected (symmetric) or strongly connected
/// (asymmetric) network. A single sensor is always valid.
pub fn is_valid(instance: &Instance, r: &RadiiAssignment, model: Model) -> Result<bool> {
    Ok(build_network(instance, r, model)?.is_connected())
}

/// Number of sensors whose closed disk contains `p`.
pub fn interference_at(instance: &Instance, r: &RadiiAssignment, p: &[f64]) -> Result<usize> {
    r.check_len(instance)?;
    if p.len() != instance.dim() {
        return Err(Error::DimensionMismatch {
            expected: instance.dim(),
            found: p.len(),
        });
    }
    Ok(depth(instance, r.radii(), p))
}

#[inline]
pub(crate) fn depth(instance: &Instance, radii: &[f64], p: &[f64]) -> usize {
    instance
        .points()
        .zip(radii)
        .filter(|(s, &rs)| rs >= euclidean(s, p))
        .count()
}
