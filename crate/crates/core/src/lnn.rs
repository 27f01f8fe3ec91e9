//! Layered nearest-neighbor (LNN) construction.
//!
//! Each round computes the nearest-neighbor graph of the surviving sensors.
//! Every weak component of that graph consists of two trees whose roots are
//! mutual nearest neighbors; one root per component survives to the next
//! round and every other sensor is given the distance to its nearest
//! neighbor as radius. The last survivor is given the instance diameter.
//!
//! The resulting assignment is strongly connected in the asymmetric model and
//! covers any point with at most a constant number of sensors per round. It is
//! generally *not* connected in the symmetric model: a sensor reaches its
//! nearest neighbor, but that neighbor usually has a shorter radius.
//! [`LnnResult::symmetric_closure`] raises every parent just enough to answer
//! its children, which yields a symmetric-valid assignment.

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{nearest_neighbor, Instance};
use crate::network::RadiiAssignment;

/// Nearest-neighbor graph over a set of active sensors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NngGraph {
    /// Active sensors in increasing index order.
    pub active: Vec<usize>,
    /// `out_edge[k]` is the nearest neighbor of `active[k]`.
    pub out_edge: Vec<usize>,
    /// `component[k]` is the weak component label of `active[k]`.
    pub component: Vec<usize>,
    /// Mutual-nearest root pair `(a, b)` with `a < b`, indexed by label.
    pub roots: Vec<(usize, usize)>,
}

impl NngGraph {
    pub fn component_count(&self) -> usize {
        self.roots.len()
    }

    /// Largest number of sensors that share the same nearest neighbor.
    pub fn max_in_degree(&self) -> usize {
        let mut counts = std::collections::HashMap::new();
        for &t in &self.out_edge {
            *counts.entry(t).or_insert(0usize) += 1;
        }
        counts.into_values().max().unwrap_or(0)
    }

    /// Members of each weak component, by label.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.roots.len()];
        for (k, &c) in self.component.iter().enumerate() {
            out[c].push(self.active[k]);
        }
        out
    }
}

/// Nearest-neighbor graph of `active` (ties to the smaller index).
pub fn nng(instance: &Instance, active: &[usize]) -> Result<NngGraph> {
    let mut active = active.to_vec();
    active.sort_unstable();
    active.dedup();
    if active.len() < 2 {
        return Err(Error::TooFewActive(active.len()));
    }
    let m = active.len();
    let pos = |s: usize| active.binary_search(&s).expect("neighbor is active");
    let out_edge = active
        .iter()
        .map(|&s| nearest_neighbor(instance, s, &active))
        .collect::<Result<Vec<_>>>()?;

    let mut uf = UnionFind::<usize>::new(m);
    for (k, &t) in out_edge.iter().enumerate() {
        uf.union(k, pos(t));
    }
    let mut label_of_rep = std::collections::HashMap::new();
    let mut component = Vec::with_capacity(m);
    for k in 0..m {
        let next = label_of_rep.len();
        component.push(*label_of_rep.entry(uf.find(k)).or_insert(next));
    }

    let mut roots = vec![None; label_of_rep.len()];
    for (k, &t) in out_edge.iter().enumerate() {
        let s = active[k];
        if s < t && out_edge[pos(t)] == s {
            roots[component[k]] = Some((s, t));
        }
    }
    let roots = roots
        .into_iter()
        .map(|r| r.expect("every nearest-neighbor component has a mutual pair"))
        .collect();
    Ok(NngGraph {
        active,
        out_edge,
        component,
        roots,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LnnResult {
    pub assignment: RadiiAssignment,
    /// Largest round index in which each sensor was still active.
    pub levels: Vec<u32>,
    pub rounds: u32,
    /// Nearest neighbor a sensor pointed to in its last active round;
    /// `None` only for the final survivor.
    pub parent: Vec<Option<usize>>,
}

impl LnnResult {
    /// The final survivor, which holds the highest level.
    pub fn survivor(&self) -> usize {
        self.parent
            .iter()
            .position(Option::is_none)
            .expect("exactly one sensor has no parent")
    }

    /// Radii raised so every parent also reaches its children, making each
    /// tree edge an undirected edge. Valid in the symmetric model.
    pub fn symmetric_closure(&self, instance: &Instance) -> RadiiAssignment {
        let mut radii = self.assignment.radii().to_vec();
        for (child, parent) in self.parent.iter().enumerate() {
            if let Some(p) = *parent {
                radii[p] = radii[p].max(instance.dist(child, p));
            }
        }
        RadiiAssignment::new(radii).expect("closure radii are distances")
    }
}

/// Runs the layered nearest-neighbor construction.
pub fn lnn(instance: &Instance) -> LnnResult {
    let n = instance.len();
    let mut radii = vec![0.0; n];
    let mut levels = vec![0u32; n];
    let mut parent = vec![None; n];
    let mut rounds = 0;
    let mut active: Vec<usize> = (0..n).collect();
    while active.len() > 1 {
        let graph = nng(instance, &active).expect("at least two active sensors");
        let mut survivors: Vec<usize> = graph.roots.iter().map(|&(a, _)| a).collect();
        survivors.sort_unstable();
        for (&s, &t) in graph.active.iter().zip(&graph.out_edge) {
            if survivors.binary_search(&s).is_err() {
                radii[s] = instance.dist(s, t);
                parent[s] = Some(t);
            }
        }
        rounds += 1;
        for &s in &survivors {
            levels[s] = rounds;
        }
        active = survivors;
    }
    if n > 1 {
        radii[active[0]] = instance.diameter();
    }
    LnnResult {
        assignment: RadiiAssignment::new(radii).expect("radii are distances"),
        levels,
        rounds,
        parent,
    }
}
