use serde::{Deserialize, Serialize};

use super::Instance;
use crate::error::{Error, Result};

/// Undirected edge with `u < v` and its Euclidean length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub len: f64,
}

impl Edge {
    fn new(a: usize, b: usize, len: f64) -> Self {
        Edge {
            u: a.min(b),
            v: a.max(b),
            len,
        }
    }

    /// Strict total order: length first, then the index pair.
    fn precedes(&self, other: &Edge) -> bool {
        (self.len, self.u, self.v) < (other.len, other.u, other.v)
    }
}

/// Euclidean minimum spanning tree of the complete graph.
///
/// Dense Prim, `O(n^2)`. Edges are compared by `(length, u, v)`, which is a
/// strict total order, so the tree is unique and matches what Kruskal would
/// pick under the same order. The result is sorted by index pair.
pub fn emst(instance: &Instance) -> Vec<Edge> {
    let n = instance.len();
    if n < 2 {
        return Vec::new();
    }
    let mut in_tree = vec![false; n];
    let mut best: Vec<Option<Edge>> = vec![None; n];
    let mut edges = Vec::with_capacity(n - 1);
    let mut last = 0;
    in_tree[0] = true;
    for _ in 1..n {
        let mut pick: Option<usize> = None;
        for v in 0..n {
            if in_tree[v] {
                continue;
            }
            let cand = Edge::new(last, v, instance.dist(last, v));
            match best[v] {
                Some(e) if !cand.precedes(&e) => {}
                _ => best[v] = Some(cand),
            }
            let e = best[v].unwrap();
            if pick.is_none_or(|p| e.precedes(&best[p].unwrap())) {
                pick = Some(v);
            }
        }
        let v = pick.expect("a vertex outside the tree remains");
        in_tree[v] = true;
        edges.push(best[v].unwrap());
        last = v;
    }
    edges.sort_by_key(|e| (e.u, e.v));
    edges
}

/// Longest edge of the Euclidean MST: the smallest uniform radius that
/// connects the symmetric network.
pub fn r_min(instance: &Instance) -> Result<f64> {
    if instance.len() < 2 {
        return Err(Error::Singleton);
    }
    Ok(emst(instance).iter().map(|e| e.len).fold(0.0, f64::max))
}
