//! Bounded-radius transformation.
//!
//! Sensors are bucketed into a grid of cubes of side `R`. Inside each bucket,
//! clusters are the connected components of the uniform-radius-`R` graph
//! restricted to that bucket. Each cluster elects a constant number of
//! leaders, and each pair of neighboring clusters (some pair of their sensors
//! within `R`) elects one witness pair. Leaders and witnesses get radius `R`;
//! every other sensor keeps `min(r(s), R)`.
//!
//! For a valid input the output is valid, no radius exceeds `R`, and the
//! interference grows by at most the raised sensors near any point.

use std::collections::{BTreeMap, BTreeSet};

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{bucket_of, chebyshev, r_min, sub_bucket_of, GridSpec, Instance};
use crate::network::{is_valid, Model, RadiiAssignment};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    pub bucket: Vec<i64>,
    /// Sensor indices in increasing order.
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterDecomposition {
    pub grid: GridSpec,
    /// Clusters ordered by their smallest member.
    pub clusters: Vec<Cluster>,
    /// Cluster id of every sensor.
    pub cluster_of: Vec<usize>,
}

impl ClusterDecomposition {
    pub fn radius(&self) -> f64 {
        self.grid.cell_side
    }
}

/// One sensor from each of two neighboring clusters, `u < v`, `d(u, v) <= R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WitnessPair {
    pub u: usize,
    pub v: usize,
    pub cluster_u: usize,
    pub cluster_v: usize,
}

fn check_radius(instance: &Instance, radius: f64) -> Result<()> {
    if instance.len() >= 2 {
        let threshold = r_min(instance)?;
        if radius < threshold {
            return Err(Error::RadiusBelowThreshold {
                radius,
                r_min: threshold,
            });
        }
    }
    Ok(())
}

/// Clusters for radius `radius` on the grid anchored at the instance's
/// componentwise minimum.
pub fn decompose(instance: &Instance, radius: f64) -> Result<ClusterDecomposition> {
    check_radius(instance, radius)?;
    decompose_on_grid(instance, GridSpec::anchored(instance, radius)?)
}

/// Clusters on an explicit grid; the cell side is the radius `R`.
pub fn decompose_on_grid(instance: &Instance, grid: GridSpec) -> Result<ClusterDecomposition> {
    GridSpec::new(grid.cell_side, grid.origin.clone())?;
    if grid.dim() != instance.dim() {
        return Err(Error::DimensionMismatch {
            expected: instance.dim(),
            found: grid.dim(),
        });
    }
    let radius = grid.cell_side;
    check_radius(instance, radius)?;

    let mut buckets: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
    for (s, p) in instance.points().enumerate() {
        buckets.entry(bucket_of(p, &grid)).or_default().push(s);
    }

    let mut clusters = Vec::new();
    for (bucket, members) in &buckets {
        let mut uf = UnionFind::<usize>::new(members.len());
        for a in 0..members.len() {
            for b in a + 1..members.len() {
                if instance.dist(members[a], members[b]) <= radius {
                    uf.union(a, b);
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (a, &s) in members.iter().enumerate() {
            groups.entry(uf.find(a)).or_default().push(s);
        }
        clusters.extend(groups.into_values().map(|members| Cluster {
            bucket: bucket.clone(),
            members,
        }));
    }
    clusters.sort_by_key(|c| c.members[0]);

    let mut cluster_of = vec![0; instance.len()];
    for (id, c) in clusters.iter().enumerate() {
        for &s in &c.members {
            cluster_of[s] = id;
        }
    }
    Ok(ClusterDecomposition {
        grid,
        clusters,
        cluster_of,
    })
}

/// Leaders of a cluster.
///
/// A cluster inside a single sub-bucket (side `R / d`) is led by its smallest
/// index. Otherwise, for every pair of occupied sub-buckets joined by an edge
/// of length at most `R`, both endpoints of the lexicographically smallest
/// such edge become leaders.
pub fn leaders(
    instance: &Instance,
    decomposition: &ClusterDecomposition,
    cluster: usize,
) -> Vec<usize> {
    let members = &decomposition.clusters[cluster].members;
    let radius = decomposition.radius();
    let mut subs: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for &s in members {
        let (_, sub) = sub_bucket_of(instance.point(s), &decomposition.grid);
        subs.entry(sub).or_default().push(s);
    }
    if subs.len() <= 1 {
        return members.iter().take(1).copied().collect();
    }
    let cells: Vec<&Vec<usize>> = subs.values().collect();
    let mut chosen = BTreeSet::new();
    for (i, a) in cells.iter().enumerate() {
        for b in &cells[i + 1..] {
            if let Some((u, v)) = smallest_pair_within(instance, a, b, radius) {
                chosen.insert(u);
                chosen.insert(v);
            }
        }
    }
    chosen.into_iter().collect()
}

/// Lexicographically smallest `(min, max)` index pair across two disjoint
/// sets whose distance is at most `radius`.
fn smallest_pair_within(
    instance: &Instance,
    a: &[usize],
    b: &[usize],
    radius: f64,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for &u in a {
        for &v in b {
            let key = (u.min(v), u.max(v));
            if best.is_some_and(|k| key >= k) {
                continue;
            }
            if instance.dist(u, v) <= radius {
                best = Some(key);
            }
        }
    }
    best
}

/// One witness pair per pair of neighboring clusters, ordered by cluster pair.
///
/// Only clusters in buckets at Chebyshev distance one are compared: sensors
/// of buckets further apart are more than `R` away from each other.
pub fn witnesses(instance: &Instance, decomposition: &ClusterDecomposition) -> Vec<WitnessPair> {
    let radius = decomposition.radius();
    let mut out = Vec::new();
    for (i, c1) in decomposition.clusters.iter().enumerate() {
        for j in i + 1..decomposition.clusters.len() {
            let c2 = &decomposition.clusters[j];
            if c1.bucket == c2.bucket || chebyshev(&c1.bucket, &c2.bucket) > 1 {
                continue;
            }
            if let Some((u, v)) = smallest_pair_within(instance, &c1.members, &c2.members, radius) {
                out.push(WitnessPair {
                    u,
                    v,
                    cluster_u: decomposition.cluster_of[u],
                    cluster_v: decomposition.cluster_of[v],
                });
            }
        }
    }
    out
}

/// Decomposition, leaders and witnesses for one radius and grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundedPlan {
    pub decomposition: ClusterDecomposition,
    /// Leaders per cluster id.
    pub leaders: Vec<Vec<usize>>,
    pub witnesses: Vec<WitnessPair>,
}

impl BoundedPlan {
    pub fn new(instance: &Instance, decomposition: ClusterDecomposition) -> Self {
        let leaders = (0..decomposition.clusters.len())
            .map(|c| leaders(instance, &decomposition, c))
            .collect();
        let witnesses = witnesses(instance, &decomposition);
        BoundedPlan {
            decomposition,
            leaders,
            witnesses,
        }
    }

    pub fn radius(&self) -> f64 {
        self.decomposition.radius()
    }

    /// Sensors assigned radius `R` by rule: leaders and witnesses.
    pub fn promoted(&self) -> Vec<bool> {
        let mut flags = vec![false; self.decomposition.cluster_of.len()];
        for &s in self.leaders.iter().flatten() {
            flags[s] = true;
        }
        for w in &self.witnesses {
            flags[w.u] = true;
            flags[w.v] = true;
        }
        flags
    }

    /// Clusters sharing a witness pair with `cluster`.
    pub fn neighbors(&self, cluster: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .witnesses
            .iter()
            .filter_map(|w| {
                if w.cluster_u == cluster {
                    Some(w.cluster_v)
                } else if w.cluster_v == cluster {
                    Some(w.cluster_u)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Number of promoted sensors in each cluster.
    pub fn promoted_per_cluster(&self) -> Vec<usize> {
        let mut counts = vec![0; self.decomposition.clusters.len()];
        for (s, flag) in self.promoted().into_iter().enumerate() {
            if flag {
                counts[self.decomposition.cluster_of[s]] += 1;
            }
        }
        counts
    }
}

/// Full plan on the instance-anchored grid with cell side `radius`.
pub fn plan(instance: &Instance, radius: f64) -> Result<BoundedPlan> {
    Ok(BoundedPlan::new(instance, decompose(instance, radius)?))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Transformed {
    pub assignment: RadiiAssignment,
    pub plan: BoundedPlan,
}

impl Transformed {
    /// Sensors whose radius grew relative to `input`.
    pub fn raised(&self, input: &RadiiAssignment) -> Vec<usize> {
        (0..input.len())
            .filter(|&s| self.assignment.get(s) > input.get(s))
            .collect()
    }
}

/// Caps a valid assignment at `radius` while keeping it valid.
///
/// `radius` must be at least `r_min(instance)`; `model` selects which notion
/// of validity the input must satisfy and the output then preserves.
pub fn transform(
    instance: &Instance,
    r_in: &RadiiAssignment,
    radius: f64,
    model: Model,
) -> Result<Transformed> {
    check_radius(instance, radius)?;
    let grid = GridSpec::anchored(instance, radius)?;
    transform_on_grid(instance, r_in, grid, model)
}

/// [`transform`] on an explicit grid whose cell side is the cap `R`.
pub fn transform_on_grid(
    instance: &Instance,
    r_in: &RadiiAssignment,
    grid: GridSpec,
    model: Model,
) -> Result<Transformed> {
    r_in.check_len(instance)?;
    let decomposition = decompose_on_grid(instance, grid)?;
    if !is_valid(instance, r_in, model)? {
        return Err(Error::InvalidInputAssignment);
    }
    let plan = BoundedPlan::new(instance, decomposition);
    let radius = plan.radius();
    let radii = plan
        .promoted()
        .into_iter()
        .zip(r_in.radii())
        .map(|(promoted, &r)| if promoted { radius } else { r.min(radius) })
        .collect();
    Ok(Transformed {
        assignment: RadiiAssignment::new(radii)?,
        plan,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lnn::lnn;
    use crate::network::uniform_assignment;

    fn line(xs: &[f64]) -> Instance {
        Instance::on_line(xs).unwrap()
    }

    #[test]
    fn two_pairs_decompose() {
        let inst = line(&[0.0, 1.0, 10.0, 11.0]);
        let d = decompose(&inst, 9.0).unwrap();
        assert_eq!(d.clusters.len(), 2);
        assert_eq!(
            d.clusters[0],
            Cluster {
                bucket: vec![0],
                members: vec![0, 1]
            }
        );
        assert_eq!(
            d.clusters[1],
            Cluster {
                bucket: vec![1],
                members: vec![2, 3]
            }
        );
        let w = witnesses(&inst, &d);
        assert_eq!(
            w,
            vec![WitnessPair {
                u: 1,
                v: 2,
                cluster_u: 0,
                cluster_v: 1
            }]
        );
        assert_eq!(inst.dist(1, 2), 9.0);
    }

    #[test]
    fn diagonal_points_split_a_bucket() {
        let inst =
            Instance::new(2, vec![vec![0.05, 0.05], vec![0.95, 0.95], vec![0.05, 1.0]]).unwrap();
        // sensor 2 sits on the lower edge of bucket (0, 1) and bridges 0 and 1
        let d = decompose_on_grid(&inst, GridSpec::new(1.0, vec![0.0, 0.0]).unwrap()).unwrap();
        let in_origin: Vec<_> = d
            .clusters
            .iter()
            .filter(|c| c.bucket == vec![0, 0])
            .collect();
        assert_eq!(in_origin.len(), 2);
    }

    #[test]
    fn below_threshold_is_rejected() {
        let inst = line(&[0.0, 1.0, 10.0, 11.0]);
        let err = decompose(&inst, 8.5).unwrap_err();
        assert!(err
            .to_string()
            .starts_with("radius below connectivity threshold"));
        let r = uniform_assignment(&inst, 9.0).unwrap();
        assert!(matches!(
            transform(&inst, &r, 1.0, Model::Symmetric),
            Err(Error::RadiusBelowThreshold { .. })
        ));
    }

    #[test]
    fn leader_rules() {
        let grid = GridSpec::new(1.0, vec![0.0, 0.0]).unwrap();
        let pair = Instance::new(2, vec![vec![0.1, 0.1], vec![0.6, 0.6]]).unwrap();
        let d = decompose_on_grid(&pair, grid.clone()).unwrap();
        assert_eq!(d.clusters.len(), 1);
        assert_eq!(leaders(&pair, &d, 0), vec![0, 1]);

        let five = Instance::new(
            2,
            vec![
                vec![0.3, 0.2],
                vec![0.1, 0.1],
                vec![0.2, 0.4],
                vec![0.45, 0.05],
                vec![0.0, 0.3],
            ],
        )
        .unwrap();
        let d = decompose_on_grid(&five, grid).unwrap();
        assert_eq!(leaders(&five, &d, 0), vec![0]);
    }

    #[test]
    fn transform_two_pairs_hand_trace() {
        let inst = line(&[0.0, 1.0, 10.0, 11.0]);
        let r_in = lnn(&inst).assignment;
        assert_eq!(r_in.radii(), &[11.0, 1.0, 10.0, 1.0]);
        let out = transform(&inst, &r_in, 9.0, Model::Symmetric).unwrap();
        assert_eq!(out.assignment.radii(), &[9.0, 9.0, 9.0, 1.0]);
        assert_eq!(out.plan.leaders, vec![vec![0], vec![2]]);
        assert!(is_valid(&inst, &out.assignment, Model::Symmetric).unwrap());
        assert_eq!(out.raised(&r_in), vec![1]);
    }

    #[test]
    fn uniform_input_is_a_fixed_point() {
        let inst = line(&[0.0, 1.0, 10.0, 11.0, 14.0]);
        let r = uniform_assignment(&inst, 9.0).unwrap();
        let out = transform(&inst, &r, 9.0, Model::Symmetric).unwrap();
        assert_eq!(out.assignment, r);
    }

    #[test]
    fn only_promoted_sensors_change_when_already_capped() {
        let inst = line(&[0.0, 1.0, 2.0, 5.0, 6.0]);
        let r_in = RadiiAssignment::new(vec![1.0, 1.0, 3.0, 3.0, 1.0]).unwrap();
        assert!(is_valid(&inst, &r_in, Model::Symmetric).unwrap());
        let out = transform(&inst, &r_in, 3.0, Model::Symmetric).unwrap();
        for (s, promoted) in out.plan.promoted().into_iter().enumerate() {
            if !promoted {
                assert_eq!(out.assignment.get(s), r_in.get(s));
            }
        }
    }

    #[test]
    fn invalid_input_is_rejected() {
        let inst = line(&[0.0, 1.0, 3.0, 7.0]);
        let res = lnn(&inst);
        assert_eq!(
            transform(&inst, &res.assignment, 4.0, Model::Symmetric),
            Err(Error::InvalidInputAssignment)
        );
        let out = transform(&inst, &res.assignment, 4.0, Model::Asymmetric).unwrap();
        assert!(is_valid(&inst, &out.assignment, Model::Asymmetric).unwrap());
        assert!(out.assignment.max_radius() <= 4.0);
    }

    #[test]
    fn singleton_transform() {
        let inst = line(&[2.0]);
        let r = RadiiAssignment::new(vec![5.0]).unwrap();
        let out = transform(&inst, &r, 1.0, Model::Symmetric).unwrap();
        assert_eq!(out.assignment.radii(), &[1.0]);
    }
}
