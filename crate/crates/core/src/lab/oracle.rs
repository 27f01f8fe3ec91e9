use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::euclidean;
use crate::geometry::Instance;
use crate::interference::{max_depth, MeasureMode};
use crate::network::{is_valid, Model, RadiiAssignment};

/// Largest instance accepted by [`oracle_min_interference`].
pub const MAX_ORACLE_N: usize = 8;

/// Which interference an oracle minimizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleMeasure {
    /// Deepest point anywhere in space (exact, `d <= 2`).
    Exact,
    /// Deepest sensor position.
    AtSensors,
}

impl OracleMeasure {
    fn mode(self, dim: usize) -> Result<MeasureMode> {
        match self {
            OracleMeasure::AtSensors => Ok(MeasureMode::AtSensors),
            OracleMeasure::Exact => MeasureMode::exact_for(dim).ok_or_else(|| {
                Error::InvalidParameter("exact oracle needs dimension 1 or 2".into())
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinInterference {
    pub value: usize,
    /// Lexicographically smallest optimal assignment.
    pub assignment: RadiiAssignment,
    pub measure: OracleMeasure,
    pub model: Model,
}

/// Minimum interference over all valid assignments, by exhaustive search.
///
/// Each radius ranges over the distances from its sensor to the others.
/// Nothing is lost: lowering a radius to the largest inter-sensor distance
/// not above it keeps every edge, and can only shrink disks.
/// Branch and bound: unassigned sensors are held at their smallest candidate,
/// which lower-bounds the interference of every completion because depth is
/// monotone in each radius.
pub fn oracle_min_interference(
    instance: &Instance,
    measure: OracleMeasure,
    model: Model,
) -> Result<MinInterference> {
    let n = instance.len();
    if n > MAX_ORACLE_N {
        return Err(Error::InstanceTooLarge {
            n,
            max: MAX_ORACLE_N,
        });
    }
    if instance.dim() > 2 {
        return Err(Error::InvalidParameter(
            "oracle supports dimension 1 or 2".into(),
        ));
    }
    let mode = measure.mode(instance.dim())?;
    if n == 1 {
        let assignment = RadiiAssignment::new(vec![0.0])?;
        return Ok(MinInterference {
            value: 1,
            assignment,
            measure,
            model,
        });
    }

    let candidates: Vec<Vec<f64>> = (0..n)
        .map(|s| {
            let mut c: Vec<f64> = (0..n)
                .filter(|&t| t != s)
                .map(|t| instance.dist(s, t))
                .collect();
            c.sort_by(f64::total_cmp);
            c.dedup();
            c
        })
        .collect();

    let search = Search {
        instance,
        candidates: &candidates,
        mode,
        model,
    };
    let best = candidates[0]
        .par_iter()
        .map(|&r0| {
            let mut radii: Vec<f64> = candidates.iter().map(|c| c[0]).collect();
            radii[0] = r0;
            let mut best = None;
            search.descend(1, &mut radii, &mut best);
            best
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .reduce(|a: (usize, Vec<f64>), b| if b.0 < a.0 { b } else { a });

    let (value, radii) =
        best.ok_or_else(|| Error::InvalidParameter("no valid assignment exists".into()))?;
    Ok(MinInterference {
        value,
        assignment: RadiiAssignment::new(radii)?,
        measure,
        model,
    })
}

struct Search<'a> {
    instance: &'a Instance,
    candidates: &'a [Vec<f64>],
    mode: MeasureMode,
    model: Model,
}

impl Search<'_> {
    /// Visits completions in lexicographic order of the radii vector; only a
    /// strictly better value replaces the incumbent.
    fn descend(&self, s: usize, radii: &mut Vec<f64>, best: &mut Option<(usize, Vec<f64>)>) {
        let bound = max_depth(self.instance, radii, self.mode);
        if best.as_ref().is_some_and(|b| bound >= b.0) {
            return;
        }
        if s == radii.len() {
            let assignment = RadiiAssignment::new(radii.clone()).expect("candidate radii");
            if is_valid(self.instance, &assignment, self.model).expect("lengths match") {
                *best = Some((bound, radii.clone()));
            }
            return;
        }
        for &r in &self.candidates[s] {
            radii[s] = r;
            self.descend(s + 1, radii, best);
        }
        radii[s] = self.candidates[s][0];
    }
}

/// Deepest grid point found by [`oracle_max_depth`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepthProbe {
    pub value: usize,
    pub point: Vec<f64>,
    pub grid_points: usize,
}

/// Maximum depth over a regular grid of pitch `grid_pitch` covering the
/// bounding box inflated by the largest radius.
///
/// Always a lower bound on the true maximum; exact once the pitch is below
/// the smallest feature of the arrangement.
pub fn oracle_max_depth(
    instance: &Instance,
    r: &RadiiAssignment,
    grid_pitch: f64,
) -> Result<DepthProbe> {
    if instance.dim() > 2 {
        return Err(Error::InvalidParameter(
            "grid oracle supports dimension 1 or 2".into(),
        ));
    }
    if !(grid_pitch > 0.0 && grid_pitch.is_finite()) {
        return Err(Error::InvalidParameter(
            "grid pitch must be positive".into(),
        ));
    }
    if r.len() != instance.len() {
        return Err(Error::LengthMismatch {
            expected: instance.len(),
            found: r.len(),
        });
    }
    let radii = r.radii();
    let max_r = r.max_radius();
    let (lo, hi) = instance.bounding_box();
    let steps: Vec<usize> = lo
        .iter()
        .zip(&hi)
        .map(|(a, b)| ((b - a + 2.0 * max_r) / grid_pitch).ceil() as usize + 1)
        .collect();
    let total: usize = steps.iter().product();
    if total > 200_000_000 {
        return Err(Error::InvalidParameter(format!(
            "grid of {total} points is too fine"
        )));
    }
    let start: Vec<f64> = lo.iter().map(|x| x - max_r).collect();
    let line = |fixed: Option<f64>| Line {
        instance,
        radii,
        start: start[instance.dim() - 1],
        pitch: grid_pitch,
        steps: steps[instance.dim() - 1],
        fixed,
    };
    let rows: Vec<(usize, Vec<f64>)> = match instance.dim() {
        1 => vec![line(None).deepest()],
        _ => (0..steps[0])
            .into_par_iter()
            .map(|i| line(Some(start[0] + i as f64 * grid_pitch)).deepest())
            .collect(),
    };
    let (value, point) = rows.into_iter().fold((0, Vec::new()), keep_deeper);
    Ok(DepthProbe {
        value,
        point,
        grid_points: total,
    })
}

/// One grid line along the last axis, the other coordinate (if any) fixed.
struct Line<'a> {
    instance: &'a Instance,
    radii: &'a [f64],
    start: f64,
    pitch: f64,
    steps: usize,
    fixed: Option<f64>,
}

impl Line<'_> {
    fn point(&self, j: usize) -> Vec<f64> {
        let t = self.start + j as f64 * self.pitch;
        match self.fixed {
            Some(x) => vec![x, t],
            None => vec![t],
        }
    }

    fn covers(&self, s: usize, j: usize) -> bool {
        self.radii[s] >= euclidean(self.instance.point(s), &self.point(j))
    }

    /// Grid indices covered by sensor `s`. The range comes from the circle
    /// equation and its ends are then settled with the inclusive predicate.
    fn covered(&self, s: usize) -> Option<(usize, usize)> {
        let center = self.instance.point(s);
        let along = center[center.len() - 1];
        let perp = match self.fixed {
            Some(x) => center[0] - x,
            None => 0.0,
        };
        let r = self.radii[s];
        let last = self.steps as i64 - 1;
        let offset = |t: f64| ((t - self.start) / self.pitch).clamp(-1.0, self.steps as f64);
        let mid = (offset(along).round() as i64).clamp(0, last);
        let (mut lo, mut hi) = if perp.abs() <= r {
            let half = (r * r - perp * perp).max(0.0).sqrt();
            (
                (offset(along - half).ceil() as i64).max(0),
                (offset(along + half).floor() as i64).min(last),
            )
        } else {
            (mid, mid)
        };
        if lo > hi {
            (lo, hi) = (mid, mid);
        }
        let covers = |j: i64| self.covers(s, j as usize);
        while lo > 0 && covers(lo - 1) {
            lo -= 1;
        }
        while lo <= hi && !covers(lo) {
            lo += 1;
        }
        while hi < last && covers(hi + 1) {
            hi += 1;
        }
        while hi >= lo && !covers(hi) {
            hi -= 1;
        }
        (lo <= hi).then_some((lo as usize, hi as usize))
    }

    /// Deepest point of the line; the first one wins ties.
    fn deepest(&self) -> (usize, Vec<f64>) {
        let mut delta = vec![0i64; self.steps + 1];
        for s in 0..self.instance.len() {
            if let Some((lo, hi)) = self.covered(s) {
                delta[lo] += 1;
                delta[hi + 1] -= 1;
            }
        }
        let mut depth = 0i64;
        let mut best = (0, 0);
        for (j, d) in delta[..self.steps].iter().enumerate() {
            depth += d;
            if j == 0 || depth as usize > best.0 {
                best = (depth as usize, j);
            }
        }
        (best.0, self.point(best.1))
    }
}

fn keep_deeper(acc: (usize, Vec<f64>), next: (usize, Vec<f64>)) -> (usize, Vec<f64>) {
    if next.0 > acc.0 || acc.1.is_empty() {
        next
    } else {
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interference::network_interference;

    fn line(xs: &[f64]) -> Instance {
        Instance::on_line(xs).unwrap()
    }

    #[test]
    fn two_sensors_forced() {
        let res =
            oracle_min_interference(&line(&[0.0, 1.0]), OracleMeasure::Exact, Model::Symmetric)
                .unwrap();
        assert_eq!(res.value, 2);
        assert_eq!(res.assignment.radii(), &[1.0, 1.0]);
    }

    #[test]
    fn three_on_a_line() {
        let inst = line(&[0.0, 1.0, 3.0]);
        let res = oracle_min_interference(&inst, OracleMeasure::Exact, Model::Symmetric).unwrap();
        assert_eq!(res.value, 3);
        assert_eq!(res.assignment.radii(), &[1.0, 2.0, 2.0]);
        let measured =
            network_interference(&inst, &res.assignment, MeasureMode::Exact1d, None, None).unwrap();
        assert_eq!(measured.value, 3);
    }

    #[test]
    fn size_limits() {
        let big = line(&(0..9).map(f64::from).collect::<Vec<_>>());
        assert_eq!(
            oracle_min_interference(&big, OracleMeasure::Exact, Model::Symmetric),
            Err(Error::InstanceTooLarge { n: 9, max: 8 })
        );
        let space = Instance::new(3, vec![vec![0.0; 3], vec![1.0; 3]]).unwrap();
        assert!(
            oracle_min_interference(&space, OracleMeasure::AtSensors, Model::Symmetric).is_err()
        );
    }

    #[test]
    fn singleton_oracle() {
        let res =
            oracle_min_interference(&line(&[3.0]), OracleMeasure::Exact, Model::Symmetric).unwrap();
        assert_eq!(res.value, 1);
    }

    /// Every grid point evaluated with the plain predicate.
    fn brute_grid(instance: &Instance, r: &RadiiAssignment, pitch: f64) -> (usize, Vec<f64>) {
        let (lo, hi) = instance.bounding_box();
        let m = r.max_radius();
        let steps: Vec<usize> = lo
            .iter()
            .zip(&hi)
            .map(|(a, b)| ((b - a + 2.0 * m) / pitch).ceil() as usize + 1)
            .collect();
        let coord = |k: usize, i: usize| lo[k] - m + i as f64 * pitch;
        let mut best = (0, Vec::new());
        let points: Vec<Vec<f64>> = match instance.dim() {
            1 => (0..steps[0]).map(|i| vec![coord(0, i)]).collect(),
            _ => (0..steps[0])
                .flat_map(|i| (0..steps[1]).map(move |j| (i, j)))
                .map(|(i, j)| vec![coord(0, i), coord(1, j)])
                .collect(),
        };
        for p in points {
            let d = crate::network::depth(instance, r.radii(), &p);
            if d > best.0 || best.1.is_empty() {
                best = (d, p);
            }
        }
        best
    }

    #[test]
    fn line_scan_matches_pointwise_evaluation() {
        use crate::lab::gen_uniform_random;
        for seed in 0..40 {
            let dim = 1 + seed as usize % 2;
            let inst = gen_uniform_random(6, dim, seed, 3.0).unwrap();
            let spread = gen_uniform_random(6, 1, seed + 100, 1.0).unwrap();
            let mut radii: Vec<f64> = spread.points().map(|p| 1.5 * p[0]).collect();
            radii[0] = 0.0;
            let r = RadiiAssignment::new(radii).unwrap();
            for pitch in [0.25, 0.1, 0.037] {
                let probe = oracle_max_depth(&inst, &r, pitch).unwrap();
                assert_eq!(
                    (probe.value, probe.point),
                    brute_grid(&inst, &r, pitch),
                    "seed {seed}"
                );
            }
        }
        // disks whose rims pass exactly through grid points
        let inst = Instance::new(2, vec![vec![0.0, 0.0], vec![2.0, 0.0]]).unwrap();
        let r = RadiiAssignment::new(vec![1.0, 1.0]).unwrap();
        let probe = oracle_max_depth(&inst, &r, 0.5).unwrap();
        assert_eq!(
            (probe.value, probe.point.clone()),
            brute_grid(&inst, &r, 0.5)
        );
        assert_eq!(probe.value, 2);
    }

    #[test]
    fn grid_oracle_small_cases() {
        let one = Instance::new(2, vec![vec![0.0, 0.0]]).unwrap();
        let r = RadiiAssignment::new(vec![1.0]).unwrap();
        assert_eq!(oracle_max_depth(&one, &r, 0.1).unwrap().value, 1);
        let twin = Instance::new(2, vec![vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let r = RadiiAssignment::new(vec![0.5, 0.5]).unwrap();
        assert_eq!(oracle_max_depth(&twin, &r, 0.1).unwrap().value, 2);
        assert!(oracle_max_depth(&twin, &r, 0.0).is_err());
    }
}
