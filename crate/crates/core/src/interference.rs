//! Network interference: the depth of the deepest point in the arrangement
//! of closed disks `B(s, r(s))`.
//!
//! For `d = 1` and `d = 2` the maximum is attained on a finite candidate set
//! (interval endpoints, disk centers, circle-circle intersection points), so it
//! can be evaluated exactly. Candidates that lie on a bounding circle are also
//! evaluated after a tiny shift into the lens or interval they bound, which
//! keeps floating-point rounding of the candidate itself from dropping the
//! generating disks. Every reported value is a plain depth count at the
//! reported witness point.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Instance;
use crate::network::{depth, RadiiAssignment};

/// Relative step used to move a boundary candidate into the region it bounds.
const NUDGE: f64 = 1e-7;

/// Samples drawn per independent random substream in `Sampled` mode.
const SAMPLE_CHUNK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureMode {
    Exact1d,
    Exact2d,
    /// Maximum over sensor positions only.
    AtSensors,
    /// Sensor positions plus uniform random points; a lower bound.
    Sampled,
}

impl MeasureMode {
    /// The exact mode for a dimension, if one exists.
    pub fn exact_for(dim: usize) -> Option<MeasureMode> {
        match dim {
            1 => Some(MeasureMode::Exact1d),
            2 => Some(MeasureMode::Exact2d),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MeasureMode::Exact1d => "exact1d",
            MeasureMode::Exact2d => "exact2d",
            MeasureMode::AtSensors => "at_sensors",
            MeasureMode::Sampled => "sampled",
        }
    }
}

impl fmt::Display for MeasureMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MeasureMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact1d" => Ok(MeasureMode::Exact1d),
            "exact2d" => Ok(MeasureMode::Exact2d),
            "at_sensors" | "at-sensors" => Ok(MeasureMode::AtSensors),
            "sampled" => Ok(MeasureMode::Sampled),
            other => Err(Error::InvalidParameter(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterferenceReport {
    pub value: usize,
    pub witness_point: Vec<f64>,
    pub mode: MeasureMode,
    pub candidates_evaluated: usize,
}

struct Deepest<'a> {
    instance: &'a Instance,
    radii: &'a [f64],
    best: usize,
    witness: Vec<f64>,
    evaluated: usize,
}

impl<'a> Deepest<'a> {
    fn new(instance: &'a Instance, radii: &'a [f64]) -> Self {
        Deepest {
            instance,
            radii,
            best: 0,
            witness: instance.point(0).to_vec(),
            evaluated: 0,
        }
    }

    fn offer(&mut self, p: &[f64]) {
        self.evaluated += 1;
        let value = depth(self.instance, self.radii, p);
        if value > self.best {
            self.best = value;
            self.witness = p.to_vec();
        }
    }

    fn sensors(&mut self) {
        let instance = self.instance;
        for p in instance.points() {
            self.offer(p);
        }
    }

    fn report(self, mode: MeasureMode) -> InterferenceReport {
        InterferenceReport {
            value: self.best,
            witness_point: self.witness,
            mode,
            candidates_evaluated: self.evaluated,
        }
    }
}

/// Interference of the network under `mode`.
///
/// `samples` and `seed` are only read by `Sampled`, which requires a seed.
pub fn network_interference(
    instance: &Instance,
    r: &RadiiAssignment,
    mode: MeasureMode,
    samples: Option<usize>,
    seed: Option<u64>,
) -> Result<InterferenceReport> {
    match mode {
        MeasureMode::Exact1d if instance.dim() != 1 => {
            return Err(Error::ModeDimension {
                mode: mode.name(),
                required: 1,
            })
        }
        MeasureMode::Exact2d if instance.dim() != 2 => {
            return Err(Error::ModeDimension {
                mode: mode.name(),
                required: 2,
            })
        }
        _ => {}
    }
    r.check_len(instance)?;
    let radii = r.radii();
    let mut deepest = Deepest::new(instance, radii);
    deepest.sensors();
    match mode {
        MeasureMode::AtSensors => {}
        MeasureMode::Exact1d => exact_line(&mut deepest),
        MeasureMode::Exact2d => exact_plane(&mut deepest),
        MeasureMode::Sampled => {
            let seed = seed.ok_or(Error::MissingSeed)?;
            sampled(&mut deepest, samples.unwrap_or(0), seed);
        }
    }
    Ok(deepest.report(mode))
}

/// Depth of the deepest candidate for a deterministic mode, without building
/// a report. Used by the exhaustive oracles.
pub(crate) fn max_depth(instance: &Instance, radii: &[f64], mode: MeasureMode) -> usize {
    let mut deepest = Deepest::new(instance, radii);
    deepest.sensors();
    match mode {
        MeasureMode::Exact1d => exact_line(&mut deepest),
        MeasureMode::Exact2d => exact_plane(&mut deepest),
        MeasureMode::AtSensors => {}
        MeasureMode::Sampled => unreachable!("sampled mode is not deterministic"),
    }
    deepest.best
}

fn exact_line(deepest: &mut Deepest<'_>) {
    let instance = deepest.instance;
    for (i, &r) in deepest.radii.iter().enumerate() {
        let s = instance.point(i)[0];
        if r == 0.0 {
            continue;
        }
        let nudge = r * NUDGE;
        deepest.offer(&[s - r]);
        deepest.offer(&[s + r]);
        deepest.offer(&[s - r + nudge]);
        deepest.offer(&[s + r - nudge]);
    }
}

/// Intersection points of two circles, `None` when they do not meet or
/// share a center.
fn circle_intersections(c1: &[f64], r1: f64, c2: &[f64], r2: f64) -> Option<([f64; 2], [f64; 2])> {
    let dx = c2[0] - c1[0];
    let dy = c2[1] - c1[1];
    let d = dx.hypot(dy);
    if d == 0.0 || d > r1 + r2 || d < (r1 - r2).abs() {
        return None;
    }
    let a = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d);
    let h = (r1 * r1 - a * a).max(0.0).sqrt();
    let (ux, uy) = (dx / d, dy / d);
    let (mx, my) = (c1[0] + a * ux, c1[1] + a * uy);
    Some(([mx - h * uy, my + h * ux], [mx + h * uy, my - h * ux]))
}

fn exact_plane(deepest: &mut Deepest<'_>) {
    let instance = deepest.instance;
    let radii = deepest.radii;
    let n = instance.len();
    for i in 0..n {
        if radii[i] == 0.0 {
            continue;
        }
        for j in i + 1..n {
            if radii[j] == 0.0 {
                continue;
            }
            let Some((v1, v2)) =
                circle_intersections(instance.point(i), radii[i], instance.point(j), radii[j])
            else {
                continue;
            };
            deepest.offer(&v1);
            deepest.offer(&v2);
            if v1 != v2 {
                let toward = |a: [f64; 2], b: [f64; 2]| {
                    [a[0] + NUDGE * (b[0] - a[0]), a[1] + NUDGE * (b[1] - a[1])]
                };
                deepest.offer(&toward(v1, v2));
                deepest.offer(&toward(v2, v1));
            }
        }
    }
}

fn sampled(deepest: &mut Deepest<'_>, samples: usize, seed: u64) {
    let instance = deepest.instance;
    let radii = deepest.radii;
    let dim = instance.dim();
    let max_r = radii.iter().copied().fold(0.0, f64::max);
    let (mut lo, mut hi) = instance.bounding_box();
    for k in 0..dim {
        lo[k] -= max_r;
        hi[k] += max_r;
    }
    let chunks = samples.div_ceil(SAMPLE_CHUNK);
    let results: Vec<(usize, Vec<f64>)> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk as u64);
            let count = SAMPLE_CHUNK.min(samples - chunk * SAMPLE_CHUNK);
            let mut best = (0, Vec::new());
            let mut p = vec![0.0; dim];
            for _ in 0..count {
                for k in 0..dim {
                    p[k] = if hi[k] > lo[k] {
                        rng.gen_range(lo[k]..hi[k])
                    } else {
                        lo[k]
                    };
                }
                let value = depth(instance, radii, &p);
                if value > best.0 || best.1.is_empty() {
                    best = (value, p.clone());
                }
            }
            best
        })
        .collect();
    for (value, p) in results {
        if value > deepest.best {
            deepest.best = value;
            deepest.witness = p;
        }
    }
    deepest.evaluated = instance.len() + samples;
}
