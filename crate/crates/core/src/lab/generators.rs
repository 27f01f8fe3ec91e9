use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Instance;

/// Largest supported `k` for [`gen_lower_bound`] (`2^k` points).
pub const MAX_LOWER_BOUND_K: u32 = 12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorSpec {
    LowerBound {
        k: u32,
    },
    UniformRandom {
        n: usize,
        dim: usize,
        seed: u64,
        extent: f64,
    },
    ClusteredPlusOutlier {
        n: usize,
        dim: usize,
        seed: u64,
        spread: f64,
        separation: f64,
    },
}

impl GeneratorSpec {
    pub fn generate(&self) -> Result<Instance> {
        match *self {
            GeneratorSpec::LowerBound { k } => gen_lower_bound(k),
            GeneratorSpec::UniformRandom {
                n,
                dim,
                seed,
                extent,
            } => gen_uniform_random(n, dim, seed, extent),
            GeneratorSpec::ClusteredPlusOutlier {
                n,
                dim,
                seed,
                spread,
                separation,
            } => gen_clustered_plus_outlier(n, dim, seed, spread, separation),
        }
    }
}

/// The one-dimensional family `U_k` with `2^k` points.
///
/// `U_0 = {0}` and `U_i` is `U_{i-1}` followed by a translated copy whose
/// nearest point lies `2^(2i)` beyond the end of `U_{i-1}`. Any valid
/// assignment on `U_k` has interference at least `k - 1`.
pub fn gen_lower_bound(k: u32) -> Result<Instance> {
    if k > MAX_LOWER_BOUND_K {
        return Err(Error::KTooLarge {
            k,
            max: MAX_LOWER_BOUND_K,
        });
    }
    let mut xs = vec![0.0f64];
    for i in 1..=k {
        let diameter = xs[xs.len() - 1] - xs[0];
        let offset = diameter + 4f64.powi(i as i32);
        let copy: Vec<f64> = xs.iter().map(|x| x + offset).collect();
        xs.extend(copy);
        debug_assert!(xs[xs.len() - 1] < 2f64.powi(2 * i as i32 + 1));
    }
    Instance::on_line(&xs)
}

/// `n` i.i.d. uniform points in `[0, extent]^dim`.
pub fn gen_uniform_random(n: usize, dim: usize, seed: u64, extent: f64) -> Result<Instance> {
    if n == 0 || dim == 0 {
        return Err(Error::InvalidParameter("n and dim must be positive".into()));
    }
    if !(extent > 0.0 && extent.is_finite()) {
        return Err(Error::InvalidParameter("extent must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..n)
        .map(|_| (0..dim).map(|_| rng.gen_range(0.0..=extent)).collect())
        .collect();
    Instance::new(dim, points)
}

/// `n - 1` points uniform in the ball of radius `spread` around the origin,
/// then one outlier at distance `separation` along the first axis.
///
/// Requires `separation >= 3 * spread`, which makes `r_min` exceed the
/// cluster diameter, so the uniform network at `r_min` has interference at
/// least `n - 1`.
pub fn gen_clustered_plus_outlier(
    n: usize,
    dim: usize,
    seed: u64,
    spread: f64,
    separation: f64,
) -> Result<Instance> {
    if n < 2 || dim == 0 {
        return Err(Error::InvalidParameter(
            "need n >= 2 and a positive dimension".into(),
        ));
    }
    if !(spread > 0.0 && spread.is_finite() && separation.is_finite()) {
        return Err(Error::InvalidParameter("spread must be positive".into()));
    }
    if separation < 3.0 * spread {
        return Err(Error::InvalidParameter(
            "separation must be at least 3 * spread".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(n);
    while points.len() < n - 1 {
        let p: Vec<f64> = (0..dim).map(|_| rng.gen_range(-spread..=spread)).collect();
        if p.iter().map(|x| x * x).sum::<f64>() <= spread * spread {
            points.push(p);
        }
    }
    let mut outlier = vec![0.0; dim];
    outlier[0] = separation;
    points.push(outlier);
    Instance::new(dim, points)
}
