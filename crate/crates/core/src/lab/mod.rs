//! Instance generators and brute-force oracles for small inputs.

mod generators;
mod oracle;

pub use generators::{
    gen_clustered_plus_outlier, gen_lower_bound, gen_uniform_random, GeneratorSpec,
    MAX_LOWER_BOUND_K,
};
pub use oracle::{
    oracle_max_depth, oracle_min_interference, DepthProbe, MinInterference, OracleMeasure,
    MAX_ORACLE_N,
};
