//! Topology control for wireless sensor networks under receiver-based
//! interference.
//!
//! The crate builds radii assignments over point sets in `R^d`, checks their
//! connectivity in the symmetric and asymmetric models, measures
//! interference, and transforms any valid assignment into one whose radii
//! are capped at the longest edge of the Euclidean minimum spanning tree.

pub mod bounded;
pub mod error;
pub mod geometry;
pub mod interference;
pub mod lab;
pub mod lnn;
pub mod network;

pub use bounded::{
    decompose, decompose_on_grid, leaders, plan, transform, transform_on_grid, witnesses,
    BoundedPlan, Cluster, ClusterDecomposition, Transformed, WitnessPair,
};
pub use error::{Error, Result};
pub use geometry::{
    bucket_of, distance, emst, nearest_neighbor, r_min, sub_bucket_of, Edge, GridSpec, Instance,
};
pub use interference::{network_interference, InterferenceReport, MeasureMode};
pub use lnn::{lnn, nng, LnnResult, NngGraph};
pub use network::{
    build_network, interference_at, is_valid, uniform_assignment, Model, Network, RadiiAssignment,
};

/// Version tag written into every JSON document.
pub const SCHEMA: &str = "topoctl/1";
