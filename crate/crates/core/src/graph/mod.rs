//! Skeleton graph construction, normalization and multi-scale disentanglement.

pub mod adjacency;
pub mod kadj;
pub mod profile;
pub mod topology;

pub use adjacency::{
    add_self_loops, build_adjacency, normalize_adjacency, powered_adjacency, sym_normalize,
    AdjacencyMatrix, NormalizationMode,
};
pub use kadj::{check_family_invariants, k_adjacency, k_adjacency_bfs, KAdjacencySet};
pub use profile::{profile_to_csv, weight_distance_profile};
pub use topology::{graph_diameter, kinetics18, ntu25, preset, SkeletonTopology};
