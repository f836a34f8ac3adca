//! Weight-versus-distance diagnostics.
//!
//! Powered adjacencies concentrate weight on nearby, high-degree joints;
//! this profile makes that effect measurable by averaging a matrix row over
//! hop-distance classes around a center joint.

use crate::error::{Error, Result};
use crate::graph::adjacency::AdjacencyMatrix;
use crate::graph::topology::{graph_diameter, SkeletonTopology};
use crate::scalar::Scalar;

/// For each hop distance `0..=diameter`, the mean of `m[center][j]` over
/// joints `j` at that distance. Empty distance classes average to zero.
pub fn weight_distance_profile<S: Scalar>(
    m: &AdjacencyMatrix<S>,
    topology: &SkeletonTopology,
    center: usize,
) -> Result<Vec<(usize, S)>> {
    let n = topology.num_joints();
    if m.n() != n {
        return Err(Error::shape(
            "weight_distance_profile",
            format!("matrix is {}x{} but topology has {n} joints", m.n(), m.n()),
        ));
    }
    if center >= n {
        return Err(Error::IndexOutOfRange { index: center, n });
    }
    let dist = topology.bfs_distances(center);
    let diameter = graph_diameter(topology);
    let mut out = Vec::with_capacity(diameter + 1);
    for d in 0..=diameter {
        let mut sum = S::zero();
        let mut count = 0usize;
        for (j, &dj) in dist.iter().enumerate() {
            if dj == d {
                sum += m.get(center, j);
                count += 1;
            }
        }
        let mean = if count == 0 {
            S::zero()
        } else {
            sum / S::from_f64(count as f64)
        };
        out.push((d, mean));
    }
    Ok(out)
}

/// Renders a profile as `distance,mean_weight` CSV lines.
pub fn profile_to_csv<S: Scalar>(profile: &[(usize, S)]) -> String {
    let mut out = String::from("distance,mean_weight\n");
    for &(d, w) in profile {
        out.push_str(&format!("{d},{:.16e}\n", w.to_f64()));
    }
    out
}
