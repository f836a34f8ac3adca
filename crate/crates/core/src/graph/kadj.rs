//! Exact-distance adjacency families.
//!
//! Adjacency powering mixes all neighborhoods up to distance `k` into one
//! matrix, with walk counts biased toward nearby and high-degree nodes. The
//! `k`-adjacency keeps only pairs at shortest-hop distance exactly `k`
//! (plus self-loops), so each scale of a multi-scale aggregator draws from a
//! disjoint neighborhood ring.

use crate::error::{Error, Result};
use crate::graph::adjacency::{
    add_self_loops, bool_reachability, build_adjacency, sym_normalize, AdjacencyMatrix,
};
use crate::graph::topology::{graph_diameter, SkeletonTopology};
use crate::scalar::Scalar;

/// Exact-`k`-hop adjacency with self-loops, via differences of boolean
/// reachability powers of the self-looped adjacency.
///
/// `a_tilde` must be binary, symmetric, with ones on the diagonal. Values of
/// `k` beyond the graph diameter yield the identity.
pub fn k_adjacency<S: Scalar>(a_tilde: &AdjacencyMatrix<S>, k: usize) -> AdjacencyMatrix<S> {
    debug_assert!(a_tilde.is_binary(), "k_adjacency input must be binary");
    debug_assert!(
        (0..a_tilde.n()).all(|i| a_tilde.get(i, i) == S::one()),
        "k_adjacency input must carry self-loops"
    );
    let n = a_tilde.n();
    if k == 0 {
        return AdjacencyMatrix::identity(n);
    }
    let reach = bool_reachability(a_tilde, k);
    let mut out = AdjacencyMatrix::identity(n);
    let (cur, prev) = (&reach[k], &reach[k - 1]);
    for i in 0..n {
        for j in 0..n {
            if i != j && cur[i * n + j] && !prev[i * n + j] {
                out.set(i, j, S::one());
            }
        }
    }
    out
}

/// Same contract as [`k_adjacency`], computed by per-node breadth-first
/// search on the topology. Kept as an independent route for cross-checking.
pub fn k_adjacency_bfs<S: Scalar>(topology: &SkeletonTopology, k: usize) -> AdjacencyMatrix<S> {
    let n = topology.num_joints();
    let mut out = AdjacencyMatrix::identity(n);
    if k == 0 {
        return out;
    }
    for i in 0..n {
        for (j, &d) in topology.bfs_distances(i).iter().enumerate() {
            if d == k {
                out.set(i, j, S::one());
            }
        }
    }
    out
}

/// The family of exact-distance adjacencies for scales `0..=max_scale`,
/// together with their symmetric-normalized forms.
#[derive(Debug, Clone)]
pub struct KAdjacencySet<S: Scalar> {
    topology: SkeletonTopology,
    max_scale: usize,
    raw: Vec<AdjacencyMatrix<S>>,
    normalized: Vec<AdjacencyMatrix<S>>,
}

impl<S: Scalar> KAdjacencySet<S> {
    pub fn build(topology: &SkeletonTopology, max_scale: usize) -> Result<Self> {
        let a = build_adjacency::<S>(topology);
        let a_tilde = add_self_loops(&a)?;
        let mut raw = Vec::with_capacity(max_scale + 1);
        let mut normalized = Vec::with_capacity(max_scale + 1);
        for k in 0..=max_scale {
            let m = k_adjacency(&a_tilde, k);
            // The diagonal guarantees positive row sums, so this cannot fail.
            normalized.push(sym_normalize(&m)?);
            raw.push(m);
        }
        Ok(KAdjacencySet {
            topology: topology.clone(),
            max_scale,
            raw,
            normalized,
        })
    }

    pub fn topology(&self) -> &SkeletonTopology {
        &self.topology
    }

    pub fn max_scale(&self) -> usize {
        self.max_scale
    }

    /// Binary exact-`k` adjacencies, `raw()[0] = I`, `raw()[1] = A + I`.
    pub fn raw(&self) -> &[AdjacencyMatrix<S>] {
        &self.raw
    }

    pub fn normalized(&self) -> &[AdjacencyMatrix<S>] {
        &self.normalized
    }

    pub fn num_scales(&self) -> usize {
        self.raw.len()
    }
}

/// Verifies the structural invariants of an exact-distance family built on a
/// connected graph: binary symmetric matrices with unit diagonals, disjoint
/// off-diagonal supports, and (up to the diameter) a partition of all pairs.
pub fn check_family_invariants<S: Scalar>(
    raw: &[AdjacencyMatrix<S>],
    diameter: usize,
) -> Result<()> {
    let n = raw[0].n();
    if !raw[0].is_identity() {
        return Err(Error::Numerical("scale 0 must be the identity".into()));
    }
    for (k, m) in raw.iter().enumerate() {
        if !m.is_binary() {
            return Err(Error::Numerical(format!("scale {k} is not binary")));
        }
        for i in 0..n {
            if m.get(i, i) != S::one() {
                return Err(Error::Numerical(format!("scale {k} missing self-loop {i}")));
            }
            for j in 0..n {
                if m.get(i, j) != m.get(j, i) {
                    return Err(Error::Numerical(format!("scale {k} asymmetric")));
                }
            }
        }
        if k > diameter && !m.is_identity() {
            return Err(Error::Numerical(format!(
                "scale {k} beyond diameter {diameter} must be the identity"
            )));
        }
    }
    // Off-diagonal supports are pairwise disjoint and, over k = 1..=diameter,
    // cover every off-diagonal pair exactly once.
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let hits: usize = raw
                .iter()
                .skip(1)
                .filter(|m| m.get(i, j) == S::one())
                .count();
            if hits > 1 {
                return Err(Error::Numerical(format!(
                    "pair ({i},{j}) appears in {hits} scales"
                )));
            }
            if raw.len() > diameter && hits != 1 {
                return Err(Error::Numerical(format!(
                    "pair ({i},{j}) missing from the family"
                )));
            }
        }
    }
    Ok(())
}

/// Convenience wrapper: per-scale invariants for a topology's family.
pub fn family_for_diameter<S: Scalar>(topology: &SkeletonTopology) -> Result<KAdjacencySet<S>> {
    KAdjacencySet::build(topology, graph_diameter(topology))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::topology::ntu25;

    fn path(n: usize) -> SkeletonTopology {
        let edges = (0..n - 1).map(|i| (i, i + 1)).collect();
        SkeletonTopology::new(n, edges, 0, "path").unwrap()
    }

    fn tilde(t: &SkeletonTopology) -> AdjacencyMatrix<f64> {
        add_self_loops(&build_adjacency(t)).unwrap()
    }

    #[test]
    fn k0_is_identity() {
        let a = tilde(&path(4));
        assert!(k_adjacency(&a, 0).is_identity());
        assert!(k_adjacency_bfs::<f64>(&path(4), 0).is_identity());
    }

    #[test]
    fn k1_is_a_tilde() {
        let a = tilde(&path(4));
        assert_eq!(k_adjacency(&a, 1), a);
    }

    #[test]
    fn path4_k2_pairs() {
        let t = path(4);
        let m = k_adjacency(&tilde(&t), 2);
        let mut expected = AdjacencyMatrix::<f64>::identity(4);
        for (i, j) in [(0, 2), (2, 0), (1, 3), (3, 1)] {
            expected.set(i, j, 1.0);
        }
        assert_eq!(m, expected);
        assert_eq!(m, k_adjacency_bfs(&t, 2));
    }

    #[test]
    fn path4_k3_endpoints() {
        let t = path(4);
        let m = k_adjacency_bfs::<f64>(&t, 3);
        let mut expected = AdjacencyMatrix::<f64>::identity(4);
        expected.set(0, 3, 1.0);
        expected.set(3, 0, 1.0);
        assert_eq!(m, expected);
        assert_eq!(k_adjacency(&tilde(&t), 3), expected);
    }

    #[test]
    fn star_k2_connects_leaves() {
        let star = SkeletonTopology::new(4, vec![(0, 1), (0, 2), (0, 3)], 0, "star").unwrap();
        let m = k_adjacency_bfs::<f64>(&star, 2);
        let mut expected = AdjacencyMatrix::<f64>::identity(4);
        for i in 1..4 {
            for j in 1..4 {
                if i != j {
                    expected.set(i, j, 1.0);
                }
            }
        }
        assert_eq!(m, expected);
        assert_eq!(k_adjacency(&tilde(&star), 2), expected);
    }

    #[test]
    fn ntu_beyond_diameter_is_identity() {
        let a = tilde(&ntu25());
        assert!(k_adjacency(&a, 13).is_identity());
    }

    #[test]
    fn family_invariants_on_presets() {
        for t in [ntu25(), crate::graph::topology::kinetics18()] {
            let d = graph_diameter(&t);
            let set: KAdjacencySet<f64> = KAdjacencySet::build(&t, d + 2).unwrap();
            check_family_invariants(set.raw(), d).unwrap();
        }
    }

    #[test]
    fn disentangled_sparser_than_powered_on_ntu() {
        // nnz of the exact-k matrix never exceeds nnz of the thresholded
        // k-th power, and is strictly smaller for some k.
        let t = ntu25();
        let a = tilde(&t);
        let d = graph_diameter(&t);
        let reach = bool_reachability(&a, d);
        let mut strict = false;
        for k in 1..=d {
            let exact = k_adjacency(&a, k);
            let power_nnz = reach[k].iter().filter(|&&b| b).count();
            assert!(exact.num_nonzero() <= power_nnz, "k={k}");
            if exact.num_nonzero() < power_nnz {
                strict = true;
            }
        }
        assert!(strict);
    }
}
