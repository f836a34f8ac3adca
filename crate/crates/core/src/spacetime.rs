//! Sliding-window spatial-temporal graphs.
//!
//! A window of `tau` frames is treated as one graph on `tau * N` nodes.
//! Tiling the self-looped spatial adjacency into every block of a
//! `tau*N x tau*N` matrix connects each joint to itself and its 1-hop
//! spatial neighbors across all frames of the window, so information can
//! skip directly across spacetime instead of percolating through
//! alternating spatial and temporal layers.

use crate::error::{Error, Result};
use crate::graph::adjacency::{sym_normalize, AdjacencyMatrix};
use crate::graph::kadj::k_adjacency;
use crate::scalar::Scalar;

/// Temporal window geometry: `tau` frames sampled every `dilation` frames,
/// window centers advancing by `stride`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowSpec {
    tau: usize,
    dilation: usize,
    stride: usize,
}

impl WindowSpec {
    pub fn new(tau: usize, dilation: usize, stride: usize) -> Result<Self> {
        if tau == 0 || tau % 2 == 0 {
            return Err(Error::InvalidWindow(tau));
        }
        if dilation == 0 {
            return Err(Error::Config("window dilation must be >= 1".into()));
        }
        if stride == 0 {
            return Err(Error::Config("window stride must be >= 1".into()));
        }
        Ok(WindowSpec { tau, dilation, stride })
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn dilation(&self) -> usize {
        self.dilation
    }

    pub fn stride(&self) -> usize {
        self.stride
    }

    pub fn with_stride(self, stride: usize) -> Result<Self> {
        WindowSpec::new(self.tau, self.dilation, stride)
    }

    /// Frame indices gathered for the window centered at `center`;
    /// out-of-range entries are `None` and contribute zero features.
    pub fn frame_offsets(&self, center: usize, num_frames: usize) -> Vec<Option<usize>> {
        let half = (self.tau as isize - 1) / 2;
        (0..self.tau as isize)
            .map(|j| {
                let src = center as isize + self.dilation as isize * (j - half);
                if src >= 0 && (src as usize) < num_frames {
                    Some(src as usize)
                } else {
                    None
                }
            })
            .collect()
    }

    /// Number of windows emitted for a `num_frames`-long input.
    pub fn output_frames(&self, num_frames: usize) -> usize {
        num_frames.div_ceil(self.stride)
    }
}

/// Connectivity scheme of the window graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpacetimeVariant {
    /// Every `N x N` block holds the spatial adjacency: dense
    /// cross-spacetime edges.
    CrossSpacetime,
    /// Spatial adjacency on the diagonal, identity couplings only between
    /// adjacent frames.
    GridLike,
    /// Spatial adjacency on the diagonal, identity couplings between all
    /// frame pairs.
    GridLikeDenseSelf,
}

impl SpacetimeVariant {
    pub fn name(self) -> &'static str {
        match self {
            SpacetimeVariant::CrossSpacetime => "cross",
            SpacetimeVariant::GridLike => "grid",
            SpacetimeVariant::GridLikeDenseSelf => "grid-dense",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "cross" => Some(SpacetimeVariant::CrossSpacetime),
            "grid" => Some(SpacetimeVariant::GridLike),
            "grid-dense" => Some(SpacetimeVariant::GridLikeDenseSelf),
            _ => None,
        }
    }
}

/// Window-graph adjacency on `tau * N` nodes with an optional
/// exact-distance family.
#[derive(Debug, Clone)]
pub struct SpacetimeAdjacency<S: Scalar> {
    tau: usize,
    joints: usize,
    variant: SpacetimeVariant,
    raw: AdjacencyMatrix<S>,
    k_raw: Vec<AdjacencyMatrix<S>>,
    k_normalized: Vec<AdjacencyMatrix<S>>,
}

impl<S: Scalar> SpacetimeAdjacency<S> {
    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn joints(&self) -> usize {
        self.joints
    }

    pub fn nodes(&self) -> usize {
        self.tau * self.joints
    }

    pub fn variant(&self) -> SpacetimeVariant {
        self.variant
    }

    pub fn raw(&self) -> &AdjacencyMatrix<S> {
        &self.raw
    }

    pub fn k_raw(&self) -> &[AdjacencyMatrix<S>] {
        &self.k_raw
    }

    pub fn k_normalized(&self) -> &[AdjacencyMatrix<S>] {
        &self.k_normalized
    }

    pub fn num_scales(&self) -> usize {
        self.k_raw.len()
    }
}

fn expect_self_looped<S: Scalar>(a_tilde: &AdjacencyMatrix<S>) -> Result<()> {
    for i in 0..a_tilde.n() {
        if a_tilde.get(i, i) != S::one() {
            return Err(Error::Config(
                "window tiling expects a self-looped spatial adjacency".into(),
            ));
        }
    }
    Ok(())
}

/// Tiles the self-looped spatial adjacency into every `N x N` block of the
/// `tau*N x tau*N` window adjacency.
pub fn tile_block_adjacency<S: Scalar>(
    a_tilde: &AdjacencyMatrix<S>,
    tau: usize,
) -> Result<SpacetimeAdjacency<S>> {
    build_variant(a_tilde, tau, SpacetimeVariant::CrossSpacetime)
}

/// Builds the window adjacency under the chosen connectivity scheme.
pub fn build_variant<S: Scalar>(
    a_tilde: &AdjacencyMatrix<S>,
    tau: usize,
    variant: SpacetimeVariant,
) -> Result<SpacetimeAdjacency<S>> {
    if tau == 0 {
        return Err(Error::Config("tau must be >= 1".into()));
    }
    expect_self_looped(a_tilde)?;
    let n = a_tilde.n();
    let nodes = tau * n;
    let mut raw = AdjacencyMatrix::zeros(nodes);
    for bi in 0..tau {
        for bj in 0..tau {
            enum Block {
                Spatial,
                Identity,
                Zero,
            }
            let block = match variant {
                SpacetimeVariant::CrossSpacetime => Block::Spatial,
                _ if bi == bj => Block::Spatial,
                SpacetimeVariant::GridLike if bi.abs_diff(bj) == 1 => Block::Identity,
                SpacetimeVariant::GridLikeDenseSelf => Block::Identity,
                _ => Block::Zero,
            };
            for i in 0..n {
                for j in 0..n {
                    let v = match block {
                        Block::Spatial => a_tilde.get(i, j),
                        Block::Identity => {
                            if i == j {
                                S::one()
                            } else {
                                S::zero()
                            }
                        }
                        Block::Zero => S::zero(),
                    };
                    raw.set(bi * n + i, bj * n + j, v);
                }
            }
        }
    }
    Ok(SpacetimeAdjacency {
        tau,
        joints: n,
        variant,
        raw,
        k_raw: Vec::new(),
        k_normalized: Vec::new(),
    })
}

/// Populates the exact-distance family of the window graph for scales
/// `0..=max_scale`, reusing the spatial `k`-adjacency construction on the
/// `tau*N`-node graph.
pub fn st_k_adjacency<S: Scalar>(
    st: &SpacetimeAdjacency<S>,
    max_scale: usize,
) -> Result<SpacetimeAdjacency<S>> {
    let mut out = st.clone();
    out.k_raw.clear();
    out.k_normalized.clear();
    for k in 0..=max_scale {
        let m = k_adjacency(&st.raw, k);
        out.k_normalized.push(sym_normalize(&m)?);
        out.k_raw.push(m);
    }
    Ok(out)
}

/// BFS distances on an arbitrary binary adjacency, for window-graph
/// diagnostics. Self-loops do not shorten paths.
pub fn adjacency_bfs_distances<S: Scalar>(a: &AdjacencyMatrix<S>, source: usize) -> Vec<usize> {
    let n = a.n();
    let mut dist = vec![usize::MAX; n];
    dist[source] = 0;
    let mut queue = std::collections::VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        for v in 0..n {
            if v != u && a.get(u, v) != S::zero() && dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::adjacency::{add_self_loops, build_adjacency};
    use crate::graph::kadj::{check_family_invariants, KAdjacencySet};
    use crate::graph::topology::{graph_diameter, ntu25, SkeletonTopology};

    fn p2_tilde() -> AdjacencyMatrix<f64> {
        let t = SkeletonTopology::new(2, vec![(0, 1)], 0, "p2").unwrap();
        add_self_loops(&build_adjacency(&t)).unwrap()
    }

    #[test]
    fn window_spec_validation() {
        assert!(WindowSpec::new(2, 1, 1).is_err());
        assert!(WindowSpec::new(0, 1, 1).is_err());
        assert!(WindowSpec::new(3, 0, 1).is_err());
        assert!(WindowSpec::new(3, 1, 0).is_err());
        assert!(WindowSpec::new(1, 1, 1).is_ok());
    }

    #[test]
    fn dilated_window_frames() {
        let spec = WindowSpec::new(3, 2, 1).unwrap();
        assert_eq!(
            spec.frame_offsets(4, 10),
            vec![Some(2), Some(4), Some(6)]
        );
    }

    #[test]
    fn tile_p2_tau2_is_all_ones() {
        let st = tile_block_adjacency(&p2_tilde(), 2).unwrap();
        assert_eq!(st.nodes(), 4);
        assert!(st.raw().values().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn tile_tau1_is_spatial() {
        let tilde = p2_tilde();
        let st = tile_block_adjacency(&tilde, 1).unwrap();
        assert_eq!(st.raw(), &tilde);
    }

    #[test]
    fn tile_ntu_tau5_blocks() {
        let tilde = add_self_loops(&build_adjacency::<f64>(&ntu25())).unwrap();
        let st = tile_block_adjacency(&tilde, 5).unwrap();
        assert_eq!(st.nodes(), 125);
        for bi in 0..5 {
            for bj in 0..5 {
                for i in 0..25 {
                    for j in 0..25 {
                        assert_eq!(st.raw().get(bi * 25 + i, bj * 25 + j), tilde.get(i, j));
                    }
                }
            }
        }
    }

    #[test]
    fn grid_like_tau3() {
        let st = build_variant(&p2_tilde(), 3, SpacetimeVariant::GridLike).unwrap();
        let m = st.raw();
        // Diagonal blocks are all-ones (P2 with self-loops), adjacent frame
        // couplings are identity, distant blocks zero.
        assert_eq!(m.get(0, 1), 1.0);
        assert_eq!(m.get(0, 2), 1.0);
        assert_eq!(m.get(0, 3), 0.0);
        assert_eq!(m.get(0, 4), 0.0);
        assert_eq!(m.get(0, 5), 0.0);
        assert_eq!(m.get(2, 4), 1.0);
        assert_eq!(m.get(2, 5), 0.0);
    }

    #[test]
    fn grid_dense_tau2() {
        let st = build_variant(&p2_tilde(), 2, SpacetimeVariant::GridLikeDenseSelf).unwrap();
        let m = st.raw();
        assert_eq!(m.get(0, 2), 1.0);
        assert_eq!(m.get(0, 3), 0.0);
        assert_eq!(m.get(1, 3), 1.0);
        assert_eq!(m.get(0, 1), 1.0);
    }

    #[test]
    fn variants_symmetric_with_unit_diagonal() {
        for variant in [
            SpacetimeVariant::CrossSpacetime,
            SpacetimeVariant::GridLike,
            SpacetimeVariant::GridLikeDenseSelf,
        ] {
            let st = build_variant(&p2_tilde(), 3, variant).unwrap();
            let m = st.raw();
            for i in 0..m.n() {
                assert_eq!(m.get(i, i), 1.0);
                for j in 0..m.n() {
                    assert_eq!(m.get(i, j), m.get(j, i));
                }
            }
        }
    }

    #[test]
    fn st_family_tau1_matches_spatial() {
        let t = ntu25();
        let tilde = add_self_loops(&build_adjacency::<f64>(&t)).unwrap();
        let st = st_k_adjacency(&tile_block_adjacency(&tilde, 1).unwrap(), 4).unwrap();
        let spatial = KAdjacencySet::<f64>::build(&t, 4).unwrap();
        assert_eq!(st.k_raw(), spatial.raw());
        assert_eq!(st.k_normalized(), spatial.normalized());
    }

    #[test]
    fn complete_window_graph_family() {
        // P2 with tau=2 tiles to the complete graph on 4 nodes: diameter 1.
        let st = st_k_adjacency(&tile_block_adjacency(&p2_tilde(), 2).unwrap(), 2).unwrap();
        assert!(st.k_raw()[1].values().iter().all(|&v| v == 1.0));
        assert!(st.k_raw()[2].is_identity());
    }

    #[test]
    fn window_family_invariants_ntu() {
        let t = ntu25();
        let tilde = add_self_loops(&build_adjacency::<f64>(&t)).unwrap();
        for tau in [3, 5] {
            let st = st_k_adjacency(&tile_block_adjacency(&tilde, tau).unwrap(), 5).unwrap();
            // In the dense cross-spacetime graph the window diameter equals
            // the spatial diameter, so scales up to 5 stay below it.
            check_family_invariants(st.k_raw(), graph_diameter(&t)).unwrap();
        }
    }

    #[test]
    fn cross_spacetime_degree_structure() {
        // Every copy of joint v has degree tau * deg(v) counting tiled
        // self-loops.
        let t = ntu25();
        let tilde = add_self_loops(&build_adjacency::<f64>(&t)).unwrap();
        let tau = 3;
        let st = tile_block_adjacency(&tilde, tau).unwrap();
        let spatial_deg = tilde.row_sums();
        let st_deg = st.raw().row_sums();
        for b in 0..tau {
            for v in 0..25 {
                assert_eq!(st_deg[b * 25 + v], spatial_deg[v] * tau as f64);
            }
        }
    }

    #[test]
    fn distance_collapse_on_window_graph() {
        let t = ntu25();
        let tilde = add_self_loops(&build_adjacency::<f64>(&t)).unwrap();
        let n = 25;
        let spatial: Vec<Vec<usize>> = (0..n).map(|s| t.bfs_distances(s)).collect();
        for tau in [3usize, 5] {
            let st = tile_block_adjacency(&tilde, tau).unwrap();
            for u in 0..n {
                let d = adjacency_bfs_distances(st.raw(), u);
                for t2 in 0..tau {
                    for v in 0..n {
                        let got = d[t2 * n + v];
                        if v == u {
                            let want = if t2 == 0 { 0 } else { 1 };
                            assert_eq!(got, want);
                        } else {
                            assert_eq!(got, spatial[u][v]);
                        }
                    }
                }
            }
        }
    }
}
