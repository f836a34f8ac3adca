//! Skeleton graph descriptions: joints as nodes, bones as edges.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// An undirected skeleton graph with a designated body-center joint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkeletonTopology {
    num_joints: usize,
    edges: Vec<(usize, usize)>,
    center_joint: usize,
    name: String,
}

impl SkeletonTopology {
    /// Builds a topology after validating indices, duplicates, self-edges
    /// and connectivity.
    pub fn new(
        num_joints: usize,
        edges: Vec<(usize, usize)>,
        center_joint: usize,
        name: impl Into<String>,
    ) -> Result<Self> {
        if num_joints == 0 {
            return Err(Error::InvalidTopology("num_joints must be positive".into()));
        }
        if center_joint >= num_joints {
            return Err(Error::IndexOutOfRange {
                index: center_joint,
                n: num_joints,
            });
        }
        let mut normalized = Vec::with_capacity(edges.len());
        for &(a, b) in &edges {
            if a >= num_joints || b >= num_joints {
                return Err(Error::IndexOutOfRange {
                    index: a.max(b),
                    n: num_joints,
                });
            }
            if a == b {
                return Err(Error::InvalidTopology(format!("self-edge at joint {a}")));
            }
            let e = (a.min(b), a.max(b));
            if normalized.contains(&e) {
                return Err(Error::InvalidTopology(format!("duplicate edge {e:?}")));
            }
            normalized.push(e);
        }
        let topo = SkeletonTopology {
            num_joints,
            edges: normalized,
            center_joint,
            name: name.into(),
        };
        if !topo.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(topo)
    }

    pub fn num_joints(&self) -> usize {
        self.num_joints
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn center_joint(&self) -> usize {
        self.center_joint
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_tree(&self) -> bool {
        self.edges.len() + 1 == self.num_joints
    }

    fn neighbor_lists(&self) -> Vec<Vec<usize>> {
        let mut nbrs = vec![Vec::new(); self.num_joints];
        for &(a, b) in &self.edges {
            nbrs[a].push(b);
            nbrs[b].push(a);
        }
        nbrs
    }

    /// Hop distances from `source` to every joint; unreachable joints get
    /// `usize::MAX`.
    pub fn bfs_distances(&self, source: usize) -> Vec<usize> {
        let nbrs = self.neighbor_lists();
        let mut dist = vec![usize::MAX; self.num_joints];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &v in &nbrs[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    fn is_connected(&self) -> bool {
        self.bfs_distances(0).iter().all(|&d| d != usize::MAX)
    }

    /// BFS-tree parent of each joint on the path toward the center joint;
    /// the center is its own parent.
    pub fn parents_toward_center(&self) -> Vec<usize> {
        let nbrs = self.neighbor_lists();
        let mut parent = vec![usize::MAX; self.num_joints];
        parent[self.center_joint] = self.center_joint;
        let mut queue = VecDeque::from([self.center_joint]);
        while let Some(u) = queue.pop_front() {
            for &v in &nbrs[u] {
                if parent[v] == usize::MAX {
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        parent
    }

    /// Parses the plain-text topology format: first line `N <joints> C <center>`,
    /// then one `i j` edge per line with `i < j`, all 0-based.
    pub fn parse(text: &str, name: impl Into<String>) -> Result<Self> {
        let mut offset = 0usize;
        let mut lines = Vec::new();
        for line in text.split_inclusive('\n') {
            lines.push((offset, line.trim_end_matches(['\n', '\r'])));
            offset += line.len();
        }
        // `split_inclusive` drops nothing, but a file without a trailing
        // newline still yields its last line.
        let mut it = lines.into_iter().filter(|(_, l)| !l.trim().is_empty());
        let (hoff, header) = it
            .next()
            .ok_or(Error::Parse { offset: 0, msg: "empty topology file".into() })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let bad_header = |msg: &str| Error::Parse { offset: hoff, msg: msg.into() };
        if fields.len() != 4 || fields[0] != "N" || fields[2] != "C" {
            return Err(bad_header("expected header `N <num_joints> C <center>`"));
        }
        let num_joints: usize = fields[1]
            .parse()
            .map_err(|_| bad_header("invalid joint count"))?;
        let center: usize = fields[3]
            .parse()
            .map_err(|_| bad_header("invalid center index"))?;
        let mut edges = Vec::new();
        for (loff, line) in it {
            let mut parts = line.split_whitespace();
            let parse_idx = |tok: Option<&str>| -> Result<usize> {
                tok.and_then(|t| t.parse().ok()).ok_or(Error::Parse {
                    offset: loff,
                    msg: format!("expected edge `i j`, got `{line}`"),
                })
            };
            let i = parse_idx(parts.next())?;
            let j = parse_idx(parts.next())?;
            if parts.next().is_some() {
                return Err(Error::Parse {
                    offset: loff,
                    msg: format!("trailing tokens in edge line `{line}`"),
                });
            }
            if i >= j {
                return Err(Error::Parse {
                    offset: loff,
                    msg: format!("edges must satisfy i < j, got `{line}`"),
                });
            }
            edges.push((i, j));
        }
        SkeletonTopology::new(num_joints, edges, center, name)
    }

    /// Renders the topology in the same plain-text format accepted by
    /// [`SkeletonTopology::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("N {} C {}\n", self.num_joints, self.center_joint);
        for &(i, j) in &self.edges {
            out.push_str(&format!("{i} {j}\n"));
        }
        out
    }
}

/// The 25-joint skeleton used by depth-camera captures, center at the
/// mid-spine joint.
pub fn ntu25() -> SkeletonTopology {
    SkeletonTopology::parse(include_str!("../../presets/ntu25.txt"), "ntu25")
        .expect("bundled ntu25 preset is valid")
}

/// The 18-joint 2-D pose-estimation skeleton, center at the neck.
pub fn kinetics18() -> SkeletonTopology {
    SkeletonTopology::parse(include_str!("../../presets/kinetics18.txt"), "kinetics18")
        .expect("bundled kinetics18 preset is valid")
}

/// Looks up a bundled preset by name.
pub fn preset(name: &str) -> Option<SkeletonTopology> {
    match name {
        "ntu25" => Some(ntu25()),
        "kinetics18" => Some(kinetics18()),
        _ => None,
    }
}

/// Maximum shortest-hop distance over all joint pairs.
pub fn graph_diameter(topology: &SkeletonTopology) -> usize {
    // Connectivity is a construction invariant, so every BFS is total.
    (0..topology.num_joints())
        .map(|s| {
            topology
                .bfs_distances(s)
                .into_iter()
                .max()
                .expect("at least one joint")
        })
        .max()
        .expect("at least one joint")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> SkeletonTopology {
        let edges = (0..n - 1).map(|i| (i, i + 1)).collect();
        SkeletonTopology::new(n, edges, 0, "path").unwrap()
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(matches!(
            SkeletonTopology::new(3, vec![(0, 3)], 0, "t"),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(SkeletonTopology::new(3, vec![(1, 1)], 0, "t").is_err());
        assert!(SkeletonTopology::new(3, vec![(0, 1), (1, 0)], 0, "t").is_err());
    }

    #[test]
    fn rejects_disconnected() {
        assert!(matches!(
            SkeletonTopology::new(4, vec![(0, 1), (2, 3)], 0, "t"),
            Err(Error::Disconnected)
        ));
    }

    #[test]
    fn diameter_path_and_single() {
        assert_eq!(graph_diameter(&path(4)), 3);
        let single = SkeletonTopology::new(1, vec![], 0, "dot").unwrap();
        assert_eq!(graph_diameter(&single), 0);
    }

    #[test]
    fn presets_are_trees_with_expected_size() {
        let ntu = ntu25();
        assert_eq!(ntu.num_joints(), 25);
        assert_eq!(ntu.edges().len(), 24);
        assert!(ntu.is_tree());
        assert_eq!(ntu.center_joint(), 1);

        let kin = kinetics18();
        assert_eq!(kin.num_joints(), 18);
        assert_eq!(kin.edges().len(), 17);
        assert!(kin.is_tree());
    }

    #[test]
    fn ntu_diameter_is_twelve() {
        assert_eq!(graph_diameter(&ntu25()), 12);
    }

    #[test]
    fn parse_round_trip() {
        let t = ntu25();
        let reparsed = SkeletonTopology::parse(&t.to_text(), "ntu25").unwrap();
        assert_eq!(t, reparsed);
    }

    #[test]
    fn parse_reports_offsets() {
        let text = "N 3 C 0\n0 1\nbogus\n";
        match SkeletonTopology::parse(text, "t") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 12),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn parents_point_toward_center() {
        let t = path(4);
        assert_eq!(t.parents_toward_center(), vec![0, 0, 1, 2]);
    }
}
