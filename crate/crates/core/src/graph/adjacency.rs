//! Dense adjacency matrices and their normalized forms.

use ndarray::{Array2, ArrayView2};

use crate::error::{Error, Result};
use crate::graph::topology::SkeletonTopology;
use crate::scalar::Scalar;

/// Dense square matrix over joint (or spacetime-node) indices.
///
/// Graphs here never exceed a few hundred nodes, so a dense representation
/// is both simpler and faster than sparse formats.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjacencyMatrix<S: Scalar> {
    n: usize,
    values: Vec<S>,
    symmetric: bool,
}

impl<S: Scalar> AdjacencyMatrix<S> {
    pub fn from_vec(n: usize, values: Vec<S>, symmetric: bool) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::shape(
                "AdjacencyMatrix::from_vec",
                format!("expected {} values for n={n}, got {}", n * n, values.len()),
            ));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(Error::Numerical("non-finite adjacency entry".into()));
        }
        let m = AdjacencyMatrix { n, values, symmetric };
        if symmetric {
            for i in 0..n {
                for j in (i + 1)..n {
                    if m.get(i, j) != m.get(j, i) {
                        return Err(Error::Numerical(format!(
                            "matrix flagged symmetric but differs at ({i},{j})"
                        )));
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn zeros(n: usize) -> Self {
        AdjacencyMatrix {
            n,
            values: vec![S::zero(); n * n],
            symmetric: true,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, S::one());
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> S {
        self.values[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.values[i * self.n + j] = v;
    }

    pub fn view(&self) -> ArrayView2<'_, S> {
        ArrayView2::from_shape((self.n, self.n), &self.values).expect("square buffer")
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.n != rhs.n {
            return Err(Error::shape(
                "AdjacencyMatrix::matmul",
                format!("{} vs {}", self.n, rhs.n),
            ));
        }
        let out: Array2<S> = self.view().dot(&rhs.view());
        let values = out.into_raw_vec();
        Ok(AdjacencyMatrix {
            n: self.n,
            values,
            symmetric: false,
        })
    }

    /// Row sums, i.e. the diagonal of the degree matrix.
    pub fn row_sums(&self) -> Vec<S> {
        (0..self.n)
            .map(|i| {
                self.values[i * self.n..(i + 1) * self.n]
                    .iter()
                    .fold(S::zero(), |a, &b| a + b)
            })
            .collect()
    }

    pub fn num_nonzero(&self) -> usize {
        self.values.iter().filter(|&&v| v != S::zero()).count()
    }

    pub fn is_binary(&self) -> bool {
        self.values
            .iter()
            .all(|&v| v == S::zero() || v == S::one())
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                let want = if i == j { S::one() } else { S::zero() };
                self.get(i, j) == want
            })
        })
    }

    /// Row-major CSV with 17 significant digits, one row per line.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n)
                .map(|j| format!("{:.16e}", self.get(i, j).to_f64()))
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// The normalization applied before adjacency powering.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalizationMode {
    /// Add self-loops, then symmetric degree normalization.
    SymSelfLoop,
    /// Row-stochastic normalization of the raw adjacency.
    RandomWalk,
    /// Symmetric normalized Laplacian of the raw adjacency.
    SymLaplacian,
}

impl NormalizationMode {
    pub fn name(self) -> &'static str {
        match self {
            NormalizationMode::SymSelfLoop => "sym-self-loop",
            NormalizationMode::RandomWalk => "random-walk",
            NormalizationMode::SymLaplacian => "sym-laplacian",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "sym-self-loop" => Some(NormalizationMode::SymSelfLoop),
            "random-walk" => Some(NormalizationMode::RandomWalk),
            "sym-laplacian" => Some(NormalizationMode::SymLaplacian),
            _ => None,
        }
    }
}

/// Binary symmetric adjacency with zero diagonal from a bone list.
pub fn build_adjacency<S: Scalar>(topology: &SkeletonTopology) -> AdjacencyMatrix<S> {
    let n = topology.num_joints();
    let mut a = AdjacencyMatrix::zeros(n);
    for &(i, j) in topology.edges() {
        a.set(i, j, S::one());
        a.set(j, i, S::one());
    }
    a
}

/// Returns `A + I`; rejects input whose diagonal already carries self-loops.
pub fn add_self_loops<S: Scalar>(a: &AdjacencyMatrix<S>) -> Result<AdjacencyMatrix<S>> {
    let n = a.n();
    for i in 0..n {
        if a.get(i, i) != S::zero() {
            return Err(Error::AlreadySelfLooped);
        }
    }
    let mut out = a.clone();
    for i in 0..n {
        out.set(i, i, S::one());
    }
    Ok(out)
}

/// Symmetric degree normalization `D^{-1/2} M D^{-1/2}` with `D = diag(row sums)`.
pub fn sym_normalize<S: Scalar>(m: &AdjacencyMatrix<S>) -> Result<AdjacencyMatrix<S>> {
    let n = m.n();
    let sums = m.row_sums();
    let mut inv_sqrt = Vec::with_capacity(n);
    for (row, &s) in sums.iter().enumerate() {
        if s <= S::zero() {
            return Err(Error::ZeroRowSum { row });
        }
        inv_sqrt.push(S::one() / s.sqrt());
    }
    let mut out = m.clone();
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, m.get(i, j) * inv_sqrt[i] * inv_sqrt[j]);
        }
    }
    Ok(out)
}

/// Row-stochastic normalization `D^{-1} M`.
fn random_walk_normalize<S: Scalar>(m: &AdjacencyMatrix<S>) -> Result<AdjacencyMatrix<S>> {
    let n = m.n();
    let sums = m.row_sums();
    let mut out = m.clone();
    for i in 0..n {
        if sums[i] <= S::zero() {
            return Err(Error::ZeroRowSum { row: i });
        }
        for j in 0..n {
            out.set(i, j, m.get(i, j) / sums[i]);
        }
    }
    out.symmetric = false;
    Ok(out)
}

/// Normalizes `A` according to `mode`; input is the raw adjacency (zero
/// diagonal).
pub fn normalize_adjacency<S: Scalar>(
    a: &AdjacencyMatrix<S>,
    mode: NormalizationMode,
) -> Result<AdjacencyMatrix<S>> {
    match mode {
        NormalizationMode::SymSelfLoop => sym_normalize(&add_self_loops(a)?),
        NormalizationMode::RandomWalk => random_walk_normalize(a),
        NormalizationMode::SymLaplacian => {
            let sym = sym_normalize(a)?;
            let n = a.n();
            let mut out = AdjacencyMatrix::identity(n);
            for i in 0..n {
                for j in 0..n {
                    out.set(i, j, out.get(i, j) - sym.get(i, j));
                }
            }
            Ok(out)
        }
    }
}

/// `k`-th power of the normalized adjacency; the basis of the entangled
/// multi-scale aggregation and of the weighting-bias diagnostic.
pub fn powered_adjacency<S: Scalar>(
    a: &AdjacencyMatrix<S>,
    k: usize,
    mode: NormalizationMode,
) -> Result<AdjacencyMatrix<S>> {
    let n = a.n();
    if k == 0 {
        return Ok(AdjacencyMatrix::identity(n));
    }
    let base = normalize_adjacency(a, mode)?;
    let mut out = base.clone();
    for _ in 1..k {
        out = out.matmul(&base)?;
    }
    out.symmetric = mode != NormalizationMode::RandomWalk;
    Ok(out)
}

/// Boolean reachability matrices: `reach[k][i][j]` is true iff
/// `d(i, j) <= k` on the self-looped graph. Avoids the overflow of numeric
/// powering for large `k`.
pub(crate) fn bool_reachability(a_tilde: &AdjacencyMatrix<impl Scalar>, max_k: usize) -> Vec<Vec<bool>> {
    let n = a_tilde.n();
    let adj: Vec<bool> = a_tilde.values().iter().map(|&v| v != num_traits::zero()).collect();
    let mut reach = Vec::with_capacity(max_k + 1);
    let mut ident = vec![false; n * n];
    for i in 0..n {
        ident[i * n + i] = true;
    }
    reach.push(ident);
    for k in 1..=max_k {
        let prev = &reach[k - 1];
        let mut next = vec![false; n * n];
        for i in 0..n {
            for l in 0..n {
                if prev[i * n + l] {
                    for j in 0..n {
                        if adj[l * n + j] {
                            next[i * n + j] = true;
                        }
                    }
                }
            }
        }
        reach.push(next);
    }
    reach
}
