//! Brute-force reference computations.
//!
//! Everything here recomputes from the raw edge list and shares no state with
//! the maintained structures.

use crate::error::{Error, Result};
use crate::graph::VertexId;

/// Disjoint-set forest with union by size and path halving.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    sets: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
            sets: n,
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns `true` if `a` and `b` were in different sets.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.sets -= 1;
        true
    }

    pub fn sets(&self) -> usize {
        self.sets
    }

    /// Sizes of all sets, one entry per root.
    pub fn set_sizes(&mut self) -> Vec<usize> {
        let roots: Vec<usize> = (0..self.parent.len())
            .filter(|&x| self.find(x) == x)
            .collect();
        roots.into_iter().map(|x| self.size[x]).collect()
    }
}

fn union_all(edges: &[(VertexId, VertexId)], n: usize) -> UnionFind {
    let mut uf = UnionFind::new(n);
    for &(u, v) in edges {
        uf.union(u as usize, v as usize);
    }
    uf
}

/// Number of connected components.
pub fn exact_ncc(edges: &[(VertexId, VertexId)], n: usize) -> usize {
    union_all(edges, n).sets()
}

/// Number of connected components by explicit traversal; an implementation
/// independent of [`exact_ncc`] for cross-checking.
pub fn exact_ncc_bfs(edges: &[(VertexId, VertexId)], n: usize) -> usize {
    component_sizes_bfs(edges, n).len()
}

/// Component sizes by depth-first traversal over an adjacency list.
pub fn component_sizes_bfs(edges: &[(VertexId, VertexId)], n: usize) -> Vec<usize> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u as usize].push(v as usize);
        adj[v as usize].push(u as usize);
    }
    let mut seen = vec![false; n];
    let mut sizes = Vec::new();
    let mut stack = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        stack.push(s);
        let mut size = 0;
        while let Some(x) = stack.pop() {
            size += 1;
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        sizes.push(size);
    }
    sizes
}

/// Number of connected components with at most `k` vertices.
pub fn exact_nscc(edges: &[(VertexId, VertexId)], n: usize, k: usize) -> usize {
    union_all(edges, n)
        .set_sizes()
        .into_iter()
        .filter(|&s| s <= k)
        .count()
}

/// Number of vertices with at least one incident edge.
pub fn exact_nis(edges: &[(VertexId, VertexId)], n: usize) -> usize {
    let mut touched = vec![false; n];
    for &(u, v) in edges {
        touched[u as usize] = true;
        touched[v as usize] = true;
    }
    touched.into_iter().filter(|&t| t).count()
}

/// Minimum spanning forest weight by Kruskal's algorithm.
pub fn exact_msf_weight(edges: &[(VertexId, VertexId, f64)], n: usize) -> f64 {
    let mut sorted = edges.to_vec();
    sorted.sort_by(|a, b| a.2.total_cmp(&b.2));
    let mut uf = UnionFind::new(n);
    sorted
        .into_iter()
        .filter(|&(u, v, _)| uf.union(u as usize, v as usize))
        .map(|(_, _, w)| w)
        .sum()
}

/// `n − W·c⁽ᵂ⁾ + Σ_{i=1}^{W−1} c⁽ⁱ⁾` for integer weights in `1..=W`, where
/// `c⁽ⁱ⁾` counts components of the subgraph with edges of weight at most `i`.
///
/// Equals the MSF weight exactly. The sum starts at `i = 1`: a term for
/// `i = 0` would add `c⁽⁰⁾ = n` and break the identity.
pub fn exact_integer_msf_identity(
    edges: &[(VertexId, VertexId, f64)],
    n: usize,
    w_max: u32,
) -> Result<f64> {
    let mut by_weight = vec![Vec::new(); w_max as usize + 1];
    for &(u, v, w) in edges {
        if w.fract() != 0.0 || w < 1.0 || w > w_max as f64 {
            return Err(Error::WeightOutOfRange {
                weight: w,
                max: w_max as f64,
            });
        }
        by_weight[w as usize].push((u, v));
    }
    let mut uf = UnionFind::new(n);
    let mut total = n as i64;
    for (i, level) in by_weight.iter().enumerate().skip(1) {
        for &(u, v) in level {
            uf.union(u as usize, v as usize);
        }
        let c = uf.sets() as i64;
        if i == w_max as usize {
            total -= w_max as i64 * c;
        } else {
            total += c;
        }
    }
    Ok(total as f64)
}

/// `true` iff no edge is monochromatic and every color lies in `1..=delta+1`.
pub fn is_proper_coloring(edges: &[(VertexId, VertexId)], colors: &[u32], delta: u32) -> bool {
    colors.iter().all(|&c| (1..=delta + 1).contains(&c))
        && edges
            .iter()
            .all(|&(u, v)| colors[u as usize] != colors[v as usize])
}

/// Number of monochromatic edges.
pub fn conflict_count(edges: &[(VertexId, VertexId)], colors: &[u32]) -> usize {
    edges
        .iter()
        .filter(|&&(u, v)| colors[u as usize] == colors[v as usize])
        .count()
}

/// Ground truth for a weighted graph snapshot, recomputed on every call.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub ncc: usize,
    pub nis: usize,
    pub nscc_k: usize,
    pub msf_weight: f64,
    pub coloring_ok: bool,
}

impl OracleReport {
    pub fn compute(
        edges: &[(VertexId, VertexId, f64)],
        n: usize,
        k: usize,
        coloring: Option<(&[u32], u32)>,
    ) -> Self {
        let plain: Vec<_> = edges.iter().map(|&(u, v, _)| (u, v)).collect();
        OracleReport {
            ncc: exact_ncc(&plain, n),
            nis: exact_nis(&plain, n),
            nscc_k: exact_nscc(&plain, n, k),
            msf_weight: exact_msf_weight(edges, n),
            coloring_ok: coloring
                .map(|(colors, delta)| is_proper_coloring(&plain, colors, delta))
                .unwrap_or(true),
        }
    }
}
