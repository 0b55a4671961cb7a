//! Deterministic dynamic count of small connected components.
//!
//! Maintains the exact number of components with at most `k = ⌈1/ε⌉`
//! vertices. Components larger than `k` number at most `nis/k ≤ ε·nis`, so
//! the count approximates the total component count within `ε·nis(G)`.
//! Each update runs three BFS explorations capped at `k + 1` vertices,
//! which is O(1/ε²) worst-case work.

use crate::error::{Error, Result};
use crate::graph::{DynamicGraph, LimitedBfs, VertexId};

/// Size threshold `⌈1/ε⌉` for `0 < ε ≤ 1`.
pub fn size_threshold(eps: f64) -> Result<usize> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::Parameter(format!(
            "eps must lie in (0, 1], got {eps}"
        )));
    }
    Ok((1.0 / eps).ceil() as usize)
}

#[derive(Debug, Clone)]
pub struct SmallCcCounter {
    graph: DynamicGraph,
    k: usize,
    count: usize,
    bfs: LimitedBfs,
    explorations: u64,
}

impl SmallCcCounter {
    /// Counts the small components of `graph` with the static sweep.
    pub fn preprocess(graph: DynamicGraph, eps: f64) -> Result<Self> {
        let k = size_threshold(eps)?;
        Ok(Self::with_threshold(graph, k))
    }

    pub fn with_threshold(graph: DynamicGraph, k: usize) -> Self {
        assert!(k >= 1);
        let count = static_small_count(&graph, k);
        SmallCcCounter {
            bfs: LimitedBfs::new(graph.n()),
            graph,
            k,
            count,
            explorations: 0,
        }
    }

    pub fn graph(&self) -> &DynamicGraph {
        &self.graph
    }

    pub fn threshold(&self) -> usize {
        self.k
    }

    /// The maintained count of components with at most `k` vertices.
    pub fn estimate(&self) -> usize {
        self.count
    }

    /// `(explorations, vertices marked, adjacency entries scanned)` so far.
    pub fn work(&self) -> (u64, u64, u64) {
        let (v, e) = self.bfs.work();
        (self.explorations, v, e)
    }

    /// Capped size of the component of `x`: `min(|C(x)|, k + 1)`.
    fn probe(&mut self, x: VertexId) -> usize {
        self.explorations += 1;
        self.bfs.explore(&self.graph, x, self.k + 1).reached
    }

    pub fn insert(&mut self, u: VertexId, v: VertexId) -> Result<bool> {
        self.graph.check_vertex(u)?;
        self.graph.check_vertex(v)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if self.graph.has_edge(u, v) {
            return Ok(false);
        }
        let k = self.k;
        let su0 = self.probe(u);
        let sv0 = self.probe(v);
        self.graph.insert_edge(u, v)?;
        let su1 = self.probe(u);
        match (su0 <= k, sv0 <= k) {
            (true, false) | (false, true) => self.count -= 1,
            (true, true) => {
                if su1 > k {
                    self.count -= 2;
                } else if su1 != su0 {
                    self.count -= 1;
                }
            }
            (false, false) => {}
        }
        Ok(true)
    }

    pub fn delete(&mut self, u: VertexId, v: VertexId) -> bool {
        if !self.graph.has_edge(u, v) {
            return false;
        }
        let k = self.k;
        let su0 = self.probe(u);
        self.graph.delete_edge(u, v);
        let su1 = self.probe(u);
        let sv1 = self.probe(v);
        match (su1 <= k, sv1 <= k) {
            (true, false) | (false, true) => self.count += 1,
            (true, true) => {
                if su0 > k {
                    self.count += 2;
                } else if su0 != su1 {
                    self.count += 1;
                }
            }
            (false, false) => {}
        }
        true
    }
}

/// One sweep over all vertices: BFS from each unvisited vertex until `k + 1`
/// new vertices are found, a previously visited vertex is hit, or the
/// component is exhausted. Only exhausted components of size at most `k`
/// are counted. O(n·k) total.
pub fn static_small_count(graph: &DynamicGraph, k: usize) -> usize {
    let n = graph.n();
    // 0 = unvisited, otherwise 1 + the start vertex of the search that found it.
    let mut owner = vec![0u32; n];
    let mut frontier = Vec::with_capacity(k + 1);
    let mut count = 0;
    for s in 0..n as VertexId {
        if owner[s as usize] != 0 {
            continue;
        }
        let id = s + 1;
        owner[s as usize] = id;
        frontier.clear();
        frontier.push(s);
        let mut head = 0;
        let mut exhausted = true;
        'search: while head < frontier.len() {
            let x = frontier[head];
            head += 1;
            for y in graph.neighbors(x) {
                match owner[y as usize] {
                    o if o == id => continue,
                    0 if frontier.len() <= k => {
                        owner[y as usize] = id;
                        frontier.push(y);
                    }
                    _ => {
                        exhausted = false;
                        break 'search;
                    }
                }
            }
        }
        if exhausted && frontier.len() <= k {
            count += 1;
        }
    }
    count
}
