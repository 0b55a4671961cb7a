//! Fixed-vertex-set simple graph with the primitives the estimators need.

use indexmap::IndexSet;

use crate::error::{Error, Result};

pub type VertexId = u32;

/// A single operation of an update stream.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UpdateOp {
    /// Insert edge `(u, v)`; unweighted streams carry weight 1.
    Insert {
        u: VertexId,
        v: VertexId,
        weight: f64,
    },
    Delete {
        u: VertexId,
        v: VertexId,
    },
    Query,
}

impl UpdateOp {
    pub fn insert(u: VertexId, v: VertexId) -> Self {
        UpdateOp::Insert { u, v, weight: 1.0 }
    }

    pub fn delete(u: VertexId, v: VertexId) -> Self {
        UpdateOp::Delete { u, v }
    }
}

/// Simple undirected graph over vertices `0..n`.
///
/// Neighbor sets are insertion-ordered hash sets with swap removal, so
/// membership, insertion and deletion are expected O(1) and iteration order
/// depends only on the update history.
#[derive(Debug, Clone, Default)]
pub struct DynamicGraph {
    adj: Vec<IndexSet<VertexId>>,
    edges: usize,
    nis: usize,
}

impl DynamicGraph {
    pub fn new(n: usize) -> Self {
        DynamicGraph {
            adj: vec![IndexSet::new(); n],
            edges: 0,
            nis: 0,
        }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut g = DynamicGraph::new(n);
        for (u, v) in edges {
            g.insert_edge(u, v)?;
        }
        Ok(g)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges
    }

    /// Number of vertices with at least one incident edge.
    #[inline]
    pub fn nis(&self) -> usize {
        self.nis
    }

    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v as usize].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(IndexSet::len).max().unwrap_or(0)
    }

    #[inline]
    pub fn neighbors(&self, v: VertexId) -> impl ExactSizeIterator<Item = VertexId> + '_ {
        self.adj[v as usize].iter().copied()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adj.get(u as usize).is_some_and(|set| set.contains(&v))
    }

    /// Edges as `(min, max)` pairs.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, set)| {
            let u = u as VertexId;
            set.iter().filter(move |&&v| u < v).map(move |&v| (u, v))
        })
    }

    pub(crate) fn check_vertex(&self, v: VertexId) -> Result<()> {
        if (v as usize) < self.n() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n(),
            })
        }
    }

    /// Inserts `(u, v)`. Returns `Ok(false)` if the edge was already present.
    pub fn insert_edge(&mut self, u: VertexId, v: VertexId) -> Result<bool> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if !self.adj[u as usize].insert(v) {
            return Ok(false);
        }
        self.adj[v as usize].insert(u);
        self.edges += 1;
        for x in [u, v] {
            if self.adj[x as usize].len() == 1 {
                self.nis += 1;
            }
        }
        Ok(true)
    }

    /// Deletes `(u, v)`. Returns `false` if the edge was absent.
    pub fn delete_edge(&mut self, u: VertexId, v: VertexId) -> bool {
        if !self.has_edge(u, v) {
            return false;
        }
        self.adj[u as usize].swap_remove(&v);
        self.adj[v as usize].swap_remove(&u);
        self.edges -= 1;
        for x in [u, v] {
            if self.adj[x as usize].is_empty() {
                self.nis -= 1;
            }
        }
        true
    }
}

/// Result of a capped breadth-first exploration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BfsOutcome {
    /// `min(|component|, cap)`.
    pub reached: usize,
    /// The whole component was exhausted within the cap.
    pub closed: bool,
}

/// Reusable scratch space for capped BFS.
///
/// Visited marks are epoch-stamped so a call never clears O(n) memory.
#[derive(Debug, Clone, Default)]
pub struct LimitedBfs {
    marks: Vec<u32>,
    epoch: u32,
    order: Vec<VertexId>,
    vertices_touched: u64,
    edges_scanned: u64,
}

impl LimitedBfs {
    pub fn new(n: usize) -> Self {
        LimitedBfs {
            marks: vec![0; n],
            ..Default::default()
        }
    }

    fn next_epoch(&mut self, n: usize) {
        if self.marks.len() < n {
            self.marks.resize(n, 0);
        }
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.marks.iter_mut().for_each(|m| *m = 0);
            self.epoch = 1;
        }
    }

    /// Explores the component of `start`, stopping as soon as a vertex beyond
    /// the first `cap` would be discovered. Only the edges of the first `cap`
    /// discovered vertices are scanned.
    pub fn explore(&mut self, g: &DynamicGraph, start: VertexId, cap: usize) -> BfsOutcome {
        assert!(cap >= 1, "bfs cap must be at least 1");
        self.next_epoch(g.n());
        let epoch = self.epoch;
        self.order.clear();
        self.order.push(start);
        self.marks[start as usize] = epoch;
        self.vertices_touched += 1;

        let mut head = 0;
        while head < self.order.len() {
            let x = self.order[head];
            head += 1;
            for y in g.neighbors(x) {
                self.edges_scanned += 1;
                if self.marks[y as usize] == epoch {
                    continue;
                }
                if self.order.len() == cap {
                    return BfsOutcome {
                        reached: cap,
                        closed: false,
                    };
                }
                self.marks[y as usize] = epoch;
                self.order.push(y);
                self.vertices_touched += 1;
            }
        }
        BfsOutcome {
            reached: self.order.len(),
            closed: true,
        }
    }

    /// Vertices marked by the most recent call, in discovery order.
    pub fn visited(&self) -> &[VertexId] {
        &self.order
    }

    /// Cumulative `(vertices marked, adjacency entries scanned)`.
    pub fn work(&self) -> (u64, u64) {
        (self.vertices_touched, self.edges_scanned)
    }
}
