//! Update-stream generators.

use std::collections::{HashMap, VecDeque};

use clap::ValueEnum;
use dyngraph::cc_random::{ErrorMode, PhasedCcEstimator};
use dyngraph::coloring::{Coloring, ColoringConfig};
use dyngraph::stream::{Stream, StreamHeader, StreamMode};
use dyngraph::{DynamicGraph, Error, Result, UpdateOp, VertexId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::adversary::AdaptiveAdversary;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    /// Independent random insertions and deletions.
    RandomChurn,
    /// Inserts until the edge count reaches a target, then evicts the oldest
    /// edge before every insertion.
    SlidingWindow,
    /// Prefers insertions between equally colored endpoints of a shadow
    /// coloring seeded like the structure under test.
    ConflictHeavy,
    /// Updates chosen after reading the answers of a shadow component
    /// estimator.
    AdaptiveScript,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenParams {
    pub kind: GenKind,
    pub mode: StreamMode,
    pub n: usize,
    pub ops: usize,
    /// Degree bound respected by every insertion.
    pub delta: u32,
    pub max_weight: f64,
    /// Draw weights from `{1, …, ⌊W⌋}` instead of `[1, W]`.
    pub integer_weights: bool,
    pub seed: u64,
    /// Probability that a churn step inserts.
    pub insert_prob: f64,
    /// Edge count for the sliding window; defaults to `n·Δ/4`.
    pub target_edges: Option<usize>,
    /// Emit a query line after every this many updates.
    pub query_every: Option<usize>,
    /// Parameters of the shadow estimator read by the adaptive script.
    pub eps: f64,
    pub p: f64,
}

impl GenParams {
    pub fn new(kind: GenKind, mode: StreamMode, n: usize, ops: usize, delta: u32) -> Self {
        GenParams {
            kind,
            mode,
            n,
            ops,
            delta,
            max_weight: 1.0,
            integer_weights: false,
            seed: 0,
            insert_prob: 0.5,
            target_edges: None,
            query_every: None,
            eps: 0.2,
            p: 0.05,
        }
    }

    fn window_target(&self) -> usize {
        self.target_edges
            .unwrap_or(self.n * self.delta as usize / 4)
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Parameter(m));
        if self.n < 2 {
            return bad(format!("need at least 2 vertices, got {}", self.n));
        }
        if self.n > VertexId::MAX as usize {
            return bad(format!("n = {} exceeds the vertex id range", self.n));
        }
        if self.delta == 0 {
            return bad("delta must be at least 1 to allow any insertion".into());
        }
        if !(self.max_weight >= 1.0 && self.max_weight.is_finite()) {
            return bad(format!(
                "W must be finite and at least 1, got {}",
                self.max_weight
            ));
        }
        if !(0.0..=1.0).contains(&self.insert_prob) {
            return bad(format!(
                "insert probability {} outside [0, 1]",
                self.insert_prob
            ));
        }
        let capacity = self.n * (self.delta as usize).min(self.n - 1) / 2;
        if self.kind == GenKind::SlidingWindow {
            let target = self.window_target();
            if target == 0 || target > capacity {
                return bad(format!(
                    "target of {target} edges infeasible: n = {} and delta = {} allow 1..={capacity}",
                    self.n, self.delta
                ));
            }
        }
        if self.kind == GenKind::ConflictHeavy && self.mode != StreamMode::Coloring {
            return bad("conflict-heavy streams need mode=coloring".into());
        }
        if self.kind == GenKind::AdaptiveScript && self.mode != StreamMode::Cc {
            return bad("adaptive-script streams need mode=cc".into());
        }
        Ok(())
    }
}

/// Edge set with uniform random access and degree counts.
#[derive(Debug, Clone)]
pub struct EdgePool {
    edges: Vec<(VertexId, VertexId)>,
    index: HashMap<(VertexId, VertexId), usize>,
    degree: Vec<u32>,
}

fn key(u: VertexId, v: VertexId) -> (VertexId, VertexId) {
    (u.min(v), u.max(v))
}

impl EdgePool {
    pub fn new(n: usize) -> Self {
        EdgePool {
            edges: Vec::new(),
            index: HashMap::new(),
            degree: vec![0; n],
        }
    }

    pub fn n(&self) -> usize {
        self.degree.len()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn degree(&self, v: VertexId) -> u32 {
        self.degree[v as usize]
    }

    pub fn contains(&self, u: VertexId, v: VertexId) -> bool {
        self.index.contains_key(&key(u, v))
    }

    pub fn insert(&mut self, u: VertexId, v: VertexId) -> bool {
        let k = key(u, v);
        if u == v || self.index.contains_key(&k) {
            return false;
        }
        self.index.insert(k, self.edges.len());
        self.edges.push(k);
        self.degree[u as usize] += 1;
        self.degree[v as usize] += 1;
        true
    }

    pub fn remove(&mut self, u: VertexId, v: VertexId) -> bool {
        let Some(i) = self.index.remove(&key(u, v)) else {
            return false;
        };
        self.edges.swap_remove(i);
        if let Some(&moved) = self.edges.get(i) {
            self.index.insert(moved, i);
        }
        self.degree[u as usize] -= 1;
        self.degree[v as usize] -= 1;
        true
    }

    pub fn random_edge<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<(VertexId, VertexId)> {
        if self.edges.is_empty() {
            None
        } else {
            Some(self.edges[rng.random_range(0..self.edges.len())])
        }
    }

    /// Whether `(u, v)` could be inserted without breaking simplicity or the
    /// degree bound.
    pub fn insertable(&self, u: VertexId, v: VertexId, delta: u32) -> bool {
        u != v && self.degree(u) < delta && self.degree(v) < delta && !self.contains(u, v)
    }

    /// A uniformly random insertable pair, if one turns up within `tries` draws.
    pub fn random_insertable<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        delta: u32,
        tries: usize,
    ) -> Option<(VertexId, VertexId)> {
        let n = self.n() as VertexId;
        (0..tries)
            .map(|_| (rng.random_range(0..n), rng.random_range(0..n)))
            .find(|&(u, v)| self.insertable(u, v, delta))
    }

    pub fn to_graph(&self) -> DynamicGraph {
        DynamicGraph::from_edges(self.n(), self.edges.iter().copied()).expect("valid pool")
    }
}

const TRIES: usize = 64;

struct Emitter {
    ops: Vec<UpdateOp>,
    updates: usize,
    query_every: Option<usize>,
}

impl Emitter {
    fn push(&mut self, op: UpdateOp) {
        self.ops.push(op);
        self.updates += 1;
        if let Some(q) = self.query_every {
            if q > 0 && self.updates.is_multiple_of(q) {
                self.ops.push(UpdateOp::Query);
            }
        }
    }
}

fn weight<R: Rng + ?Sized>(params: &GenParams, rng: &mut R) -> f64 {
    if params.mode != StreamMode::Msf {
        1.0
    } else if params.integer_weights {
        rng.random_range(1..=params.max_weight.floor() as u32) as f64
    } else {
        rng.random_range(1.0..=params.max_weight)
    }
}

/// Generates a stream of `params.ops` updates (query lines not counted).
pub fn generate(params: &GenParams) -> Result<Stream> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut pool = EdgePool::new(params.n);
    let mut out = Emitter {
        ops: Vec::with_capacity(params.ops),
        updates: 0,
        query_every: params.query_every,
    };
    let delta = params.delta;
    match params.kind {
        GenKind::RandomChurn => {
            while out.updates < params.ops {
                let insert = pool.is_empty() || rng.random_bool(params.insert_prob);
                let pair = if insert {
                    pool.random_insertable(&mut rng, delta, TRIES)
                } else {
                    None
                };
                if let Some((u, v)) = pair {
                    pool.insert(u, v);
                    let w = weight(params, &mut rng);
                    out.push(UpdateOp::Insert { u, v, weight: w });
                } else if let Some((u, v)) = pool.random_edge(&mut rng) {
                    pool.remove(u, v);
                    out.push(UpdateOp::delete(u, v));
                } else {
                    return Err(Error::Parameter("no insertable pair found".into()));
                }
            }
        }
        GenKind::SlidingWindow => {
            let target = params.window_target();
            let mut window = VecDeque::new();
            while out.updates < params.ops {
                let pair = if pool.len() < target {
                    pool.random_insertable(&mut rng, delta, TRIES)
                } else {
                    None
                };
                if let Some((u, v)) = pair {
                    pool.insert(u, v);
                    window.push_back((u, v));
                    let w = weight(params, &mut rng);
                    out.push(UpdateOp::Insert { u, v, weight: w });
                } else if let Some((u, v)) = window.pop_front() {
                    pool.remove(u, v);
                    out.push(UpdateOp::delete(u, v));
                } else {
                    return Err(Error::Parameter("no insertable pair found".into()));
                }
            }
        }
        GenKind::ConflictHeavy => {
            let mut shadow = Coloring::new(params.n, ColoringConfig::new(delta, params.seed))?;
            while out.updates < params.ops {
                let insert = pool.is_empty() || rng.random_bool(params.insert_prob);
                let pair = if insert {
                    let candidates: Vec<_> = (0..8)
                        .filter_map(|_| pool.random_insertable(&mut rng, delta, TRIES))
                        .collect();
                    candidates
                        .iter()
                        .copied()
                        .find(|&(u, v)| shadow.color_of(u) == shadow.color_of(v))
                        .or(candidates.first().copied())
                } else {
                    None
                };
                if let Some((u, v)) = pair {
                    pool.insert(u, v);
                    shadow.insert(u, v)?;
                    out.push(UpdateOp::insert(u, v));
                } else if let Some((u, v)) = pool.random_edge(&mut rng) {
                    pool.remove(u, v);
                    shadow.delete(u, v);
                    out.push(UpdateOp::delete(u, v));
                } else {
                    return Err(Error::Parameter("no insertable pair found".into()));
                }
            }
        }
        GenKind::AdaptiveScript => {
            let mut shadow = PhasedCcEstimator::preprocess(
                DynamicGraph::new(params.n),
                params.eps,
                params.p,
                0,
                ErrorMode::RelativeThr,
                params.seed,
            )?;
            let mut adversary = AdaptiveAdversary::new(params.n, delta);
            while out.updates < params.ops {
                let op = adversary.next_op(shadow.estimate(), &mut rng);
                let thr_after = adversary.pool_nis();
                match op {
                    UpdateOp::Insert { u, v, .. } => shadow.insert(u, v, thr_after)?,
                    UpdateOp::Delete { u, v } => shadow.delete(u, v, thr_after)?,
                    UpdateOp::Query => continue,
                };
                out.push(op);
            }
        }
    }
    Ok(Stream {
        header: StreamHeader {
            n: params.n,
            delta,
            max_weight: params.max_weight,
            mode: params.mode,
        },
        ops: out.ops,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pool_swap_removal_keeps_index() {
        let mut p = EdgePool::new(5);
        assert!(p.insert(0, 1));
        assert!(p.insert(2, 1));
        assert!(p.insert(3, 4));
        assert!(!p.insert(1, 0));
        assert!(p.remove(1, 0));
        assert!(p.contains(1, 2) && p.contains(4, 3));
        assert!(p.remove(4, 3));
        assert!(p.remove(2, 1));
        assert!(p.is_empty());
        assert!((0..5).all(|v| p.degree(v) == 0));
    }

    #[test]
    fn infeasible_parameters_are_rejected() {
        let mut p = GenParams::new(GenKind::SlidingWindow, StreamMode::Cc, 10, 100, 2);
        p.target_edges = Some(11);
        assert!(generate(&p).is_err());
        p.target_edges = Some(10);
        assert!(generate(&p).is_ok());
        let p = GenParams::new(GenKind::RandomChurn, StreamMode::Cc, 10, 100, 0);
        assert!(generate(&p).is_err());
        let p = GenParams::new(GenKind::ConflictHeavy, StreamMode::Cc, 10, 100, 3);
        assert!(generate(&p).is_err());
        let p = GenParams::new(GenKind::AdaptiveScript, StreamMode::Coloring, 10, 100, 3);
        assert!(generate(&p).is_err());
    }

    #[test]
    fn queries_are_interleaved() {
        let mut p = GenParams::new(GenKind::RandomChurn, StreamMode::Cc, 10, 20, 3);
        p.query_every = Some(5);
        let s = generate(&p).unwrap();
        assert_eq!(s.ops.len(), 24);
        assert_eq!(s.ops[5], UpdateOp::Query);
    }

    #[test]
    fn integer_weights_stay_integral() {
        let mut p = GenParams::new(GenKind::RandomChurn, StreamMode::Msf, 30, 500, 29);
        p.max_weight = 4.0;
        p.integer_weights = true;
        p.insert_prob = 0.7;
        for op in generate(&p).unwrap().ops {
            if let UpdateOp::Insert { weight, .. } = op {
                assert!(weight.fract() == 0.0 && (1.0..=4.0).contains(&weight));
            }
        }
    }
}
