//! Randomized connected-component estimation.
//!
//! [`static_estimate_nis`] samples non-isolated vertices uniformly and
//! averages the inverse sizes of their (capped) components. With
//! `s = ⌈2·ln(2/p)/ε²⌉` samples and cap `⌈2/ε⌉` its error on the component
//! count of the non-isolated subgraph is at most `ε·nis` with probability
//! `1 − p`: components above the cap bias the sum by at most `ε·nis/2` and
//! Hoeffding bounds the sampling error by another `ε·nis/2`.
//!
//! [`PhasedCcEstimator`] turns that into a dynamic estimator. Updates are cut
//! into phases of `⌈ε′Ψ/4⌉` updates, where `Ψ` is the threshold value seen at
//! the start of the phase. At every phase boundary the static estimator is
//! rerun with `ε′/4` and fresh randomness; isolated vertices are added back
//! exactly. Since one update moves the component count by at most one, the
//! estimate stays within `ε′·Thr(G)` for the whole phase. No state survives a
//! phase boundary, so the guarantee also holds against adaptive update
//! sequences.

use std::collections::HashMap;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{DynamicGraph, LimitedBfs, VertexId};
use crate::oracle::UnionFind;
use crate::sampler::NonZeroSampler;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StaticEstimateConfig {
    pub eps: f64,
    pub p: f64,
    /// Number of sampled non-isolated vertices.
    pub samples: usize,
    /// Components with more vertices than this contribute zero.
    pub cap: usize,
}

impl StaticEstimateConfig {
    pub fn new(eps: f64, p: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::Parameter(format!(
                "eps must lie in (0, 1), got {eps}"
            )));
        }
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::Parameter(format!("p must lie in (0, 1), got {p}")));
        }
        let samples = (2.0 * (2.0 / p).ln() / (eps * eps)).ceil().max(1.0) as usize;
        let cap = ((2.0 / eps).ceil() as usize).max(2);
        Ok(StaticEstimateConfig {
            eps,
            p,
            samples,
            cap,
        })
    }
}

/// Estimates the number of components among non-isolated vertices.
///
/// `sampler` must index exactly the non-isolated vertices of `graph`.
pub fn static_estimate_nis<R: Rng + ?Sized>(
    graph: &DynamicGraph,
    sampler: &mut NonZeroSampler,
    cfg: &StaticEstimateConfig,
    rng: &mut R,
    bfs: &mut LimitedBfs,
) -> f64 {
    let nis = sampler.nis();
    if nis == 0 {
        return 0.0;
    }
    // Every vertex reached by one exploration has the same outcome: either
    // its whole component fits under the cap, or the component is too big.
    // Remembering outcomes makes repeated samples in a component O(1).
    let mut seen: HashMap<VertexId, f64> = HashMap::new();
    let mut sum = 0.0;
    for _ in 0..cfg.samples {
        let u = sampler.sample(rng).expect("non-empty sampler") as VertexId;
        let x = match seen.get(&u) {
            Some(&x) => x,
            None => {
                let out = bfs.explore(graph, u, cfg.cap);
                let x = if out.closed {
                    1.0 / out.reached as f64
                } else {
                    0.0
                };
                for &w in bfs.visited() {
                    seen.insert(w, x);
                }
                x
            }
        };
        sum += x;
    }
    nis as f64 * sum / cfg.samples as f64
}

/// Error model of a phased estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorMode {
    /// Error `ε′·Thr(G)` for a caller-supplied `Thr(G) ≥ nis(G)`.
    RelativeThr,
    /// Error `ε′·n`; the threshold is ignored and phases have length `⌈ε′n/4⌉`.
    AbsoluteN,
}

#[derive(Debug, Clone)]
pub struct PhasedCcEstimator {
    graph: DynamicGraph,
    sampler: NonZeroSampler,
    bfs: LimitedBfs,
    rng: ChaCha8Rng,
    eps: f64,
    static_cfg: StaticEstimateConfig,
    mode: ErrorMode,
    estimate: f64,
    /// Threshold snapshot taken at the start of the phase.
    psi: usize,
    last_thr: usize,
    phase_len: u64,
    in_phase: u64,
    updates: u64,
    recomputations: u64,
}

impl PhasedCcEstimator {
    /// Computes the exact component count of `graph` and opens the first phase.
    pub fn preprocess(
        graph: DynamicGraph,
        eps: f64,
        p: f64,
        thr0: usize,
        mode: ErrorMode,
        seed: u64,
    ) -> Result<Self> {
        let static_cfg = StaticEstimateConfig::new(eps / 4.0, p)?;
        if mode == ErrorMode::RelativeThr && thr0 < graph.nis() {
            return Err(Error::Threshold {
                thr: thr0,
                reason: format!("below nis = {}", graph.nis()),
            });
        }
        let n = graph.n();
        let mut uf = UnionFind::new(n);
        let mut degrees = vec![0u64; n];
        for (u, v) in graph.edges() {
            uf.union(u as usize, v as usize);
            degrees[u as usize] += 1;
            degrees[v as usize] += 1;
        }
        let psi = match mode {
            ErrorMode::RelativeThr => thr0,
            ErrorMode::AbsoluteN => n,
        };
        let mut est = PhasedCcEstimator {
            sampler: NonZeroSampler::from_values(&degrees),
            bfs: LimitedBfs::new(n),
            rng: ChaCha8Rng::seed_from_u64(seed),
            eps,
            static_cfg,
            mode,
            estimate: uf.sets() as f64,
            psi,
            last_thr: thr0,
            phase_len: 1,
            in_phase: 0,
            updates: 0,
            recomputations: 0,
            graph,
        };
        est.phase_len = est.phase_length(psi);
        Ok(est)
    }

    fn phase_length(&self, psi: usize) -> u64 {
        ((self.eps * psi as f64 / 4.0).ceil() as u64).max(1)
    }

    pub fn graph(&self) -> &DynamicGraph {
        &self.graph
    }

    pub fn estimate(&self) -> f64 {
        self.estimate
    }

    /// The live non-isolated count `Γ`.
    pub fn nis(&self) -> usize {
        self.sampler.nis()
    }

    pub fn psi(&self) -> usize {
        self.psi
    }

    pub fn phase_len(&self) -> u64 {
        self.phase_len
    }

    pub fn updates(&self) -> u64 {
        self.updates
    }

    pub fn recomputations(&self) -> u64 {
        self.recomputations
    }

    pub fn static_config(&self) -> &StaticEstimateConfig {
        &self.static_cfg
    }

    pub fn mode(&self) -> ErrorMode {
        self.mode
    }

    /// Adjacency entries scanned by all static re-estimations so far.
    pub fn work(&self) -> u64 {
        self.bfs.work().1
    }

    /// Additive error the estimate is guaranteed (w.p. `1 − p`) to respect.
    pub fn allowed_error(&self, thr: usize) -> f64 {
        match self.mode {
            ErrorMode::RelativeThr => self.eps * thr as f64,
            ErrorMode::AbsoluteN => self.eps * self.graph.n() as f64,
        }
    }

    fn check_thr(&self, thr: usize) -> Result<()> {
        if self.mode == ErrorMode::AbsoluteN {
            return Ok(());
        }
        if thr < self.graph.nis() {
            return Err(Error::Threshold {
                thr,
                reason: format!("below nis = {}", self.graph.nis()),
            });
        }
        if thr.abs_diff(self.last_thr) > 2 {
            return Err(Error::Threshold {
                thr,
                reason: format!("moved by more than 2 from {}", self.last_thr),
            });
        }
        Ok(())
    }

    pub fn insert(&mut self, u: VertexId, v: VertexId, thr: usize) -> Result<bool> {
        self.graph.check_vertex(u)?;
        self.graph.check_vertex(v)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        let present = self.graph.has_edge(u, v);
        if !present {
            self.graph.insert_edge(u, v)?;
        }
        if let Err(e) = self.check_thr(thr) {
            if !present {
                self.graph.delete_edge(u, v);
            }
            return Err(e);
        }
        if !present {
            self.sampler.update(u as usize, 1)?;
            self.sampler.update(v as usize, 1)?;
        }
        self.advance(thr, 1);
        Ok(!present)
    }

    pub fn delete(&mut self, u: VertexId, v: VertexId, thr: usize) -> Result<bool> {
        let present = self.graph.delete_edge(u, v);
        if let Err(e) = self.check_thr(thr) {
            if present {
                self.graph.insert_edge(u, v)?;
            }
            return Err(e);
        }
        if present {
            self.sampler.update(u as usize, -1)?;
            self.sampler.update(v as usize, -1)?;
        }
        self.advance(thr, 1);
        Ok(present)
    }

    /// Counts `count` updates that leave the graph unchanged, so that phase
    /// boundaries fall exactly where they would under real updates.
    pub fn tick(&mut self, thr: usize, count: u32) -> Result<()> {
        self.check_thr(thr)?;
        self.advance(thr, count);
        Ok(())
    }

    fn advance(&mut self, thr: usize, count: u32) {
        for _ in 0..count {
            self.updates += 1;
            self.in_phase += 1;
            if self.in_phase >= self.phase_len {
                self.start_phase(thr);
            }
        }
        self.last_thr = thr;
    }

    fn start_phase(&mut self, thr: usize) {
        let mut phase_rng = ChaCha8Rng::seed_from_u64(self.rng.next_u64());
        let b = static_estimate_nis(
            &self.graph,
            &mut self.sampler,
            &self.static_cfg,
            &mut phase_rng,
            &mut self.bfs,
        );
        let isolated = self.graph.n() - self.sampler.nis();
        self.estimate = b + isolated as f64;
        self.psi = match self.mode {
            ErrorMode::RelativeThr => thr,
            ErrorMode::AbsoluteN => self.graph.n(),
        };
        self.phase_len = self.phase_length(self.psi);
        self.in_phase = 0;
        self.recomputations += 1;
    }
}
