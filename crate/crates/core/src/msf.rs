//! Approximate minimum-spanning-forest weight from component counts.
//!
//! For weights in `[1, W]` and thresholds `1 = ℓ_0 < ℓ_1 < … < ℓ_r = W`
//! growing by a factor of at most `1 + ε/2`, let `c_i` be the number of
//! components of the subgraph of edges with weight at most `ℓ_i`. Then
//!
//! ```text
//! X = n − ℓ_r·c_r + Σ_{i<r} (ℓ_{i+1} − ℓ_i)·c_i
//! ```
//!
//! satisfies `M ≤ X ≤ (1 + ε/2)·M` where `M` is the MSF weight. Both
//! estimators below keep one component counter per threshold level and
//! evaluate `X` on the maintained counts.

use std::collections::HashMap;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cc_exact::{size_threshold, SmallCcCounter};
use crate::cc_random::{ErrorMode, PhasedCcEstimator};
use crate::error::{Error, Result};
use crate::graph::{DynamicGraph, VertexId};

/// Threshold levels and combiner weights for a given `ε` and maximum weight.
#[derive(Debug, Clone, PartialEq)]
pub struct MsfConfig {
    pub eps: f64,
    pub max_weight: f64,
    /// Index of the top level; there are `r + 1` levels.
    pub r: usize,
    /// `ℓ_0..=ℓ_r`, with the top level clamped to exactly `W`.
    pub thresholds: Vec<f64>,
    /// `λ_i = ℓ_{i+1} − ℓ_i` for `i < r`.
    pub lambdas: Vec<f64>,
}

impl MsfConfig {
    pub fn new(eps: f64, max_weight: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::Parameter(format!(
                "eps must lie in (0, 1), got {eps}"
            )));
        }
        if !(max_weight >= 1.0 && max_weight.is_finite()) {
            return Err(Error::Parameter(format!(
                "maximum weight must be finite and at least 1, got {max_weight}"
            )));
        }
        let growth = 1.0 + eps / 2.0;
        let mut thresholds = vec![1.0];
        let mut level = 1.0f64;
        // The tolerance keeps an exact power of the growth factor from
        // spawning an extra level through rounding.
        while level < max_weight * (1.0 - 1e-12) {
            level *= growth;
            thresholds.push(level.min(max_weight));
        }
        let r = thresholds.len() - 1;
        thresholds[r] = max_weight;
        let lambdas = thresholds.windows(2).map(|w| w[1] - w[0]).collect();
        Ok(MsfConfig {
            eps,
            max_weight,
            r,
            thresholds,
            lambdas,
        })
    }

    pub fn levels(&self) -> usize {
        self.r + 1
    }

    /// Indices of the levels whose subgraph contains an edge of weight `w`.
    pub fn levels_containing(&self, w: f64) -> std::ops::RangeInclusive<usize> {
        let first = self.thresholds.partition_point(|&l| l < w);
        first..=self.r
    }

    pub fn check_weight(&self, w: f64) -> Result<()> {
        if !(w >= 1.0 && w <= self.max_weight) {
            return Err(Error::WeightOutOfRange {
                weight: w,
                max: self.max_weight,
            });
        }
        Ok(())
    }
}

/// `n − ℓ_r·c_r + Σ λ_i·c_i` over per-level component counts.
pub fn combine(config: &MsfConfig, counts: &[f64], n: usize) -> f64 {
    assert_eq!(counts.len(), config.levels(), "one count per level");
    let top = config.thresholds[config.r] * counts[config.r];
    let sum: f64 = config
        .lambdas
        .iter()
        .zip(counts)
        .map(|(lambda, c)| lambda * c)
        .sum();
    n as f64 - top + sum
}

fn edge_key(u: VertexId, v: VertexId) -> (VertexId, VertexId) {
    (u.min(v), u.max(v))
}

fn validate_edge(n: usize, u: VertexId, v: VertexId) -> Result<()> {
    for x in [u, v] {
        if x as usize >= n {
            return Err(Error::VertexOutOfRange { vertex: x, n });
        }
    }
    if u == v {
        return Err(Error::SelfLoop(u));
    }
    Ok(())
}

/// Deterministic estimator: an exact small-component counter per level with
/// size bound `⌈4W/ε⌉`. The estimate is always within a `1 ± ε` factor of
/// the MSF weight.
#[derive(Debug, Clone)]
pub struct DeterministicMsfEstimator {
    config: MsfConfig,
    n: usize,
    levels: Vec<SmallCcCounter>,
    weights: HashMap<(VertexId, VertexId), f64>,
}

impl DeterministicMsfEstimator {
    pub fn new(n: usize, eps: f64, max_weight: f64) -> Result<Self> {
        Self::preprocess(n, eps, max_weight, &[])
    }

    pub fn preprocess(
        n: usize,
        eps: f64,
        max_weight: f64,
        edges: &[(VertexId, VertexId, f64)],
    ) -> Result<Self> {
        let config = MsfConfig::new(eps, max_weight)?;
        let k = size_threshold(eps / (4.0 * max_weight))?;
        let weights = collect_weights(&config, n, edges)?;
        let levels = config
            .thresholds
            .iter()
            .map(|&l| {
                let g = level_graph(n, &weights, l);
                SmallCcCounter::with_threshold(g, k)
            })
            .collect();
        Ok(DeterministicMsfEstimator {
            config,
            n,
            levels,
            weights,
        })
    }

    pub fn config(&self) -> &MsfConfig {
        &self.config
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size_threshold(&self) -> usize {
        self.levels[0].threshold()
    }

    pub fn level(&self, i: usize) -> &SmallCcCounter {
        &self.levels[i]
    }

    pub fn weight(&self, u: VertexId, v: VertexId) -> Option<f64> {
        self.weights.get(&edge_key(u, v)).copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId, f64)> + '_ {
        self.weights.iter().map(|(&(u, v), &w)| (u, v, w))
    }

    /// Inserts a new edge. Returns `false` if the edge is already present,
    /// whatever its weight.
    pub fn insert(&mut self, u: VertexId, v: VertexId, w: f64) -> Result<bool> {
        validate_edge(self.n, u, v)?;
        self.config.check_weight(w)?;
        let key = edge_key(u, v);
        if self.weights.contains_key(&key) {
            return Ok(false);
        }
        for i in self.config.levels_containing(w) {
            self.levels[i].insert(u, v)?;
        }
        self.weights.insert(key, w);
        Ok(true)
    }

    pub fn delete(&mut self, u: VertexId, v: VertexId) -> bool {
        let Some(w) = self.weights.remove(&edge_key(u, v)) else {
            return false;
        };
        for i in self.config.levels_containing(w) {
            self.levels[i].delete(u, v);
        }
        true
    }

    pub fn counts(&self) -> Vec<f64> {
        self.levels.iter().map(|c| c.estimate() as f64).collect()
    }

    pub fn estimate(&self) -> f64 {
        combine(&self.config, &self.counts(), self.n)
    }

    /// Adjacency entries scanned by the explorations of all levels.
    pub fn work(&self) -> u64 {
        self.levels.iter().map(|c| c.work().2).sum()
    }
}

/// Randomized estimator: a phased component estimator per level, each with
/// error `ε/(4W)·nis(G)` and failure probability `p/(r + 1)`. Levels an
/// update does not reach advance their phase clock by two, so every level
/// sees the same threshold sequence and the guarantee survives adaptive
/// update sequences.
#[derive(Debug, Clone)]
pub struct RandomizedMsfEstimator {
    config: MsfConfig,
    full: DynamicGraph,
    levels: Vec<PhasedCcEstimator>,
    weights: HashMap<(VertexId, VertexId), f64>,
    level_eps: f64,
    level_p: f64,
}

impl RandomizedMsfEstimator {
    pub fn new(n: usize, eps: f64, p: f64, max_weight: f64, seed: u64) -> Result<Self> {
        Self::preprocess(n, eps, p, max_weight, &[], seed)
    }

    pub fn preprocess(
        n: usize,
        eps: f64,
        p: f64,
        max_weight: f64,
        edges: &[(VertexId, VertexId, f64)],
        seed: u64,
    ) -> Result<Self> {
        let config = MsfConfig::new(eps, max_weight)?;
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::Parameter(format!("p must lie in (0, 1), got {p}")));
        }
        let weights = collect_weights(&config, n, edges)?;
        let full = level_graph(n, &weights, max_weight);
        let level_eps = eps / (4.0 * max_weight);
        let level_p = p / config.levels() as f64;
        let mut master = ChaCha8Rng::seed_from_u64(seed);
        let levels = config
            .thresholds
            .iter()
            .map(|&l| {
                PhasedCcEstimator::preprocess(
                    level_graph(n, &weights, l),
                    level_eps,
                    level_p,
                    full.nis(),
                    ErrorMode::RelativeThr,
                    master.next_u64(),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RandomizedMsfEstimator {
            config,
            full,
            levels,
            weights,
            level_eps,
            level_p,
        })
    }

    pub fn config(&self) -> &MsfConfig {
        &self.config
    }

    pub fn n(&self) -> usize {
        self.full.n()
    }

    pub fn graph(&self) -> &DynamicGraph {
        &self.full
    }

    pub fn level(&self, i: usize) -> &PhasedCcEstimator {
        &self.levels[i]
    }

    /// `(ε, p)` handed to each level.
    pub fn level_params(&self) -> (f64, f64) {
        (self.level_eps, self.level_p)
    }

    pub fn weight(&self, u: VertexId, v: VertexId) -> Option<f64> {
        self.weights.get(&edge_key(u, v)).copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId, f64)> + '_ {
        self.weights.iter().map(|(&(u, v), &w)| (u, v, w))
    }

    pub fn insert(&mut self, u: VertexId, v: VertexId, w: f64) -> Result<bool> {
        validate_edge(self.full.n(), u, v)?;
        self.config.check_weight(w)?;
        let key = edge_key(u, v);
        if self.weights.contains_key(&key) {
            return Ok(false);
        }
        self.full.insert_edge(u, v)?;
        self.weights.insert(key, w);
        self.propagate(u, v, w, true)?;
        Ok(true)
    }

    pub fn delete(&mut self, u: VertexId, v: VertexId) -> Result<bool> {
        let Some(w) = self.weights.remove(&edge_key(u, v)) else {
            return Ok(false);
        };
        self.full.delete_edge(u, v);
        self.propagate(u, v, w, false)?;
        Ok(true)
    }

    fn propagate(&mut self, u: VertexId, v: VertexId, w: f64, insert: bool) -> Result<()> {
        let thr = self.full.nis();
        let first = *self.config.levels_containing(w).start();
        for (i, level) in self.levels.iter_mut().enumerate() {
            if i < first {
                level.tick(thr, 2)?;
            } else if insert {
                level.insert(u, v, thr)?;
            } else {
                level.delete(u, v, thr)?;
            }
        }
        Ok(())
    }

    pub fn counts(&self) -> Vec<f64> {
        self.levels.iter().map(|c| c.estimate()).collect()
    }

    pub fn estimate(&self) -> f64 {
        combine(&self.config, &self.counts(), self.full.n())
    }

    /// Adjacency entries scanned by all static re-estimations.
    pub fn work(&self) -> u64 {
        self.levels.iter().map(|c| c.work()).sum()
    }
}

fn collect_weights(
    config: &MsfConfig,
    n: usize,
    edges: &[(VertexId, VertexId, f64)],
) -> Result<HashMap<(VertexId, VertexId), f64>> {
    let mut weights = HashMap::with_capacity(edges.len());
    for &(u, v, w) in edges {
        validate_edge(n, u, v)?;
        config.check_weight(w)?;
        if weights.insert(edge_key(u, v), w).is_some() {
            return Err(Error::Parameter(format!("edge ({u}, {v}) listed twice")));
        }
    }
    Ok(weights)
}

fn level_graph(n: usize, weights: &HashMap<(VertexId, VertexId), f64>, limit: f64) -> DynamicGraph {
    let mut g = DynamicGraph::new(n);
    for (&(u, v), &w) in weights {
        if w <= limit {
            g.insert_edge(u, v).expect("validated edge");
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{exact_msf_weight, exact_ncc};
    use rand::{Rng, SeedableRng};

    fn exact_counts(config: &MsfConfig, n: usize, edges: &[(VertexId, VertexId, f64)]) -> Vec<f64> {
        config
            .thresholds
            .iter()
            .map(|&l| {
                let sub: Vec<_> = edges
                    .iter()
                    .filter(|e| e.2 <= l)
                    .map(|&(u, v, _)| (u, v))
                    .collect();
                exact_ncc(&sub, n) as f64
            })
            .collect()
    }

    #[test]
    fn config_levels() {
        let c = MsfConfig::new(0.5, 2.0).unwrap();
        // 1.25^3 < 2 ≤ 1.25^4
        assert_eq!(c.r, 4);
        assert_eq!(c.thresholds[4], 2.0);
        assert!(c.lambdas.iter().all(|&l| l > 0.0));
        let one = MsfConfig::new(0.3, 1.0).unwrap();
        assert_eq!(one.r, 0);
        assert!(one.lambdas.is_empty());
        assert!(MsfConfig::new(0.0, 2.0).is_err());
        assert!(MsfConfig::new(0.5, 0.5).is_err());
    }

    #[test]
    fn exact_power_gets_no_extra_level() {
        let c = MsfConfig::new(0.5, 1.25f64.powi(3)).unwrap();
        assert_eq!(c.r, 3);
    }

    #[test]
    fn levels_containing_filters_by_threshold() {
        let c = MsfConfig::new(0.5, 2.0).unwrap();
        assert_eq!(c.levels_containing(1.0), 0..=4);
        assert_eq!(c.levels_containing(2.0), 4..=4);
        assert_eq!(c.levels_containing(1.3), 2..=4);
    }

    #[test]
    fn combine_on_empty_graph_is_zero() {
        for (eps, w) in [(0.1, 4.0), (0.5, 2.0), (0.25, 1.0)] {
            let c = MsfConfig::new(eps, w).unwrap();
            let counts = vec![7.0; c.levels()];
            assert!(combine(&c, &counts, 7).abs() < 1e-9);
        }
    }

    #[test]
    fn combine_single_edge() {
        let c = MsfConfig::new(0.25, 3.0).unwrap();
        let edges = [(0, 1, 1.0)];
        let x = combine(&c, &exact_counts(&c, 2, &edges), 2);
        assert!((1.0..=1.125 + 1e-12).contains(&x));
    }

    #[test]
    fn exact_counts_sandwich_kruskal() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..200 {
            let n = rng.random_range(2..30usize);
            let w_max = rng.random_range(1.0..4.0f64);
            let eps = [0.1, 0.25, 0.5][rng.random_range(0..3)];
            let c = MsfConfig::new(eps, w_max).unwrap();
            let mut edges = Vec::new();
            for u in 0..n as u32 {
                for v in u + 1..n as u32 {
                    if rng.random_bool(0.15) {
                        edges.push((u, v, rng.random_range(1.0..=w_max)));
                    }
                }
            }
            let m = exact_msf_weight(&edges, n);
            let x = combine(&c, &exact_counts(&c, n, &edges), n);
            assert!(
                m - 1e-9 <= x && x <= (1.0 + eps / 2.0) * m + 1e-9,
                "{m} {x}"
            );
        }
    }

    #[test]
    fn deterministic_single_weight_counts_forest_edges() {
        let mut est = DeterministicMsfEstimator::new(6, 0.5, 1.0).unwrap();
        for (u, v) in [(0, 1), (1, 2), (0, 2), (3, 4)] {
            est.insert(u, v, 1.0).unwrap();
        }
        assert_eq!(est.estimate(), 3.0);
        assert!(est.delete(0, 1));
        assert!(!est.delete(0, 1));
        assert_eq!(est.estimate(), 3.0);
    }

    #[test]
    fn heavy_edge_reaches_only_top_level() {
        let mut est = DeterministicMsfEstimator::new(4, 0.5, 2.0).unwrap();
        est.insert(0, 1, 2.0).unwrap();
        let r = est.config().r;
        assert!(est.level(r).graph().has_edge(0, 1));
        assert!((0..r).all(|i| !est.level(i).graph().has_edge(0, 1)));
    }

    #[test]
    fn rejects_bad_weights_and_edges() {
        let mut est = DeterministicMsfEstimator::new(4, 0.5, 2.0).unwrap();
        assert!(matches!(
            est.insert(0, 1, 2.5),
            Err(Error::WeightOutOfRange { .. })
        ));
        assert!(matches!(
            est.insert(0, 1, 0.5),
            Err(Error::WeightOutOfRange { .. })
        ));
        assert!(matches!(
            est.insert(0, 1, f64::NAN),
            Err(Error::WeightOutOfRange { .. })
        ));
        assert!(matches!(est.insert(1, 1, 1.0), Err(Error::SelfLoop(1))));
        assert!(matches!(
            est.insert(0, 9, 1.0),
            Err(Error::VertexOutOfRange { .. })
        ));
        assert!(est.insert(0, 1, 1.0).unwrap());
        assert!(!est.insert(1, 0, 2.0).unwrap());
        assert_eq!(est.weight(1, 0), Some(1.0));
    }

    #[test]
    fn deterministic_churn_stays_in_envelope() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (n, eps, w_max) = (60usize, 0.25, 3.0);
        let mut est = DeterministicMsfEstimator::new(n, eps, w_max).unwrap();
        for step in 0..3000 {
            let (u, v) = (rng.random_range(0..n as u32), rng.random_range(0..n as u32));
            if u == v {
                continue;
            }
            if rng.random_bool(0.6) {
                est.insert(u, v, rng.random_range(1..=3) as f64).unwrap();
            } else {
                est.delete(u, v);
            }
            if step % 10 == 0 {
                let edges: Vec<_> = est.edges().collect();
                let m = exact_msf_weight(&edges, n);
                let e = est.estimate();
                assert!((1.0 - eps) * m - 1e-9 <= e && e <= (1.0 + eps) * m + 1e-9);
                for i in 0..est.config().r {
                    let (a, b) = (est.level(i).graph(), est.level(i + 1).graph());
                    assert!(a.edges().all(|(x, y)| b.has_edge(x, y)));
                }
            }
        }
    }

    #[test]
    fn randomized_light_edges_update_every_level() {
        let mut est = RandomizedMsfEstimator::new(10, 0.5, 0.1, 2.0, 3).unwrap();
        est.insert(0, 1, 1.0).unwrap();
        for i in 0..est.config().levels() {
            assert!(est.level(i).graph().has_edge(0, 1));
            assert_eq!(est.level(i).updates(), 1);
        }
    }

    #[test]
    fn randomized_heavy_edge_ticks_lower_levels() {
        let mut est = RandomizedMsfEstimator::new(10, 0.5, 0.1, 1.2, 3).unwrap();
        assert_eq!(est.config().r, 1);
        est.insert(0, 1, 1.2).unwrap();
        assert_eq!(est.level(0).updates(), 2);
        assert!(!est.level(0).graph().has_edge(0, 1));
        assert_eq!(est.level(1).updates(), 1);
        assert!(est.level(1).graph().has_edge(0, 1));
        assert!(est.delete(0, 1).unwrap());
        assert!(!est.delete(0, 1).unwrap());
        assert_eq!(est.level(0).updates(), 4);
    }

    #[test]
    fn randomized_preprocess_is_exact() {
        let edges = [(0, 1, 1.0), (1, 2, 2.0), (3, 4, 1.5)];
        let est = RandomizedMsfEstimator::preprocess(6, 0.5, 0.1, 2.0, &edges, 9).unwrap();
        let x = combine(est.config(), &exact_counts(est.config(), 6, &edges), 6);
        assert!((est.estimate() - x).abs() < 1e-9);
        let m = exact_msf_weight(&edges, 6);
        assert!(m <= x && x <= 1.25 * m);
    }
}
