//! Browser bindings for the demo page in `www/`.
//!
//! Everything here returns plain numbers and vectors so the same code runs
//! natively in tests. Traces come back flattened: the page slices them into
//! fixed-width records.

use dyngraph::cc_random::{ErrorMode, PhasedCcEstimator};
use dyngraph::coloring::{Coloring, ColoringConfig};
use dyngraph::msf::DeterministicMsfEstimator;
use dyngraph::oracle::{exact_msf_weight, exact_ncc};
use dyngraph::{DynamicGraph, VertexId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wasm_bindgen::prelude::*;

const TRIES: usize = 64;

/// Random degree-bounded churn over a simple edge list.
struct Churn {
    n: u32,
    delta: usize,
    degree: Vec<usize>,
    edges: Vec<(VertexId, VertexId)>,
    rng: ChaCha8Rng,
}

enum Move {
    Insert(VertexId, VertexId),
    Delete(VertexId, VertexId),
}

impl Churn {
    fn new(n: usize, delta: usize, seed: u64) -> Self {
        Churn {
            n: n as u32,
            delta,
            degree: vec![0; n],
            edges: Vec::new(),
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn position(&self, u: VertexId, v: VertexId) -> Option<usize> {
        self.edges
            .iter()
            .position(|&(a, b)| (a, b) == (u, v) || (a, b) == (v, u))
    }

    fn add(&mut self, u: VertexId, v: VertexId) {
        self.edges.push((u, v));
        self.degree[u as usize] += 1;
        self.degree[v as usize] += 1;
    }

    fn remove_at(&mut self, i: usize) -> (VertexId, VertexId) {
        let (u, v) = self.edges.swap_remove(i);
        self.degree[u as usize] -= 1;
        self.degree[v as usize] -= 1;
        (u, v)
    }

    fn insertable(&mut self) -> Option<(VertexId, VertexId)> {
        (0..TRIES).find_map(|_| {
            let u = self.rng.random_range(0..self.n);
            let v = self.rng.random_range(0..self.n);
            let ok = u != v
                && self.degree[u as usize] < self.delta
                && self.degree[v as usize] < self.delta
                && self.position(u, v).is_none();
            ok.then_some((u, v))
        })
    }

    fn next(&mut self, insert_bias: f64) -> Option<Move> {
        let want_insert = self.edges.is_empty() || self.rng.random_bool(insert_bias);
        if want_insert {
            if let Some((u, v)) = self.insertable() {
                self.add(u, v);
                return Some(Move::Insert(u, v));
            }
        }
        if self.edges.is_empty() {
            return None;
        }
        let i = self.rng.random_range(0..self.edges.len());
        let (u, v) = self.remove_at(i);
        Some(Move::Delete(u, v))
    }
}

fn check_size(n: usize) -> Result<(), String> {
    if (2..=100_000).contains(&n) {
        Ok(())
    } else {
        Err(format!("n must lie in 2..=100000, got {n}"))
    }
}

/// A live (Δ+1)-coloring driven from the page.
#[wasm_bindgen]
pub struct ColoringDemo {
    coloring: Coloring,
    churn: Churn,
}

#[wasm_bindgen]
impl ColoringDemo {
    #[wasm_bindgen(constructor)]
    pub fn new(n: usize, delta: u32, seed: u32) -> Result<ColoringDemo, String> {
        check_size(n)?;
        let coloring =
            Coloring::new(n, ColoringConfig::new(delta, seed as u64)).map_err(|e| e.to_string())?;
        Ok(ColoringDemo {
            coloring,
            churn: Churn::new(n, delta as usize, seed as u64 ^ 0x5eed),
        })
    }

    pub fn n(&self) -> usize {
        self.coloring.n()
    }

    pub fn delta(&self) -> u32 {
        self.coloring.delta()
    }

    /// Inserts an edge and returns the recoloring path, first vertex first.
    pub fn insert(&mut self, u: u32, v: u32) -> Result<Vec<u32>, String> {
        if self.coloring.has_edge(u, v) {
            return Ok(Vec::new());
        }
        let stats = self.coloring.insert(u, v).map_err(|e| e.to_string())?;
        self.churn.add(u, v);
        Ok(stats.path)
    }

    pub fn delete(&mut self, u: u32, v: u32) -> bool {
        match self.churn.position(u, v) {
            Some(i) => {
                self.churn.remove_at(i);
                self.coloring.delete(u, v)
            }
            None => false,
        }
    }

    /// Applies one random update. Returns `[kind, u, v, path...]` with kind 1
    /// for an insertion and 0 for a deletion, or nothing if no update exists.
    pub fn step(&mut self, insert_bias: f64) -> Vec<u32> {
        match self.churn.next(insert_bias.clamp(0.0, 1.0)) {
            Some(Move::Insert(u, v)) => {
                let stats = self
                    .coloring
                    .insert(u, v)
                    .expect("churn respects the degree bound");
                [1, u, v].into_iter().chain(stats.path).collect()
            }
            Some(Move::Delete(u, v)) => {
                self.coloring.delete(u, v);
                vec![0, u, v]
            }
            None => Vec::new(),
        }
    }

    pub fn colors(&self) -> Vec<u32> {
        self.coloring.colors().to_vec()
    }

    /// Edge endpoints, two entries per edge.
    pub fn edges(&self) -> Vec<u32> {
        self.coloring.edges().flat_map(|(u, v)| [u, v]).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.coloring.edge_count()
    }

    pub fn recolorings(&self) -> f64 {
        self.coloring.totals().recolorings as f64
    }

    pub fn work(&self) -> f64 {
        self.coloring.totals().work as f64
    }

    pub fn conflicts(&self) -> f64 {
        self.coloring.totals().conflicts as f64
    }

    pub fn audit_violations(&self) -> f64 {
        self.coloring.audit().violations as f64
    }
}

/// Runs the deterministic MSF estimator over random churn.
/// Returns `[estimate, exact]` per update.
#[wasm_bindgen]
pub fn msf_trace(
    n: usize,
    eps: f64,
    max_weight: f64,
    updates: usize,
    seed: u32,
) -> Result<Vec<f64>, String> {
    check_size(n)?;
    let mut est = DeterministicMsfEstimator::new(n, eps, max_weight).map_err(|e| e.to_string())?;
    let mut churn = Churn::new(n, n - 1, seed as u64);
    let mut weights = std::collections::BTreeMap::new();
    let mut out = Vec::with_capacity(2 * updates);
    for _ in 0..updates {
        match churn.next(0.55) {
            Some(Move::Insert(u, v)) => {
                let w = churn.rng.random_range(1.0..=max_weight);
                est.insert(u, v, w).map_err(|e| e.to_string())?;
                weights.insert((u.min(v), u.max(v)), w);
            }
            Some(Move::Delete(u, v)) => {
                est.delete(u, v);
                weights.remove(&(u.min(v), u.max(v)));
            }
            None => break,
        }
        let list: Vec<_> = weights.iter().map(|(&(u, v), &w)| (u, v, w)).collect();
        out.push(est.estimate());
        out.push(exact_msf_weight(&list, n));
    }
    Ok(out)
}

/// Runs the phased component estimator with `Thr` equal to the live count of
/// non-isolated vertices. Returns `[estimate, exact, allowed error]` per update.
#[wasm_bindgen]
pub fn cc_trace(n: usize, eps: f64, p: f64, updates: usize, seed: u32) -> Result<Vec<f64>, String> {
    check_size(n)?;
    let mut est = PhasedCcEstimator::preprocess(
        DynamicGraph::new(n),
        eps,
        p,
        0,
        ErrorMode::RelativeThr,
        seed as u64,
    )
    .map_err(|e| e.to_string())?;
    let mut churn = Churn::new(n, n - 1, seed as u64 ^ 0xcc);
    let mut out = Vec::with_capacity(3 * updates);
    for _ in 0..updates {
        let thr = match churn.next(0.6) {
            Some(Move::Insert(u, v)) => {
                let thr = nis(&churn.degree);
                est.insert(u, v, thr).map_err(|e| e.to_string())?;
                thr
            }
            Some(Move::Delete(u, v)) => {
                let thr = nis(&churn.degree);
                est.delete(u, v, thr).map_err(|e| e.to_string())?;
                thr
            }
            None => break,
        };
        out.push(est.estimate());
        out.push(exact_ncc(&churn.edges, n) as f64);
        out.push(eps * thr as f64);
    }
    Ok(out)
}

fn nis(degree: &[usize]) -> usize {
    degree.iter().filter(|&&d| d > 0).count()
}
