//! A scripted adaptive adversary against component-count estimators.
//!
//! After reading the current estimate it picks the update that moves the
//! true component count away from it: when the estimate is at or above the
//! truth it inserts an edge merging two components, otherwise it deletes an
//! edge hanging off a degree-one vertex, which splits a component. Within a
//! phase the estimate is frozen, so every step grows the error by one. A
//! small share of plain random updates keeps the graph from degenerating.

use dyngraph::oracle::UnionFind;
use dyngraph::{UpdateOp, VertexId};
use rand::Rng;

use crate::gen::EdgePool;

const TRIES: usize = 64;

#[derive(Debug, Clone)]
pub struct AdaptiveAdversary {
    pool: EdgePool,
    delta: u32,
    /// Candidate updates inspected per step.
    pub candidates: usize,
    /// Probability of a plain random update instead of a scripted one.
    pub churn: f64,
}

impl AdaptiveAdversary {
    pub fn new(n: usize, delta: u32) -> Self {
        AdaptiveAdversary {
            pool: EdgePool::new(n),
            delta,
            candidates: 16,
            churn: 0.1,
        }
    }

    pub fn pool(&self) -> &EdgePool {
        &self.pool
    }

    /// Non-isolated vertices of the current graph.
    pub fn pool_nis(&self) -> usize {
        (0..self.pool.n() as VertexId)
            .filter(|&v| self.pool.degree(v) > 0)
            .count()
    }

    fn components(&self) -> UnionFind {
        let mut uf = UnionFind::new(self.pool.n());
        for &(u, v) in self.pool.edges() {
            uf.union(u as usize, v as usize);
        }
        uf
    }

    /// Chooses the next update, applies it to the adversary's own copy of
    /// the graph and returns it.
    pub fn next_op<R: Rng + ?Sized>(&mut self, estimate: f64, rng: &mut R) -> UpdateOp {
        let mut uf = self.components();
        let ncc = uf.sets();
        let scripted = if rng.random_bool(self.churn) {
            None
        } else if estimate >= ncc as f64 {
            self.merging_insert(&mut uf, rng)
        } else {
            self.splitting_delete(rng)
        };
        let op = scripted.unwrap_or_else(|| self.random_op(rng));
        match op {
            UpdateOp::Insert { u, v, .. } => {
                self.pool.insert(u, v);
            }
            UpdateOp::Delete { u, v } => {
                self.pool.remove(u, v);
            }
            UpdateOp::Query => {}
        }
        op
    }

    /// Prefers merging two non-isolated components so that the threshold
    /// (and with it the allowed error) does not grow.
    fn merging_insert<R: Rng + ?Sized>(&self, uf: &mut UnionFind, rng: &mut R) -> Option<UpdateOp> {
        let mut fallback = None;
        for _ in 0..self.candidates {
            let Some((u, v)) = self.pool.random_insertable(rng, self.delta, TRIES) else {
                continue;
            };
            if uf.find(u as usize) == uf.find(v as usize) {
                continue;
            }
            if self.pool.degree(u) > 0 && self.pool.degree(v) > 0 {
                return Some(UpdateOp::insert(u, v));
            }
            fallback.get_or_insert(UpdateOp::insert(u, v));
        }
        fallback
    }

    fn splitting_delete<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<UpdateOp> {
        (0..self.candidates)
            .filter_map(|_| self.pool.random_edge(rng))
            .find(|&(u, v)| self.pool.degree(u) == 1 || self.pool.degree(v) == 1)
            .map(|(u, v)| UpdateOp::delete(u, v))
    }

    fn random_op<R: Rng + ?Sized>(&self, rng: &mut R) -> UpdateOp {
        let insert = self.pool.is_empty() || rng.random_bool(0.5);
        if insert {
            if let Some((u, v)) = self.pool.random_insertable(rng, self.delta, TRIES) {
                return UpdateOp::insert(u, v);
            }
        }
        match self.pool.random_edge(rng) {
            Some((u, v)) => UpdateOp::delete(u, v),
            None => UpdateOp::Query,
        }
    }
}
