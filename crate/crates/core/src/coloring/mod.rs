//! Fully dynamic proper (Δ+1)-vertex coloring of a Δ-bounded graph.
//!
//! Every vertex draws a random rank once. An inserted edge whose endpoints
//! share a color triggers a recoloring of the endpoint recolored most
//! recently. The new color is drawn from a short prefix of the colors that
//! are either blank (unused by any neighbor) or unique (used by exactly one
//! lower-ranked neighbor and no higher-ranked one). Taking a unique color
//! passes the conflict down to that lower-ranked neighbor, so a recoloring
//! cascade follows strictly decreasing ranks and always terminates. The
//! expected amortized cost per update is constant.
//!
//! Deletions never recolor anything.

mod books;

use indexmap::IndexSet;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use books::{Color, ColorBook};

use crate::error::{Error, Result};
use crate::graph::VertexId;

/// Static random priority of a vertex. Ties in the random value are broken
/// by vertex id, so ranks form a strict total order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rank {
    pub value: u64,
    pub vertex: VertexId,
}

/// Work done by one top-level update.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RecolorStats {
    /// Number of vertices recolored.
    pub path_length: u32,
    /// `Σ (1 + |L_v|)` over the recoloring path.
    pub total_work: u64,
    /// Recolorings that sampled among freshly visited lower neighbors.
    pub good_steps: u32,
    /// Recolorings that fell back to already visited lower neighbors.
    pub bad_steps: u32,
    /// Cascades ending at a vertex of degree below Δ/2.
    pub low_degree_terminations: u32,
    /// The recolored vertices in order.
    pub path: Vec<VertexId>,
}

impl RecolorStats {
    pub fn merge(&mut self, other: &RecolorStats) {
        self.path_length += other.path_length;
        self.total_work += other.total_work;
        self.good_steps += other.good_steps;
        self.bad_steps += other.bad_steps;
        self.low_degree_terminations += other.low_degree_terminations;
    }
}

/// Tally of the sample-set size check performed at every color choice:
/// a vertex of degree below Δ/2 must choose among at least Δ/2 + 1 colors,
/// any other vertex among at least `|L_v|/100 + 1`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SampleSizeAudit {
    pub checks: u64,
    pub violations: u64,
}

/// Running totals since construction.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ColoringTotals {
    pub insertions: u64,
    pub deletions: u64,
    pub conflicts: u64,
    pub recolorings: u64,
    pub work: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ColoringConfig {
    pub delta: u32,
    pub seed: u64,
    /// Defer building `C_L(v)` until `deg(v)` first reaches ⌈Δ/2⌉, making
    /// initialization O(n) instead of O(nΔ).
    pub lazy_init: bool,
    /// Compact timestamps every this many updates.
    pub compact_every: Option<u64>,
}

impl ColoringConfig {
    pub fn new(delta: u32, seed: u64) -> Self {
        ColoringConfig {
            delta,
            seed,
            lazy_init: true,
            compact_every: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Choice {
    Blank,
    Unique(VertexId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Branch {
    LowDegree,
    FreshNeighbors,
    VisitedNeighbors,
}

#[derive(Debug, Clone, Copy)]
struct ColorPick {
    color: Color,
    choice: Choice,
    branch: Branch,
}

/// Scratch buffers reused across color choices.
#[derive(Debug, Clone, Default)]
struct Scratch {
    /// Per color: how many lower neighbors of the current vertex carry it.
    count: Vec<u32>,
    /// Per color: the last lower neighbor seen carrying it.
    owner: Vec<VertexId>,
    fresh: Vec<VertexId>,
    visited: Vec<VertexId>,
    below: Vec<VertexId>,
    ranks: Vec<Rank>,
    candidates: Vec<Color>,
}

#[derive(Debug, Clone)]
pub struct Coloring {
    delta: u32,
    palette: u32,
    lazy_init: bool,
    compact_every: Option<u64>,
    colors: Vec<Color>,
    ranks: Vec<Rank>,
    stamps: Vec<u64>,
    clock: u64,
    lower: Vec<IndexSet<VertexId>>,
    higher: Vec<IndexSet<VertexId>>,
    books: Vec<ColorBook>,
    marked: Vec<bool>,
    marked_list: Vec<VertexId>,
    rng: ChaCha8Rng,
    scratch: Scratch,
    audit: SampleSizeAudit,
    totals: ColoringTotals,
    since_compaction: u64,
}

impl Coloring {
    /// Empty graph on `n` vertices: random ranks and uniformly random colors.
    pub fn new(n: usize, config: ColoringConfig) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let ranks: Vec<u64> = (0..n).map(|_| rng.next_u64()).collect();
        let palette = config.delta + 1;
        let colors: Vec<Color> = (0..n).map(|_| rng.random_range(1..=palette)).collect();
        Self::assemble(config, ranks, colors, rng)
    }

    /// Empty graph with caller-chosen rank values and colors, for exhaustive
    /// testing of the recoloring procedure.
    pub fn from_parts(config: ColoringConfig, ranks: Vec<u64>, colors: Vec<Color>) -> Result<Self> {
        if ranks.len() != colors.len() {
            return Err(Error::Parameter("ranks and colors differ in length".into()));
        }
        let rng = ChaCha8Rng::seed_from_u64(config.seed);
        Self::assemble(config, ranks, colors, rng)
    }

    fn assemble(
        config: ColoringConfig,
        ranks: Vec<u64>,
        colors: Vec<Color>,
        rng: ChaCha8Rng,
    ) -> Result<Self> {
        if config.delta == 0 {
            return Err(Error::Parameter("delta must be at least 1".into()));
        }
        if config.compact_every == Some(0) {
            return Err(Error::Parameter(
                "compaction period must be positive".into(),
            ));
        }
        let palette = config.delta + 1;
        if let Some(&c) = colors.iter().find(|&&c| c == 0 || c > palette) {
            return Err(Error::Parameter(format!("color {c} outside palette")));
        }
        let n = ranks.len();
        let ranks = ranks
            .into_iter()
            .enumerate()
            .map(|(v, value)| Rank {
                value,
                vertex: v as VertexId,
            })
            .collect();
        let mut books = vec![ColorBook::default(); n];
        if !config.lazy_init {
            books.iter_mut().for_each(|b| b.materialize(palette));
        }
        Ok(Coloring {
            delta: config.delta,
            palette,
            lazy_init: config.lazy_init,
            compact_every: config.compact_every,
            colors,
            ranks,
            stamps: vec![0; n],
            clock: 1,
            lower: vec![IndexSet::new(); n],
            higher: vec![IndexSet::new(); n],
            books,
            marked: vec![false; n],
            marked_list: Vec::new(),
            rng,
            scratch: Scratch {
                count: vec![0; palette as usize + 1],
                owner: vec![0; palette as usize + 1],
                ..Default::default()
            },
            audit: SampleSizeAudit::default(),
            totals: ColoringTotals::default(),
            since_compaction: 0,
        })
    }

    pub fn n(&self) -> usize {
        self.colors.len()
    }

    pub fn delta(&self) -> u32 {
        self.delta
    }

    #[inline]
    pub fn color_of(&self, v: VertexId) -> Color {
        self.colors[v as usize]
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub fn rank(&self, v: VertexId) -> Rank {
        self.ranks[v as usize]
    }

    pub fn timestamp(&self, v: VertexId) -> u64 {
        self.stamps[v as usize]
    }

    pub fn timestamps(&self) -> &[u64] {
        &self.stamps
    }

    pub fn clock(&self) -> u64 {
        self.clock
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.lower[v as usize].len() + self.higher[v as usize].len()
    }

    pub fn lower_neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.lower[v as usize].iter().copied()
    }

    pub fn higher_neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.higher[v as usize].iter().copied()
    }

    pub fn book(&self, v: VertexId) -> &ColorBook {
        &self.books[v as usize]
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.lower
            .get(u as usize)
            .is_some_and(|l| l.contains(&v) || self.higher[u as usize].contains(&v))
    }

    /// Edges as `(min, max)` pairs.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.lower.iter().enumerate().flat_map(|(v, set)| {
            let v = v as VertexId;
            set.iter().map(move |&u| (u.min(v), u.max(v)))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.lower.iter().map(IndexSet::len).sum()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n() as VertexId)
            .map(|v| self.degree(v))
            .max()
            .unwrap_or(0)
    }

    pub fn audit(&self) -> SampleSizeAudit {
        self.audit
    }

    pub fn totals(&self) -> &ColoringTotals {
        &self.totals
    }

    /// `true` when any vertex still carries a visited mark.
    pub fn has_marks(&self) -> bool {
        !self.marked_list.is_empty() || self.marked.iter().any(|&m| m)
    }

    fn check_vertex(&self, v: VertexId) -> Result<()> {
        if (v as usize) < self.n() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n(),
            })
        }
    }

    /// Inserts `(u, v)` and repairs the coloring if the endpoints collide.
    ///
    /// Both endpoints must have degree below Δ beforehand. A duplicate edge
    /// is a no-op.
    pub fn insert(&mut self, u: VertexId, v: VertexId) -> Result<RecolorStats> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if self.has_edge(u, v) {
            return Ok(RecolorStats::default());
        }
        for x in [u, v] {
            if self.degree(x) >= self.delta as usize {
                return Err(Error::DegreeBound {
                    u,
                    v,
                    vertex: x,
                    delta: self.delta,
                });
            }
        }

        let (lo, hi) = if self.ranks[u as usize] < self.ranks[v as usize] {
            (u, v)
        } else {
            (v, u)
        };
        self.lower[hi as usize].insert(lo);
        self.higher[lo as usize].insert(hi);
        self.books[lo as usize].add_high(self.colors[hi as usize]);
        for x in [u, v] {
            if 2 * self.degree(x) >= self.delta as usize {
                self.books[x as usize].materialize(self.palette);
            }
        }
        self.totals.insertions += 1;

        let mut stats = RecolorStats::default();
        if self.colors[u as usize] == self.colors[v as usize] {
            self.totals.conflicts += 1;
            let target = self.most_recently_recolored(u, v);
            stats = self.recolor(target)?;
            self.totals.recolorings += stats.path_length as u64;
            self.totals.work += stats.total_work;
        }
        self.after_update();
        Ok(stats)
    }

    /// Deletes `(u, v)`; returns `false` if the edge was absent. Never recolors.
    pub fn delete(&mut self, u: VertexId, v: VertexId) -> bool {
        if (u as usize) >= self.n() || (v as usize) >= self.n() || !self.has_edge(u, v) {
            return false;
        }
        let (lo, hi) = if self.ranks[u as usize] < self.ranks[v as usize] {
            (u, v)
        } else {
            (v, u)
        };
        self.lower[hi as usize].swap_remove(&lo);
        self.higher[lo as usize].swap_remove(&hi);
        self.books[lo as usize].remove_high(self.colors[hi as usize]);
        self.totals.deletions += 1;
        self.after_update();
        true
    }

    fn most_recently_recolored(&self, u: VertexId, v: VertexId) -> VertexId {
        let key = |x: VertexId| (self.stamps[x as usize], x);
        if key(u) > key(v) {
            u
        } else {
            v
        }
    }

    fn after_update(&mut self) {
        if let Some(period) = self.compact_every {
            self.since_compaction += 1;
            if self.since_compaction >= period {
                self.compact_timestamps();
            }
        }
    }

    /// Replaces every timestamp by its position in the sorted order of
    /// distinct timestamps (1-based) and resets the clock to `n + 1`.
    /// All pairwise comparisons between timestamps are preserved.
    pub fn compact_timestamps(&mut self) {
        let mut order: Vec<usize> = (0..self.n()).collect();
        order.sort_by_key(|&v| self.stamps[v]);
        let mut next = 0u64;
        let mut prev = None;
        for v in order {
            if prev != Some(self.stamps[v]) {
                next += 1;
                prev = Some(self.stamps[v]);
            }
            self.stamps[v] = next;
        }
        self.clock = self.n() as u64 + 1;
        self.since_compaction = 0;
    }

    /// Recolors `start` and follows the cascade down to a blank color.
    fn recolor(&mut self, start: VertexId) -> Result<RecolorStats> {
        let result = self.recolor_path(start);
        for v in self.marked_list.drain(..) {
            self.marked[v as usize] = false;
        }
        result
    }

    fn recolor_path(&mut self, start: VertexId) -> Result<RecolorStats> {
        let mut stats = RecolorStats::default();
        let mut current = start;
        loop {
            let pick = self.set_color(current)?;
            stats.path.push(current);
            stats.path_length += 1;
            stats.total_work += 1 + self.lower[current as usize].len() as u64;
            match pick.branch {
                Branch::LowDegree => stats.low_degree_terminations += 1,
                Branch::FreshNeighbors => stats.good_steps += 1,
                Branch::VisitedNeighbors => stats.bad_steps += 1,
            }
            self.apply_color(current, pick.color);
            match pick.choice {
                Choice::Blank => return Ok(stats),
                Choice::Unique(next) => {
                    if self.colors[next as usize] != pick.color
                        || !self.lower[current as usize].contains(&next)
                    {
                        return Err(Error::Invariant(format!(
                            "no lower neighbor of {current} carries unique color {}",
                            pick.color
                        )));
                    }
                    debug_assert!(self.ranks[next as usize] < self.ranks[current as usize]);
                    current = next;
                }
            }
        }
    }

    /// Sets `χ(v) = color` and moves the old color out of the books of all
    /// lower neighbors (for which `v` is a higher neighbor).
    fn apply_color(&mut self, v: VertexId, color: Color) {
        let old = self.colors[v as usize];
        self.colors[v as usize] = color;
        self.stamps[v as usize] = self.clock;
        self.clock += 1;
        if old == color {
            return;
        }
        for &w in &self.lower[v as usize] {
            let book = &mut self.books[w as usize];
            book.remove_high(old);
            book.add_high(color);
        }
    }

    fn mark(&mut self, v: VertexId) -> bool {
        if self.marked[v as usize] {
            false
        } else {
            self.marked[v as usize] = true;
            self.marked_list.push(v);
            true
        }
    }

    /// Chooses a new color for `v` among its blank and unique colors.
    fn set_color(&mut self, v: VertexId) -> Result<ColorPick> {
        let vi = v as usize;
        let mut scratch = std::mem::take(&mut self.scratch);
        scratch.fresh.clear();
        scratch.visited.clear();

        // Split L_v into previously visited and fresh neighbors, marking the
        // fresh ones. `v` itself joins the visited set but takes no part in
        // the rank or color computations below.
        self.mark(v);
        for i in 0..self.lower[vi].len() {
            let u = self.lower[vi][i];
            if self.mark(u) {
                scratch.fresh.push(u);
            } else {
                scratch.visited.push(u);
            }
        }

        for &u in &self.lower[vi] {
            let c = self.colors[u as usize] as usize;
            scratch.count[c] += 1;
            scratch.owner[c] = u;
        }

        let lower_len = self.lower[vi].len();
        let degree = lower_len + self.higher[vi].len();
        let book = &self.books[vi];
        let (pick, sample_size) = if 2 * degree < self.delta as usize {
            let lower_only = self.lower[vi]
                .iter()
                .filter(|&&u| {
                    let c = self.colors[u as usize];
                    scratch.owner[c as usize] == u && !book.in_high(c)
                })
                .count();
            let blank = self.palette as usize - book.high_len() - lower_only;
            let color = loop {
                let c = self.rng.random_range(1..=self.palette);
                if scratch.count[c as usize] == 0 && !book.in_high(c) {
                    break c;
                }
            };
            let pick = ColorPick {
                color,
                choice: Choice::Blank,
                branch: Branch::LowDegree,
            };
            (pick, blank)
        } else {
            if !book.is_materialized() {
                self.books[vi].materialize(self.palette);
            }
            let book = &self.books[vi];
            let use_fresh = lower_len == 0 || 10 * scratch.fresh.len() >= lower_len;
            let (members, branch) = if use_fresh {
                (&scratch.fresh, Branch::FreshNeighbors)
            } else {
                (&scratch.visited, Branch::VisitedNeighbors)
            };

            // Members whose rank is at most the (lower) median rank.
            scratch.below.clear();
            if !members.is_empty() {
                scratch.ranks.clear();
                scratch
                    .ranks
                    .extend(members.iter().map(|&u| self.ranks[u as usize]));
                let mid = (scratch.ranks.len() - 1) / 2;
                let median = *scratch.ranks.select_nth_unstable(mid).1;
                scratch.below.extend(
                    members
                        .iter()
                        .copied()
                        .filter(|&u| self.ranks[u as usize] <= median),
                );
            }

            // The first |below| + 1 colors of B_v followed by the unique
            // colors owned by members of `below`.
            let limit = scratch.below.len() + 1;
            scratch.candidates.clear();
            for c in book.low_colors() {
                if scratch.candidates.len() == limit {
                    break;
                }
                if scratch.count[c as usize] == 0 {
                    scratch.candidates.push(c);
                }
            }
            for &u in &scratch.below {
                if scratch.candidates.len() == limit {
                    break;
                }
                let c = self.colors[u as usize];
                if scratch.count[c as usize] == 1 && !book.in_high(c) {
                    scratch.candidates.push(c);
                }
            }
            if scratch.candidates.is_empty() {
                self.scratch = scratch;
                self.reset_counts(v);
                return Err(Error::Invariant(format!("empty sample set at vertex {v}")));
            }
            let color = scratch.candidates[self.rng.random_range(0..scratch.candidates.len())];
            let choice = if scratch.count[color as usize] == 0 {
                Choice::Blank
            } else {
                Choice::Unique(scratch.owner[color as usize])
            };
            let pick = ColorPick {
                color,
                choice,
                branch,
            };
            (pick, scratch.candidates.len())
        };

        self.audit.checks += 1;
        let bound_ok = match pick.branch {
            Branch::LowDegree => 2 * sample_size >= self.delta as usize + 2,
            _ => 100 * (sample_size - 1) >= lower_len,
        };
        if !bound_ok {
            self.audit.violations += 1;
        }
        debug_assert!(
            bound_ok,
            "sample set of size {sample_size} too small at vertex {v} (degree {degree}, |L| {lower_len})"
        );

        self.scratch = scratch;
        self.reset_counts(v);
        Ok(pick)
    }

    fn reset_counts(&mut self, v: VertexId) {
        for &u in &self.lower[v as usize] {
            self.scratch.count[self.colors[u as usize] as usize] = 0;
        }
    }

    /// Fresh structure over the current edge set with palette `1..=new_delta+1`.
    pub fn rebuild(&self, new_delta: u32, seed: u64) -> Result<Coloring> {
        let config = ColoringConfig {
            delta: new_delta,
            seed,
            lazy_init: self.lazy_init,
            compact_every: self.compact_every,
        };
        let mut fresh = Coloring::new(self.n(), config)?;
        let edges: Vec<_> = self.edges().collect();
        for (u, v) in edges {
            fresh.insert(u, v)?;
        }
        Ok(fresh)
    }

    /// Recomputes every maintained set from scratch and compares.
    pub fn check_consistency(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Invariant(msg));
        for v in 0..self.n() {
            let vid = v as VertexId;
            let c = self.colors[v];
            if c == 0 || c > self.palette {
                return fail(format!("vertex {v} has color {c} outside the palette"));
            }
            for &u in &self.lower[v] {
                if self.ranks[u as usize] >= self.ranks[v]
                    || !self.higher[u as usize].contains(&vid)
                {
                    return fail(format!("lower list of {v} holds {u} incorrectly"));
                }
                if self.colors[u as usize] == c {
                    return fail(format!("edge ({u},{v}) is monochromatic"));
                }
            }
            for &u in &self.higher[v] {
                if self.ranks[u as usize] <= self.ranks[v] || !self.lower[u as usize].contains(&vid)
                {
                    return fail(format!("higher list of {v} holds {u} incorrectly"));
                }
            }
            let book = &self.books[v];
            let mut mult = std::collections::HashMap::new();
            for &u in &self.higher[v] {
                *mult.entry(self.colors[u as usize]).or_insert(0u32) += 1;
            }
            if book.high_len() != mult.len() || book.high_total() as usize != self.higher[v].len() {
                return fail(format!(
                    "color book of {v} disagrees with its higher neighbors"
                ));
            }
            for (&color, &m) in &mult {
                if book.multiplicity(color) != m {
                    return fail(format!(
                        "multiplicity of color {color} at {v} is {} not {m}",
                        book.multiplicity(color)
                    ));
                }
            }
            if book.is_materialized() {
                let mut seen = vec![false; self.palette as usize + 1];
                for color in book.high_colors().chain(book.low_colors()) {
                    if std::mem::replace(&mut seen[color as usize], true) {
                        return fail(format!("color {color} listed twice at {v}"));
                    }
                }
                if seen[1..].iter().any(|&s| !s) {
                    return fail(format!("palette not covered at {v}"));
                }
            }
            if self.marked[v] {
                return fail(format!("vertex {v} still marked"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::is_proper_coloring;
    use rand::seq::IndexedRandom;

    fn config(delta: u32, seed: u64) -> ColoringConfig {
        ColoringConfig::new(delta, seed)
    }

    fn proper(c: &Coloring) -> bool {
        let edges: Vec<_> = c.edges().collect();
        is_proper_coloring(&edges, c.colors(), c.delta())
    }

    #[test]
    fn single_vertex_initialization() {
        let c = Coloring::new(1, config(3, 1)).unwrap();
        assert!((1..=4).contains(&c.color_of(0)));
        assert_eq!(c.lower_neighbors(0).count(), 0);
        assert_eq!(c.higher_neighbors(0).count(), 0);
    }

    #[test]
    fn lazy_initialization_builds_nothing() {
        let c = Coloring::new(100, config(5, 2)).unwrap();
        for v in 0..100 {
            assert!(!c.book(v).is_materialized());
            assert_eq!(c.book(v).high_len(), 0);
        }
        let eager = Coloring::new(
            10,
            ColoringConfig {
                lazy_init: false,
                ..config(5, 2)
            },
        )
        .unwrap();
        assert_eq!(eager.book(3).low_len(), Some(6));
    }

    #[test]
    fn equal_seeds_give_equal_state() {
        let a = Coloring::new(50, config(7, 42)).unwrap();
        let b = Coloring::new(50, config(7, 42)).unwrap();
        assert_eq!(a.colors(), b.colors());
        for v in 0..50 {
            assert_eq!(a.rank(v), b.rank(v));
        }
    }

    #[test]
    fn ranks_are_distinct() {
        let c = Coloring::new(1000, config(4, 3)).unwrap();
        let set: std::collections::HashSet<_> = (0..1000).map(|v| c.rank(v)).collect();
        assert_eq!(set.len(), 1000);
    }

    #[test]
    fn conflict_free_insert_updates_lower_book() {
        let mut c = Coloring::from_parts(config(3, 0), vec![10, 20], vec![1, 2]).unwrap();
        let stats = c.insert(0, 1).unwrap();
        assert_eq!(stats, RecolorStats::default());
        assert_eq!(c.book(0).multiplicity(2), 1);
        assert_eq!(c.book(1).high_len(), 0);
        assert_eq!(c.lower_neighbors(1).collect::<Vec<_>>(), vec![0]);
        c.check_consistency().unwrap();
    }

    #[test]
    fn conflict_with_no_lower_neighbors_takes_blank_color() {
        // Vertex 1 has the larger id and ties on timestamp, so it is recolored.
        // Its only neighbor ranks higher, hence L_1 is empty.
        let mut c = Coloring::from_parts(config(4, 9), vec![20, 10], vec![3, 3]).unwrap();
        let stats = c.insert(0, 1).unwrap();
        assert_eq!(stats.path, vec![1]);
        assert_eq!(stats.path_length, 1);
        assert_eq!(stats.total_work, 1);
        assert_ne!(c.color_of(1), 3);
        assert!(!c.has_marks());
        c.check_consistency().unwrap();
    }

    #[test]
    fn low_degree_vertex_samples_blank_color() {
        // Vertex 0 has higher neighbors colored 1 and 2, then conflicts with
        // its lower neighbor 3 on color 4. deg(0) = 3 < Δ/2 with Δ = 8.
        for seed in 0..50 {
            let mut c =
                Coloring::from_parts(config(8, seed), vec![1, 5, 6, 0], vec![4, 1, 2, 4]).unwrap();
            c.insert(0, 1).unwrap();
            c.insert(0, 2).unwrap();
            // Make vertex 0 the more recently recolored endpoint.
            c.stamps[0] = 5;
            let stats = c.insert(0, 3).unwrap();
            assert_eq!(stats.path, vec![0]);
            assert_eq!(stats.low_degree_terminations, 1);
            assert!(![1, 2, 4].contains(&c.color_of(0)));
            c.check_consistency().unwrap();
        }
    }

    #[test]
    fn blank_set_membership_for_low_degree() {
        // Δ = 5, lower neighbors colored {1, 3}, deg(0) = 2 < Δ/2.
        for seed in 0..50 {
            let mut c =
                Coloring::from_parts(config(5, seed), vec![9, 1, 2], vec![3, 1, 3]).unwrap();
            c.insert(0, 1).unwrap();
            c.stamps[0] = 1;
            c.insert(0, 2).unwrap();
            assert!([2, 4, 5, 6].contains(&c.color_of(0)));
        }
    }

    #[test]
    fn delete_restores_books() {
        let mut c = Coloring::from_parts(config(3, 0), vec![10, 20, 30], vec![1, 2, 3]).unwrap();
        c.insert(0, 1).unwrap();
        let before: Vec<_> = c.book(0).high_colors().collect();
        c.insert(0, 2).unwrap();
        assert!(c.delete(0, 2));
        assert_eq!(c.book(0).high_colors().collect::<Vec<_>>(), before);
        assert!(!c.delete(0, 2));
    }

    #[test]
    fn multiplicity_decrements_on_delete() {
        let mut c = Coloring::from_parts(
            ColoringConfig {
                lazy_init: false,
                ..config(4, 0)
            },
            vec![0, 10, 20],
            vec![1, 5, 5],
        )
        .unwrap();
        c.insert(0, 1).unwrap();
        c.insert(0, 2).unwrap();
        assert_eq!(c.book(0).multiplicity(5), 2);
        c.delete(0, 1);
        assert_eq!(c.book(0).multiplicity(5), 1);
        assert!(c.book(0).in_high(5));
        assert!(!c.book(0).low_colors().any(|x| x == 5));
        c.delete(0, 2);
        assert!(c.book(0).low_colors().any(|x| x == 5));
    }

    #[test]
    fn degree_bound_and_self_loop_rejected() {
        let mut c = Coloring::new(5, config(2, 1)).unwrap();
        c.insert(0, 1).unwrap();
        c.insert(0, 2).unwrap();
        assert!(matches!(
            c.insert(0, 3),
            Err(Error::DegreeBound { vertex: 0, .. })
        ));
        assert_eq!(c.insert(4, 4), Err(Error::SelfLoop(4)));
        assert_eq!(c.insert(0, 1).unwrap(), RecolorStats::default());
    }

    #[test]
    fn compaction_preserves_order() {
        let mut c = Coloring::new(3, config(2, 0)).unwrap();
        c.stamps = vec![900, 3, 77];
        c.compact_timestamps();
        assert_eq!(c.timestamps(), &[3, 1, 2]);
        assert_eq!(c.clock(), 4);
        c.compact_timestamps();
        assert_eq!(c.timestamps(), &[3, 1, 2]);
    }

    #[test]
    fn compaction_preserves_all_pairwise_comparisons() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut c = Coloring::new(50, config(2, 0)).unwrap();
        c.stamps = (0..50).map(|_| rng.random_range(0..40u64)).collect();
        let before = c.stamps.clone();
        c.compact_timestamps();
        for i in 0..50 {
            assert!(c.stamps[i] <= 50);
            for j in 0..50 {
                assert_eq!(before[i].cmp(&before[j]), c.stamps[i].cmp(&c.stamps[j]));
            }
        }
    }

    fn churn(c: &mut Coloring, rng: &mut ChaCha8Rng, steps: usize, check: impl Fn(&Coloring)) {
        let n = c.n() as u32;
        let mut edges: Vec<(u32, u32)> = c.edges().collect();
        for _ in 0..steps {
            if !edges.is_empty() && rng.random_bool(0.4) {
                let i = rng.random_range(0..edges.len());
                let (u, v) = edges.swap_remove(i);
                assert!(c.delete(u, v));
            } else {
                let u = rng.random_range(0..n);
                let v = rng.random_range(0..n);
                if u == v
                    || c.has_edge(u, v)
                    || c.degree(u) >= c.delta() as usize
                    || c.degree(v) >= c.delta() as usize
                {
                    continue;
                }
                let stats = c.insert(u, v).unwrap();
                for w in stats.path.windows(2) {
                    assert!(c.rank(w[1]) < c.rank(w[0]));
                }
                assert!(stats.total_work >= stats.path_length as u64);
                edges.push((u.min(v), u.max(v)));
            }
            check(c);
        }
    }

    #[test]
    fn random_bounded_insertions_stay_proper() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut c = Coloring::new(200, config(8, 17)).unwrap();
        let n = 200u32;
        let mut inserted = 0;
        while inserted < 10_000 {
            let (u, v) = (rng.random_range(0..n), rng.random_range(0..n));
            if u == v || c.has_edge(u, v) {
                continue;
            }
            if c.degree(u) >= 8 || c.degree(v) >= 8 {
                // keep the graph from saturating
                let (a, b) = c
                    .edges()
                    .collect::<Vec<_>>()
                    .choose(&mut rng)
                    .copied()
                    .unwrap();
                c.delete(a, b);
                continue;
            }
            c.insert(u, v).unwrap();
            inserted += 1;
            assert!(proper(&c));
        }
        c.check_consistency().unwrap();
        assert_eq!(c.audit().violations, 0);
    }

    #[test]
    fn mixed_churn_keeps_books_exact() {
        for lazy in [true, false] {
            let mut rng = ChaCha8Rng::seed_from_u64(23);
            let mut c = Coloring::new(
                60,
                ColoringConfig {
                    lazy_init: lazy,
                    compact_every: Some(37),
                    ..config(6, 5)
                },
            )
            .unwrap();
            churn(&mut c, &mut rng, 1000, |c| {
                c.check_consistency().unwrap();
                assert!(!c.has_marks());
            });
        }
    }

    #[test]
    fn rebuild_with_smaller_palette() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let mut c = Coloring::new(40, config(8, 1)).unwrap();
        churn(&mut c, &mut rng, 400, |_| {});
        while c.max_degree() > 4 {
            let (u, v) = c.edges().next().unwrap();
            let heavy = (0..40).max_by_key(|&x| c.degree(x)).unwrap();
            let w = c
                .lower_neighbors(heavy)
                .chain(c.higher_neighbors(heavy))
                .next();
            match w {
                Some(w) => c.delete(heavy, w),
                None => c.delete(u, v),
            };
        }
        let rebuilt = c.rebuild(4, 99).unwrap();
        let before: std::collections::BTreeSet<_> = c.edges().collect();
        let after: std::collections::BTreeSet<_> = rebuilt.edges().collect();
        assert_eq!(before, after);
        assert!(proper(&rebuilt));
        assert!(rebuilt.colors().iter().all(|&x| (1..=5).contains(&x)));
        rebuilt.check_consistency().unwrap();
        if c.max_degree() > 2 {
            assert!(matches!(c.rebuild(2, 1), Err(Error::DegreeBound { .. })));
        }

        let empty = Coloring::new(10, config(3, 5)).unwrap();
        let again = empty.rebuild(3, 5).unwrap();
        assert_eq!(
            again.colors(),
            Coloring::new(10, config(3, 5)).unwrap().colors()
        );
    }
}
