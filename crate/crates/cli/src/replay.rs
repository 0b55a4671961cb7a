//! Replays a stream through one of the maintained structures and compares it
//! with the brute-force oracles at checkpoints.

use std::fmt;
use std::time::Instant;

use clap::ValueEnum;
use dyngraph::cc_exact::SmallCcCounter;
use dyngraph::cc_random::{ErrorMode, PhasedCcEstimator};
use dyngraph::coloring::{Coloring, ColoringConfig};
use dyngraph::msf::{DeterministicMsfEstimator, RandomizedMsfEstimator};
use dyngraph::oracle::{conflict_count, exact_msf_weight, exact_ncc, exact_nscc};
use dyngraph::stream::{Stream, StreamMode};
use dyngraph::{DynamicGraph, UpdateOp, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Coloring,
    CcExact,
    CcRandom,
    MsfDet,
    MsfRand,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::Coloring => "coloring",
            Algo::CcExact => "cc-exact",
            Algo::CcRandom => "cc-random",
            Algo::MsfDet => "msf-det",
            Algo::MsfRand => "msf-rand",
        }
    }

    pub fn stream_mode(self) -> StreamMode {
        match self {
            Algo::Coloring => StreamMode::Coloring,
            Algo::CcExact | Algo::CcRandom => StreamMode::Cc,
            Algo::MsfDet | Algo::MsfRand => StreamMode::Msf,
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub algo: Algo,
    pub eps: f64,
    pub p: f64,
    /// Emit a checkpoint every this many stream lines; 0 means only at
    /// query lines and at the end.
    pub check_every: usize,
    pub seed: u64,
    /// Run the oracles at checkpoints.
    pub verify: bool,
}

impl RunConfig {
    pub fn new(algo: Algo) -> Self {
        RunConfig {
            algo,
            eps: 0.25,
            p: 0.05,
            check_every: 1000,
            seed: 0,
            verify: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub step: usize,
    pub op: char,
    pub estimate: f64,
    pub exact: Option<f64>,
    pub abs_err: Option<f64>,
    pub allowed_err: Option<f64>,
    /// Cumulative work counter of the structure.
    pub work: u64,
    /// Mean wall time per operation since the previous checkpoint.
    pub nanos: u64,
}

impl Checkpoint {
    pub const CSV_HEADER: &'static str = "step,op,estimate,exact,abs_err,allowed_err,work,nanos";

    pub fn within_envelope(&self) -> bool {
        match (self.abs_err, self.allowed_err) {
            (Some(err), Some(allowed)) => err <= allowed + 1e-9 * allowed.abs().max(1.0),
            _ => true,
        }
    }

    pub fn csv_row(&self) -> String {
        let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{}",
            self.step,
            self.op,
            self.estimate,
            opt(self.exact),
            opt(self.abs_err),
            opt(self.allowed_err),
            self.work,
            self.nanos
        )
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("input error: {0}")]
    Input(String),
    #[error("guarantee violated: {0}")]
    Violation(String),
}

impl RunError {
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Violation(_) => 1,
            RunError::Input(_) => 2,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunReport {
    pub steps: usize,
    pub updates: usize,
    pub checkpoints: usize,
    /// Checkpoints whose error exceeded the allowed error.
    pub misses: usize,
    /// Hard-guarantee violations with context; empty on success.
    pub violations: Vec<String>,
    pub total_work: u64,
    /// Vertices recolored (coloring only).
    pub recolorings: u64,
    /// Wall time of every operation.
    pub op_nanos: Vec<u64>,
}

impl RunReport {
    pub fn miss_rate(&self) -> f64 {
        if self.checkpoints == 0 {
            0.0
        } else {
            self.misses as f64 / self.checkpoints as f64
        }
    }
}

/// Oracle verdict at a checkpoint.
struct Verdict {
    exact: Option<f64>,
    abs_err: Option<f64>,
    allowed: Option<f64>,
    hard: Option<String>,
}

impl Verdict {
    fn against(estimate: f64, exact: f64, allowed: f64, hard: Option<String>) -> Self {
        Verdict {
            exact: Some(exact),
            abs_err: Some((estimate - exact).abs()),
            allowed: Some(allowed),
            hard,
        }
    }
}

// Exactly one tracker lives per run, so variant sizes do not matter.
#[allow(clippy::large_enum_variant)]
enum Tracker {
    Coloring(Box<Coloring>),
    CcExact(SmallCcCounter),
    CcRandom(PhasedCcEstimator),
    MsfDet(DeterministicMsfEstimator),
    MsfRand(RandomizedMsfEstimator),
}

fn input<E: fmt::Display>(e: E) -> RunError {
    RunError::Input(e.to_string())
}

impl Tracker {
    fn new(stream: &Stream, cfg: &RunConfig) -> Result<Self, RunError> {
        let h = &stream.header;
        let n = h.n;
        Ok(match cfg.algo {
            Algo::Coloring => {
                let c = Coloring::new(n, ColoringConfig::new(h.delta, cfg.seed)).map_err(input)?;
                Tracker::Coloring(Box::new(c))
            }
            Algo::CcExact => Tracker::CcExact(
                SmallCcCounter::preprocess(DynamicGraph::new(n), cfg.eps).map_err(input)?,
            ),
            Algo::CcRandom => Tracker::CcRandom(
                PhasedCcEstimator::preprocess(
                    DynamicGraph::new(n),
                    cfg.eps,
                    cfg.p,
                    0,
                    ErrorMode::RelativeThr,
                    cfg.seed,
                )
                .map_err(input)?,
            ),
            Algo::MsfDet => Tracker::MsfDet(
                DeterministicMsfEstimator::new(n, cfg.eps, h.max_weight).map_err(input)?,
            ),
            Algo::MsfRand => Tracker::MsfRand(
                RandomizedMsfEstimator::new(n, cfg.eps, cfg.p, h.max_weight, cfg.seed)
                    .map_err(input)?,
            ),
        })
    }

    /// Applies one update; returns the recoloring work it caused, if any, and
    /// a hard violation detected locally.
    fn apply(&mut self, op: &UpdateOp) -> Result<(u64, u32, Option<String>), RunError> {
        match (self, *op) {
            (_, UpdateOp::Query) => Ok((0, 0, None)),
            (Tracker::Coloring(c), UpdateOp::Insert { u, v, .. }) => {
                let audit = c.audit().violations;
                let stats = c.insert(u, v).map_err(input)?;
                let mut hard = None;
                for &x in &stats.path {
                    let cx = c.color_of(x);
                    if c.lower_neighbors(x)
                        .chain(c.higher_neighbors(x))
                        .any(|y| c.color_of(y) == cx)
                    {
                        hard = Some(format!("vertex {x} shares color {cx} with a neighbor"));
                    }
                }
                if c.color_of(u) == c.color_of(v) {
                    hard = Some(format!("inserted edge ({u}, {v}) is monochromatic"));
                }
                if c.audit().violations > audit {
                    hard = Some("color choice drawn from too few candidates".into());
                }
                Ok((stats.total_work, stats.path_length, hard))
            }
            (Tracker::Coloring(c), UpdateOp::Delete { u, v }) => {
                c.delete(u, v);
                Ok((0, 0, None))
            }
            (Tracker::CcExact(c), UpdateOp::Insert { u, v, .. }) => {
                c.insert(u, v).map_err(input)?;
                Ok((0, 0, None))
            }
            (Tracker::CcExact(c), UpdateOp::Delete { u, v }) => {
                c.delete(u, v);
                Ok((0, 0, None))
            }
            (Tracker::CcRandom(c), UpdateOp::Insert { u, v, .. }) => {
                let thr = nis_after(c.graph(), u, v, true);
                c.insert(u, v, thr).map_err(input)?;
                Ok((0, 0, None))
            }
            (Tracker::CcRandom(c), UpdateOp::Delete { u, v }) => {
                let thr = nis_after(c.graph(), u, v, false);
                c.delete(u, v, thr).map_err(input)?;
                Ok((0, 0, None))
            }
            (Tracker::MsfDet(c), UpdateOp::Insert { u, v, weight }) => {
                c.insert(u, v, weight).map_err(input)?;
                Ok((0, 0, None))
            }
            (Tracker::MsfDet(c), UpdateOp::Delete { u, v }) => {
                c.delete(u, v);
                Ok((0, 0, None))
            }
            (Tracker::MsfRand(c), UpdateOp::Insert { u, v, weight }) => {
                c.insert(u, v, weight).map_err(input)?;
                Ok((0, 0, None))
            }
            (Tracker::MsfRand(c), UpdateOp::Delete { u, v }) => {
                c.delete(u, v).map_err(input)?;
                Ok((0, 0, None))
            }
        }
    }

    fn work(&self) -> u64 {
        match self {
            Tracker::Coloring(c) => c.totals().work,
            Tracker::CcExact(c) => c.work().2,
            Tracker::CcRandom(c) => c.work(),
            Tracker::MsfDet(c) => c.work(),
            Tracker::MsfRand(c) => c.work(),
        }
    }

    fn estimate(&self) -> f64 {
        match self {
            Tracker::Coloring(c) => c.colors().iter().max().copied().unwrap_or(0) as f64,
            Tracker::CcExact(c) => c.estimate() as f64,
            Tracker::CcRandom(c) => c.estimate(),
            Tracker::MsfDet(c) => c.estimate(),
            Tracker::MsfRand(c) => c.estimate(),
        }
    }

    fn verdict(&self, cfg: &RunConfig) -> Verdict {
        let estimate = self.estimate();
        match self {
            Tracker::Coloring(c) => {
                let edges: Vec<_> = c.edges().collect();
                let conflicts = conflict_count(&edges, c.colors());
                let palette = c.delta() + 1;
                let hard = if conflicts > 0 {
                    Some(format!("{conflicts} monochromatic edges"))
                } else if let Some(v) =
                    (0..c.n()).find(|&v| !(1..=palette).contains(&c.colors()[v]))
                {
                    Some(format!(
                        "vertex {v} has color {} outside [1, {palette}]",
                        c.colors()[v]
                    ))
                } else {
                    (c.audit().violations > 0)
                        .then(|| format!("{} undersized color choices", c.audit().violations))
                };
                // The estimate column holds the largest color in use and the
                // error column counts monochromatic edges.
                Verdict {
                    exact: None,
                    abs_err: Some(conflicts as f64),
                    allowed: Some(0.0),
                    hard,
                }
            }
            Tracker::CcExact(c) => {
                let edges: Vec<_> = c.graph().edges().collect();
                let n = c.graph().n();
                let ncc = exact_ncc(&edges, n) as f64;
                let nscc = exact_nscc(&edges, n, c.threshold());
                let allowed = cfg.eps * c.graph().nis() as f64;
                let hard = if c.estimate() != nscc {
                    Some(format!(
                        "count {} differs from small-component oracle {nscc}",
                        c.estimate()
                    ))
                } else if (estimate - ncc).abs() > allowed {
                    Some(format!("error {} above {allowed}", (estimate - ncc).abs()))
                } else {
                    None
                };
                Verdict::against(estimate, ncc, allowed, hard)
            }
            Tracker::CcRandom(c) => {
                let edges: Vec<_> = c.graph().edges().collect();
                let ncc = exact_ncc(&edges, c.graph().n()) as f64;
                Verdict::against(estimate, ncc, c.allowed_error(c.graph().nis()), None)
            }
            Tracker::MsfDet(c) => {
                let edges: Vec<_> = c.edges().collect();
                let m = exact_msf_weight(&edges, c.n());
                let allowed = cfg.eps * m;
                let hard = ((estimate - m).abs() > allowed + 1e-9 * m.max(1.0))
                    .then(|| format!("estimate {estimate} outside (1 ± {})·{m}", cfg.eps));
                Verdict::against(estimate, m, allowed, hard)
            }
            Tracker::MsfRand(c) => {
                let edges: Vec<_> = c.edges().collect();
                let m = exact_msf_weight(&edges, c.n());
                Verdict::against(estimate, m, cfg.eps * m, None)
            }
        }
    }
}

/// Thr for the randomized estimator: nis of the graph after the update.
fn nis_after(g: &DynamicGraph, u: VertexId, v: VertexId, insert: bool) -> usize {
    let nis = g.nis();
    if (u as usize) >= g.n() || (v as usize) >= g.n() || u == v {
        return nis;
    }
    match (insert, g.has_edge(u, v)) {
        (true, false) => nis + (g.degree(u) == 0) as usize + (g.degree(v) == 0) as usize,
        (false, true) => nis - (g.degree(u) == 1) as usize - (g.degree(v) == 1) as usize,
        _ => nis,
    }
}

/// Rejects streams whose header does not fit `algo`.
pub fn check_header(stream: &Stream, algo: Algo) -> Result<(), RunError> {
    let h = &stream.header;
    if h.mode != algo.stream_mode() {
        return Err(RunError::Input(format!(
            "{algo} needs a mode={} stream, got mode={}",
            algo.stream_mode(),
            h.mode
        )));
    }
    if algo == Algo::Coloring && h.delta == 0 {
        return Err(RunError::Input("coloring needs delta >= 1".into()));
    }
    Ok(())
}

fn op_char(op: &UpdateOp) -> char {
    match op {
        UpdateOp::Insert { .. } => 'i',
        UpdateOp::Delete { .. } => 'd',
        UpdateOp::Query => 'q',
    }
}

/// Replays `stream`, calling `on_checkpoint` for every checkpoint.
///
/// Returns `Err(RunError::Input)` if the stream does not fit the algorithm
/// or breaks its promises (e.g. the degree bound). Hard-guarantee
/// violations do not stop the replay; they are listed in the report.
pub fn run(
    stream: &Stream,
    cfg: &RunConfig,
    mut on_checkpoint: impl FnMut(&Checkpoint),
) -> Result<RunReport, RunError> {
    check_header(stream, cfg.algo)?;
    let mut tracker = Tracker::new(stream, cfg)?;
    let mut report = RunReport {
        op_nanos: Vec::with_capacity(stream.ops.len()),
        ..Default::default()
    };
    let mut since_checkpoint = 0u64;
    let mut ops_since = 0u64;
    let last = stream.ops.len();
    for (idx, op) in stream.ops.iter().enumerate() {
        let step = idx + 1;
        let t = Instant::now();
        let (work, recolored, local) = tracker
            .apply(op)
            .map_err(|e| RunError::Input(format!("step {step} ({op:?}): {e}")))?;
        let dt = t.elapsed().as_nanos() as u64;
        report.op_nanos.push(dt);
        report.steps = step;
        if *op != UpdateOp::Query {
            report.updates += 1;
        }
        report.total_work += work;
        report.recolorings += recolored as u64;
        since_checkpoint += dt;
        ops_since += 1;
        if let Some(msg) = local {
            report
                .violations
                .push(format!("step {step} ({op:?}): {msg}"));
        }
        let due = (cfg.check_every > 0 && step % cfg.check_every == 0)
            || *op == UpdateOp::Query
            || step == last;
        if !due {
            continue;
        }
        let mut cp = Checkpoint {
            step,
            op: op_char(op),
            estimate: tracker.estimate(),
            exact: None,
            abs_err: None,
            allowed_err: None,
            work: tracker.work(),
            nanos: since_checkpoint / ops_since.max(1),
        };
        since_checkpoint = 0;
        ops_since = 0;
        if cfg.verify {
            let verdict = tracker.verdict(cfg);
            cp.exact = verdict.exact;
            cp.abs_err = verdict.abs_err;
            cp.allowed_err = verdict.allowed;
            report.checkpoints += 1;
            if !cp.within_envelope() {
                report.misses += 1;
            }
            if let Some(msg) = verdict.hard {
                report.violations.push(format!(
                    "step {step} ({op:?}): {msg}; estimate {} exact {:?} allowed {:?}",
                    cp.estimate, cp.exact, cp.allowed_err
                ));
            }
        }
        on_checkpoint(&cp);
    }
    if let Tracker::Coloring(c) = &tracker {
        if c.totals().work != report.total_work {
            report.violations.push(format!(
                "library work counter {} differs from summed recoloring work {}",
                c.totals().work,
                report.total_work
            ));
        }
    } else {
        report.total_work = tracker.work();
    }
    Ok(report)
}
