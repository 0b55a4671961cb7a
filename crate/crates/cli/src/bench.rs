//! Timing and work summaries over repeated replays.

use std::thread;

use dyngraph::stream::Stream;

use crate::replay::{run, RunConfig, RunError, RunReport};

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub stream: String,
    pub algo: String,
    pub n: usize,
    pub delta: u32,
    pub max_weight: f64,
    pub eps: f64,
    pub ops: usize,
    pub repeats: usize,
    pub mean_ns: f64,
    pub p50_ns: u64,
    pub p95_ns: u64,
    pub p99_ns: u64,
    pub max_ns: u64,
    /// Work counter per update; for coloring the summed `Σ (1 + |L_v|)`
    /// over all recoloring paths.
    pub work_per_op: f64,
    pub recolorings_per_op: f64,
}

impl BenchRow {
    pub const CSV_HEADER: &'static str = "stream,algo,n,delta,W,eps,ops,repeats,\
        mean_ns,p50_ns,p95_ns,p99_ns,max_ns,work_per_op,recolorings_per_op";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{:.1},{},{},{},{},{:.4},{:.4}",
            self.stream,
            self.algo,
            self.n,
            self.delta,
            self.max_weight,
            self.eps,
            self.ops,
            self.repeats,
            self.mean_ns,
            self.p50_ns,
            self.p95_ns,
            self.p99_ns,
            self.max_ns,
            self.work_per_op,
            self.recolorings_per_op
        )
    }
}

fn percentile(sorted: &[u64], q: f64) -> u64 {
    if sorted.is_empty() {
        return 0;
    }
    let idx = ((sorted.len() - 1) as f64 * q).round() as usize;
    sorted[idx]
}

/// Replays `stream` `repeats` times on separate threads with the same seed
/// and no oracle checks. All repeats must report identical work.
pub fn bench(
    name: &str,
    stream: &Stream,
    cfg: &RunConfig,
    repeats: usize,
) -> Result<BenchRow, RunError> {
    let repeats = repeats.max(1);
    let cfg = RunConfig {
        verify: false,
        check_every: 0,
        ..*cfg
    };
    let reports: Vec<Result<RunReport, RunError>> = thread::scope(|s| {
        let handles: Vec<_> = (0..repeats)
            .map(|_| s.spawn(|| run(stream, &cfg, |_| {})))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("replay thread panicked"))
            .collect()
    });
    let reports = reports.into_iter().collect::<Result<Vec<_>, _>>()?;
    let first = &reports[0];
    if let Some(r) = reports.iter().find(|r| r.total_work != first.total_work) {
        return Err(RunError::Violation(format!(
            "repeats with one seed disagree on work: {} vs {}",
            first.total_work, r.total_work
        )));
    }
    let mut times: Vec<u64> = reports
        .iter()
        .flat_map(|r| r.op_nanos.iter().copied())
        .collect();
    times.sort_unstable();
    let mean_ns = times.iter().sum::<u64>() as f64 / times.len().max(1) as f64;
    let updates = first.updates.max(1) as f64;
    Ok(BenchRow {
        stream: name.to_string(),
        algo: cfg.algo.name().to_string(),
        n: stream.header.n,
        delta: stream.header.delta,
        max_weight: stream.header.max_weight,
        eps: cfg.eps,
        ops: first.steps,
        repeats,
        mean_ns,
        p50_ns: percentile(&times, 0.5),
        p95_ns: percentile(&times, 0.95),
        p99_ns: percentile(&times, 0.99),
        max_ns: times.last().copied().unwrap_or(0),
        work_per_op: first.total_work as f64 / updates,
        recolorings_per_op: first.recolorings as f64 / updates,
    })
}
