//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the process exits non-zero if any fails.

use std::collections::HashMap;
use std::panic::{self, AssertUnwindSafe};
use std::sync::OnceLock;
use std::time::Instant;

use dyngraph::cc_exact::SmallCcCounter;
use dyngraph::cc_random::{
    static_estimate_nis, ErrorMode, PhasedCcEstimator, StaticEstimateConfig,
};
use dyngraph::coloring::{Coloring, ColoringConfig};
use dyngraph::msf::{combine, DeterministicMsfEstimator, MsfConfig, RandomizedMsfEstimator};
use dyngraph::oracle::{
    exact_integer_msf_identity, exact_msf_weight, exact_ncc, exact_nscc, is_proper_coloring,
};
use dyngraph::sampler::NonZeroSampler;
use dyngraph::stream::StreamMode;
use dyngraph::{DynamicGraph, LimitedBfs, UpdateOp, VertexId};
use dyngraph_cli::adversary::AdaptiveAdversary;
use dyngraph_cli::gen::{generate, EdgePool, GenKind, GenParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Runs `f` over `items` on all available cores, keeping input order.
fn par_map<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync) -> Vec<U> {
    let threads = std::thread::available_parallelism().map_or(4, |n| n.get());
    let chunk = items.len().div_ceil(threads).max(1);
    std::thread::scope(|s| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| s.spawn(|| part.iter().map(&f).collect::<Vec<_>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}

fn stream_ops(
    kind: GenKind,
    mode: StreamMode,
    n: usize,
    ops: usize,
    delta: u32,
    seed: u64,
    tune: impl FnOnce(&mut GenParams),
) -> Vec<UpdateOp> {
    let mut p = GenParams::new(kind, mode, n, ops, delta);
    p.seed = seed;
    tune(&mut p);
    generate(&p).expect("valid generator parameters").ops
}

fn key(u: VertexId, v: VertexId) -> (VertexId, VertexId) {
    (u.min(v), u.max(v))
}

struct ColoringRun {
    updates: usize,
    improper_steps: usize,
    audit_checks: u64,
    audit_violations: u64,
}

/// The run shared by the validity and sample-size criteria.
fn coloring_run() -> &'static ColoringRun {
    static RUN: OnceLock<ColoringRun> = OnceLock::new();
    RUN.get_or_init(|| {
        let (n, delta) = (500, 16);
        let ops = stream_ops(
            GenKind::RandomChurn,
            StreamMode::Coloring,
            n,
            100_000,
            delta,
            1,
            |p| {
                p.insert_prob = 0.6;
            },
        );
        let mut c = Coloring::new(n, ColoringConfig::new(delta, 2)).unwrap();
        let mut improper_steps = 0;
        for op in &ops {
            match *op {
                UpdateOp::Insert { u, v, .. } => {
                    c.insert(u, v).unwrap();
                }
                UpdateOp::Delete { u, v } => {
                    assert!(c.delete(u, v));
                }
                UpdateOp::Query => continue,
            }
            let edges: Vec<_> = c.edges().collect();
            if !is_proper_coloring(&edges, c.colors(), delta) {
                improper_steps += 1;
            }
        }
        ColoringRun {
            updates: ops.len(),
            improper_steps,
            audit_checks: c.audit().checks,
            audit_violations: c.audit().violations,
        }
    })
}

fn coloring_validity() -> Outcome {
    let run = coloring_run();
    check(
        run.improper_steps == 0 && run.updates == 100_000,
        format!(
            "{} updates, {} improper states",
            run.updates, run.improper_steps
        ),
    )
}

fn coloring_sample_sizes() -> Outcome {
    let run = coloring_run();
    check(
        run.audit_violations == 0 && run.audit_checks > 0,
        format!(
            "{} color choices audited, {} below the size bound",
            run.audit_checks, run.audit_violations
        ),
    )
}

fn recoloring_work_sweep() -> Outcome {
    let n = 2000;
    let measured = 50_000;
    let jobs: Vec<(u32, u64)> = [16u32, 64, 256]
        .iter()
        .flat_map(|&d| (0..5u64).map(move |s| (d, s)))
        .collect();
    let per_job = par_map(&jobs, |&(delta, seed)| {
        let target = n * delta as usize / 4;
        let ops = stream_ops(
            GenKind::SlidingWindow,
            StreamMode::Coloring,
            n,
            target + measured,
            delta,
            100 + seed,
            |p| {
                p.target_edges = Some(target);
            },
        );
        let mut c = Coloring::new(n, ColoringConfig::new(delta, 200 + seed)).unwrap();
        let mut work = 0u64;
        for (i, op) in ops.iter().enumerate() {
            match *op {
                UpdateOp::Insert { u, v, .. } => {
                    let w = c.insert(u, v).unwrap().total_work;
                    if i >= target {
                        work += w;
                    }
                }
                UpdateOp::Delete { u, v } => {
                    c.delete(u, v);
                }
                UpdateOp::Query => {}
            }
        }
        work as f64 / measured as f64
    });
    let means: Vec<f64> = per_job
        .chunks(5)
        .map(|runs| runs.iter().sum::<f64>() / runs.len() as f64)
        .collect();
    let hi = means.iter().cloned().fold(f64::MIN, f64::max);
    let lo = means.iter().cloned().fold(f64::MAX, f64::min);
    let ratio = hi / lo;
    check(
        ratio <= 3.0,
        format!(
            "work/update at delta 16, 64, 256: {:.3}, {:.3}, {:.3}; max/min {ratio:.2}",
            means[0], means[1], means[2]
        ),
    )
}

fn small_cc_counter() -> Outcome {
    let (n, eps) = (300, 0.2);
    let ops = stream_ops(
        GenKind::SlidingWindow,
        StreamMode::Cc,
        n,
        50_000,
        n as u32 - 1,
        3,
        |p| {
            p.target_edges = Some(150);
        },
    );
    let mut c = SmallCcCounter::preprocess(DynamicGraph::new(n), eps).unwrap();
    let k = c.threshold();
    let (mut mismatches, mut outside) = (0, 0);
    for op in &ops {
        match *op {
            UpdateOp::Insert { u, v, .. } => {
                c.insert(u, v).unwrap();
            }
            UpdateOp::Delete { u, v } => {
                c.delete(u, v);
            }
            UpdateOp::Query => continue,
        }
        let edges: Vec<_> = c.graph().edges().collect();
        let est = c.estimate();
        if est != exact_nscc(&edges, n, k) {
            mismatches += 1;
        }
        let nis = c.graph().nis() as f64;
        if (est as f64 - exact_ncc(&edges, n) as f64).abs() > eps * nis {
            outside += 1;
        }
    }
    check(
        k == 5 && mismatches == 0 && outside == 0,
        format!(
            "k = {k}, {} updates, {mismatches} count mismatches, {outside} outside the envelope",
            ops.len()
        ),
    )
}

fn deterministic_msf() -> Outcome {
    let (n, eps, w) = (400, 0.25, 4.0);
    let ops = stream_ops(
        GenKind::SlidingWindow,
        StreamMode::Msf,
        n,
        50_000,
        n as u32 - 1,
        5,
        |p| {
            p.max_weight = w;
            p.integer_weights = true;
            p.target_edges = Some(500);
        },
    );
    let mut est = DeterministicMsfEstimator::new(n, eps, w).unwrap();
    let mut edges: HashMap<(VertexId, VertexId), f64> = HashMap::new();
    let mut violations = 0;
    let mut worst: f64 = 0.0;
    for op in &ops {
        match *op {
            UpdateOp::Insert { u, v, weight } => {
                est.insert(u, v, weight).unwrap();
                edges.insert(key(u, v), weight);
            }
            UpdateOp::Delete { u, v } => {
                est.delete(u, v);
                edges.remove(&key(u, v));
            }
            UpdateOp::Query => continue,
        }
        let list: Vec<_> = edges.iter().map(|(&(u, v), &w)| (u, v, w)).collect();
        let m = exact_msf_weight(&list, n);
        let e = est.estimate();
        if !((1.0 - eps) * m <= e && e <= (1.0 + eps) * m) {
            violations += 1;
        }
        if m > 0.0 {
            worst = worst.max((e / m - 1.0).abs());
        }
    }
    check(
        violations == 0,
        format!(
            "{} checkpoints, {violations} violations, worst relative error {worst:.4}",
            ops.len()
        ),
    )
}

fn random_weighted_graph<R: Rng>(
    rng: &mut R,
    n: usize,
    w: f64,
    integer: bool,
) -> Vec<(VertexId, VertexId, f64)> {
    let m = rng.random_range(0..=2 * n);
    let mut seen = HashMap::new();
    for _ in 0..m {
        let (u, v) = (rng.random_range(0..n as u32), rng.random_range(0..n as u32));
        if u == v {
            continue;
        }
        let weight = if integer {
            rng.random_range(1..=w as u32) as f64
        } else {
            rng.random_range(1.0..=w)
        };
        seen.entry(key(u, v)).or_insert(weight);
    }
    let mut out: Vec<_> = seen.into_iter().map(|((u, v), w)| (u, v, w)).collect();
    out.sort_by_key(|&(u, v, _)| (u, v));
    out
}

fn sandwich() -> Outcome {
    // Exact counts feed the combiner; the bounds are exact up to float rounding.
    const TOL: f64 = 1e-9;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut violations = 0;
    let mut worst: f64 = 0.0;
    for g in 0..1000 {
        let n = rng.random_range(1..=40);
        let w = rng.random_range(1.0..=4.0);
        let eps = [0.1, 0.25, 0.5][g % 3];
        let edges = random_weighted_graph(&mut rng, n, w, false);
        let config = MsfConfig::new(eps, w).unwrap();
        let counts: Vec<f64> = config
            .thresholds
            .iter()
            .map(|&l| {
                let sub: Vec<_> = edges
                    .iter()
                    .filter(|e| e.2 <= l)
                    .map(|e| (e.0, e.1))
                    .collect();
                exact_ncc(&sub, n) as f64
            })
            .collect();
        let x = combine(&config, &counts, n);
        let m = exact_msf_weight(&edges, n);
        let slack = TOL * (1.0 + m);
        if !(m - slack <= x && x <= (1.0 + eps / 2.0) * m + slack) {
            violations += 1;
        }
        if m > 0.0 {
            worst = worst.max(x / m - 1.0);
        }
    }
    check(
        violations == 0,
        format!("1000 graphs, {violations} outside [M, (1+eps/2)M], largest X/M - 1 = {worst:.4}"),
    )
}

fn integer_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut mismatches = 0;
    for _ in 0..1000 {
        let n = rng.random_range(1..=50);
        let w = rng.random_range(1..=5u32);
        let edges = random_weighted_graph(&mut rng, n, w as f64, true);
        let identity = exact_integer_msf_identity(&edges, n, w).unwrap();
        if identity != exact_msf_weight(&edges, n) {
            mismatches += 1;
        }
    }
    check(
        mismatches == 0,
        format!("1000 graphs, {mismatches} mismatches"),
    )
}

fn static_estimator() -> Outcome {
    let n = 1000;
    let graph = DynamicGraph::from_edges(n, (0..500).map(|i| (2 * i, 2 * i + 1))).unwrap();
    let cfg = StaticEstimateConfig::new(0.1, 0.05).unwrap();
    let degrees: Vec<u64> = (0..n as u32).map(|v| graph.degree(v) as u64).collect();
    let trials: Vec<u64> = (0..200).collect();
    let hits = par_map(&trials, |&t| {
        let mut sampler = NonZeroSampler::from_values(&degrees);
        let mut rng = ChaCha8Rng::seed_from_u64(t);
        let mut bfs = LimitedBfs::new(n);
        let est = static_estimate_nis(&graph, &mut sampler, &cfg, &mut rng, &mut bfs);
        (est - 500.0).abs() <= 0.1 * graph.nis() as f64
    })
    .into_iter()
    .filter(|&h| h)
    .count();
    check(hits >= 180, format!("{hits}/200 trials within 100 of 500"))
}

/// Fraction of checkpoints within `eps * Thr` for one phased-estimator run.
fn phased_run(seed: u64, adaptive: bool) -> (usize, usize) {
    let (n, eps, p, steps, every) = (2000, 0.2, 0.05, 20_000, 50);
    let mut est = PhasedCcEstimator::preprocess(
        DynamicGraph::new(n),
        eps,
        p,
        0,
        ErrorMode::RelativeThr,
        seed,
    )
    .unwrap();
    let mut mirror = DynamicGraph::new(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9);
    let mut adversary = AdaptiveAdversary::new(n, n as u32 - 1);
    let mut scripted = if adaptive {
        Vec::new()
    } else {
        stream_ops(
            GenKind::RandomChurn,
            StreamMode::Cc,
            n,
            steps,
            n as u32 - 1,
            seed,
            |p| {
                p.insert_prob = 0.6;
            },
        )
    }
    .into_iter();
    let (mut hits, mut total) = (0, 0);
    for step in 0..steps {
        let op = if adaptive {
            adversary.next_op(est.estimate(), &mut rng)
        } else {
            scripted.next().expect("stream holds `steps` updates")
        };
        match op {
            UpdateOp::Insert { u, v, .. } => {
                mirror.insert_edge(u, v).unwrap();
                est.insert(u, v, mirror.nis()).unwrap();
            }
            UpdateOp::Delete { u, v } => {
                mirror.delete_edge(u, v);
                est.delete(u, v, mirror.nis()).unwrap();
            }
            UpdateOp::Query => continue,
        }
        if (step + 1) % every == 0 {
            let edges: Vec<_> = mirror.edges().collect();
            let ncc = exact_ncc(&edges, n) as f64;
            total += 1;
            if (est.estimate() - ncc).abs() <= eps * mirror.nis() as f64 {
                hits += 1;
            }
        }
    }
    (hits, total)
}

fn phased_estimator() -> Outcome {
    let jobs: Vec<(u64, bool)> = (0..20u64).flat_map(|s| [(s, false), (s, true)]).collect();
    let results = par_map(&jobs, |&(seed, adaptive)| phased_run(seed, adaptive));
    let rate = |adaptive: bool| {
        let (h, t) = jobs
            .iter()
            .zip(&results)
            .filter(|(j, _)| j.1 == adaptive)
            .fold((0, 0), |acc, (_, r)| (acc.0 + r.0, acc.1 + r.1));
        h as f64 / t as f64
    };
    let (random, adaptive) = (rate(false), rate(true));
    check(
        random >= 0.9 && adaptive >= 0.9,
        format!(
            "within eps*Thr: random churn {:.2}%, adaptive {:.2}%",
            100.0 * random,
            100.0 * adaptive
        ),
    )
}

fn randomized_msf_run(seed: u64) -> (usize, usize) {
    let (n, w, eps, p) = (3000, 2.0, 0.5, 0.05);
    let (updates, every) = (2000, 20);
    let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
    let mut pool = EdgePool::new(n);
    let mut weights: HashMap<(VertexId, VertexId), f64> = HashMap::new();
    while pool.len() < 2 * n / 5 {
        let (u, v) = pool.random_insertable(&mut rng, n as u32 - 1, 64).unwrap();
        pool.insert(u, v);
        weights.insert(key(u, v), rng.random_range(1.0..=w));
    }
    let initial: Vec<_> = weights.iter().map(|(&(u, v), &w)| (u, v, w)).collect();
    let mut est = RandomizedMsfEstimator::preprocess(n, eps, p, w, &initial, seed).unwrap();
    let (mut hits, mut total) = (0, 0);
    for step in 1..=updates {
        if rng.random_bool(0.5) {
            let (u, v) = pool.random_insertable(&mut rng, n as u32 - 1, 64).unwrap();
            let weight = rng.random_range(1.0..=w);
            pool.insert(u, v);
            weights.insert(key(u, v), weight);
            est.insert(u, v, weight).unwrap();
        } else {
            let (u, v) = pool.random_edge(&mut rng).unwrap();
            pool.remove(u, v);
            weights.remove(&key(u, v));
            est.delete(u, v).unwrap();
        }
        if step % every == 0 {
            let list: Vec<_> = weights.iter().map(|(&(u, v), &w)| (u, v, w)).collect();
            let m = exact_msf_weight(&list, n);
            let e = est.estimate();
            total += 1;
            if m / (1.0 + eps) <= e && e <= (1.0 + eps) * m {
                hits += 1;
            }
        }
    }
    (hits, total)
}

fn randomized_msf() -> Outcome {
    let seeds: Vec<u64> = (0..20).collect();
    let (h, t) = par_map(&seeds, |&s| randomized_msf_run(s))
        .into_iter()
        .fold((0, 0), |acc, r| (acc.0 + r.0, acc.1 + r.1));
    let rate = h as f64 / t as f64;
    check(
        rate >= 0.9,
        format!(
            "{h}/{t} checkpoints within a (1+eps) factor ({:.2}%)",
            100.0 * rate
        ),
    )
}

fn sampler() -> Outcome {
    let n = 1000;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut values = vec![0u64; n];
    let mut s = NonZeroSampler::new(n);
    let mut max_touches = 0;
    let mut invariant_failures = 0;
    for _ in 0..10_000 {
        let u = rng.random_range(0..n);
        let delta = rng.random_range(-3i64..=3).max(-(values[u] as i64));
        s.update(u, delta).unwrap();
        values[u] = (values[u] as i64 + delta) as u64;
        max_touches = max_touches.max(s.last_touches());
        if s.check_against(&values).is_err() {
            invariant_failures += 1;
        }
        if let Some(x) = s.sample(&mut rng) {
            max_touches = max_touches.max(s.last_touches());
            if values[x] == 0 {
                invariant_failures += 1;
            }
        }
    }

    let mut small = NonZeroSampler::from_values(&[0, 5, 0, 1, 0, 0, 7, 0]);
    let mut counts = [0f64; 8];
    let draws = 100_000;
    for _ in 0..draws {
        let x = small.sample(&mut rng).unwrap();
        max_touches = max_touches.max(small.last_touches());
        counts[x] += 1.0;
    }
    let expected = draws as f64 / 3.0;
    let off_support: f64 = [0, 2, 4, 5, 7].iter().map(|&i| counts[i]).sum();
    let chi2: f64 = [1, 3, 6]
        .iter()
        .map(|&i| (counts[i] - expected).powi(2) / expected)
        .sum();
    // Two degrees of freedom: the survival function is exp(-x/2).
    let p_value = (-chi2 / 2.0).exp();
    check(
        invariant_failures == 0 && off_support == 0.0 && p_value > 0.01 && max_touches <= 8,
        format!(
            "{invariant_failures} invariant failures, chi-square {chi2:.3} (p = {p_value:.3}), max touches {max_touches}"
        ),
    )
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("coloring validity", coloring_validity),
        ("color sample sizes", coloring_sample_sizes),
        ("recoloring work across delta", recoloring_work_sweep),
        ("exact small-component counter", small_cc_counter),
        ("deterministic MSF envelope", deterministic_msf),
        ("exact-count sandwich", sandwich),
        ("integer MSF identity", integer_identity),
        ("static randomized estimator", static_estimator),
        ("phased estimator", phased_estimator),
        ("randomized MSF", randomized_msf),
        ("non-zero sampler", sampler),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(f))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
