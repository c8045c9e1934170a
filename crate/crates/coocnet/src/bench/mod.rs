//! Benchmark harness comparing network construction strategies.
//!
//! [`measure_run`] wraps one deferred computation and reports wall time
//! from a monotonic clock plus peak heap usage from the allocation hook in
//! [`TrackingAllocator`]. [`run_benchmark`] drives the full protocol: for
//! every repetition and seed it runs the selected algorithms back to back
//! (alternating, so slow drift hits all algorithms alike), after discarding
//! per-(algorithm, seed) warm-up runs. [`report`] persists the samples as
//! CSV next to a JSON summary holding per-algorithm box-plot statistics
//! and significance tests from [`stats`].
//!
//! The whole loop is single-threaded by contract: the allocation counters
//! are process-wide, so concurrent allocation would show up in whichever
//! run is being measured. Set `COOCNET_BENCH_WARMUP` to override the
//! warm-up count (default 1).

mod alloc;
pub mod stats;

pub use alloc::{hook_installed, TrackingAllocator};
pub use stats::{
    mann_whitney_u, wilcoxon_signed_rank, Method, Mode, StatsError, TestResult,
};

use crate::baseline::{build_traversal, TraversalError};
use crate::corpus::{Document, TokenizerConfig};
use crate::expand::{build_bfs, build_recursive, ExpandError, ExpandParams};
use crate::graph::CoocGraph;
use crate::index::{FilterConditions, InvertedIndex};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Instant;
use thiserror::Error;

/// Network construction strategies the harness can measure.
#[derive(
    Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
    clap::ValueEnum,
)]
#[serde(rename_all = "lowercase")]
pub enum Algo {
    Traversal,
    Recursive,
    Bfs,
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algo::Traversal => "traversal",
            Algo::Recursive => "recursive",
            Algo::Bfs => "bfs",
        })
    }
}

/// One measured run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchSample {
    pub algo: Algo,
    #[serde(rename = "seed")]
    pub seed_term: String,
    pub rep: u32,
    pub wall_time_s: f64,
    pub peak_mem_bytes: u64,
}

/// Wall time and peak heap bytes observed during one [`measure_run`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Measurement {
    pub wall_time_s: f64,
    pub peak_mem_bytes: u64,
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(
        "allocation-tracking hook is not installed; the binary must set \
         TrackingAllocator as its global allocator"
    )]
    HookNotInstalled,
    #[error("seed term {0:?} is not in the index lexicon")]
    UnknownSeed(String),
    #[error("report requires at least one sample")]
    NoSamples,
    #[error("i/o error on {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Traversal(#[from] TraversalError),
    #[error(transparent)]
    Expand(#[from] ExpandError),
}

/// Run `task` and measure it. Peak memory is the high-water mark of net
/// bytes allocated after the task starts; a task that allocates nothing
/// reports exactly zero, because this function performs no allocation of
/// its own between starting the clock and reading the counters.
pub fn measure_run<T>(task: impl FnOnce() -> T) -> Result<(T, Measurement), BenchError> {
    // Force one allocation through the global allocator so a missing hook
    // is detected instead of silently reporting zeros.
    drop(std::hint::black_box(Box::new(0u8)));
    if !alloc::hook_installed() {
        return Err(BenchError::HookNotInstalled);
    }
    let baseline = alloc::live_bytes();
    alloc::reset_peak(baseline);
    let clock = Instant::now();
    let out = task();
    let wall_time_s = clock.elapsed().as_secs_f64();
    let peak_mem_bytes = alloc::peak_bytes().saturating_sub(baseline);
    Ok((
        out,
        Measurement {
            wall_time_s,
            peak_mem_bytes,
        },
    ))
}

fn warmup_count() -> u32 {
    std::env::var("COOCNET_BENCH_WARMUP")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(1)
}

fn run_algo(
    index: &InvertedIndex,
    corpus: &[Document],
    cfg: &TokenizerConfig,
    algo: Algo,
    seed: &str,
    params: &ExpandParams,
) -> Result<CoocGraph, BenchError> {
    let cond = FilterConditions::for_terms([seed]);
    match algo {
        Algo::Traversal => Ok(build_traversal(index, corpus, cfg, &cond)?),
        Algo::Recursive => Ok(build_recursive(index, &cond, params)?),
        Algo::Bfs => Ok(build_bfs(index, &cond, params)?),
    }
}

/// Measure every algorithm on every seed condition, `reps` times each.
///
/// Seeds are validated up front, so an unknown seed fails before any run.
/// Per (algorithm, seed), warm-up runs are executed and discarded first;
/// then each repetition runs the algorithms back to back per seed, in the
/// order given. Emits one sample per (rep, seed, algorithm), in that loop
/// order.
pub fn run_benchmark(
    index: &InvertedIndex,
    corpus: &[Document],
    cfg: &TokenizerConfig,
    seeds: &[String],
    params: &ExpandParams,
    reps: u32,
    algos: &[Algo],
) -> Result<Vec<BenchSample>, BenchError> {
    assert!(reps >= 1, "reps must be at least 1");
    assert!(!algos.is_empty(), "at least one algorithm is required");
    for seed in seeds {
        if index.term_id(seed).is_none() {
            return Err(BenchError::UnknownSeed(seed.clone()));
        }
    }
    drop(std::hint::black_box(Box::new(0u8)));
    if !alloc::hook_installed() {
        return Err(BenchError::HookNotInstalled);
    }

    let warmups = warmup_count();
    for seed in seeds {
        for &algo in algos {
            for _ in 0..warmups {
                run_algo(index, corpus, cfg, algo, seed, params)?;
            }
        }
    }

    let mut samples = Vec::with_capacity(seeds.len() * algos.len() * reps as usize);
    for rep in 0..reps {
        for seed in seeds {
            for &algo in algos {
                let (result, m) =
                    measure_run(|| run_algo(index, corpus, cfg, algo, seed, params))?;
                result?;
                samples.push(BenchSample {
                    algo,
                    seed_term: seed.clone(),
                    rep,
                    wall_time_s: m.wall_time_s,
                    peak_mem_bytes: m.peak_mem_bytes,
                });
            }
        }
    }
    Ok(samples)
}

/// Five-number-style box-plot data for one algorithm and metric.
/// Quartiles use linear interpolation between order statistics; `outliers`
/// counts values beyond 1.5 interquartile ranges outside the quartiles.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxStats {
    pub n: usize,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub outliers: usize,
}

fn box_stats(values: &[f64]) -> BoxStats {
    let mut v = values.to_vec();
    v.sort_unstable_by(f64::total_cmp);
    let quantile = |p: f64| {
        let h = (v.len() - 1) as f64 * p;
        let lo = h.floor() as usize;
        let hi = h.ceil() as usize;
        v[lo] + (h - h.floor()) * (v[hi] - v[lo])
    };
    let q1 = quantile(0.25);
    let median = quantile(0.5);
    let q3 = quantile(0.75);
    let reach = 1.5 * (q3 - q1);
    let outliers = v
        .iter()
        .filter(|&&x| x < q1 - reach || x > q3 + reach)
        .count();
    BoxStats {
        n: v.len(),
        median,
        q1,
        q3,
        outliers,
    }
}

/// Box-plot data per algorithm plus both significance tests, for one
/// metric. Tests compare traversal against bfs and are absent when either
/// side has no samples or the data is degenerate (for example identical
/// values everywhere).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub algos: BTreeMap<String, BoxStats>,
    pub wilcoxon: Option<TestResult>,
    pub mann_whitney: Option<TestResult>,
}

/// The full benchmark summary: one [`MetricSummary`] for wall time and one
/// for peak memory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub time: MetricSummary,
    pub memory: MetricSummary,
}

/// Reduce samples to the summary written by [`report`].
pub fn summarize(samples: &[BenchSample]) -> Summary {
    Summary {
        time: metric_summary(samples, |s| s.wall_time_s),
        memory: metric_summary(samples, |s| s.peak_mem_bytes as f64),
    }
}

fn metric_summary(samples: &[BenchSample], value: impl Fn(&BenchSample) -> f64) -> MetricSummary {
    let mut per_algo: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for s in samples {
        per_algo.entry(s.algo.to_string()).or_default().push(value(s));
    }
    let algos = per_algo
        .iter()
        .map(|(name, vals)| (name.clone(), box_stats(vals)))
        .collect();

    // Wilcoxon needs pairs: match traversal and bfs runs of the same seed
    // and repetition.
    let mut bfs_runs: HashMap<(&str, u32), f64> = HashMap::new();
    for s in samples {
        if s.algo == Algo::Bfs {
            bfs_runs.insert((s.seed_term.as_str(), s.rep), value(s));
        }
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for s in samples {
        if s.algo == Algo::Traversal {
            if let Some(&y) = bfs_runs.get(&(s.seed_term.as_str(), s.rep)) {
                xs.push(value(s));
                ys.push(y);
            }
        }
    }
    let wilcoxon = wilcoxon_signed_rank(&xs, &ys).ok();

    let pool = |algo: Algo| -> Vec<f64> {
        samples
            .iter()
            .filter(|s| s.algo == algo)
            .map(&value)
            .collect()
    };
    let mann_whitney = mann_whitney_u(&pool(Algo::Traversal), &pool(Algo::Bfs)).ok();

    MetricSummary {
        algos,
        wilcoxon,
        mann_whitney,
    }
}

/// Write `samples.csv` and `summary.json` into `out_dir`, creating it if
/// needed, and return the summary.
pub fn report(samples: &[BenchSample], out_dir: &Path) -> Result<Summary, BenchError> {
    if samples.is_empty() {
        return Err(BenchError::NoSamples);
    }
    let io_err = |path: &Path, source: std::io::Error| BenchError::Io {
        path: path.to_path_buf(),
        source,
    };
    std::fs::create_dir_all(out_dir).map_err(|e| io_err(out_dir, e))?;

    let csv_path = out_dir.join("samples.csv");
    let csv_err = |e: csv::Error| match e.into_kind() {
        csv::ErrorKind::Io(source) => io_err(&csv_path, source),
        other => io_err(&csv_path, std::io::Error::other(format!("{other:?}"))),
    };
    let mut w = csv::Writer::from_path(&csv_path).map_err(csv_err)?;
    for s in samples {
        w.serialize(s).map_err(csv_err)?;
    }
    w.flush().map_err(|e| io_err(&csv_path, e))?;

    let summary = summarize(samples);
    let json_path = out_dir.join("summary.json");
    let mut body = serde_json::to_vec_pretty(&summary).expect("summary serializes");
    body.push(b'\n');
    std::fs::write(&json_path, body).map_err(|e| io_err(&json_path, e))?;
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::build_index;
    use crate::testutil::{c3_corpus, plain_cfg};

    fn sample(algo: Algo, seed: &str, rep: u32, t: f64, m: u64) -> BenchSample {
        BenchSample {
            algo,
            seed_term: seed.to_string(),
            rep,
            wall_time_s: t,
            peak_mem_bytes: m,
        }
    }

    #[test]
    fn box_stats_interpolates_quartiles() {
        let s = box_stats(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(s.n, 4);
        assert_eq!(s.q1, 1.75);
        assert_eq!(s.median, 2.5);
        assert_eq!(s.q3, 3.25);
        assert_eq!(s.outliers, 0);
    }

    #[test]
    fn box_stats_counts_outliers() {
        let s = box_stats(&[1.0, 2.0, 3.0, 4.0, 100.0]);
        assert_eq!(s.median, 3.0);
        assert_eq!(s.q1, 2.0);
        assert_eq!(s.q3, 4.0);
        assert_eq!(s.outliers, 1);
    }

    #[test]
    fn summarize_pairs_by_seed_and_rep() {
        let samples = vec![
            sample(Algo::Traversal, "a", 0, 10.0, 1000),
            sample(Algo::Bfs, "a", 0, 1.0, 100),
            sample(Algo::Traversal, "b", 0, 20.0, 2000),
            sample(Algo::Bfs, "b", 0, 2.0, 200),
            sample(Algo::Traversal, "a", 1, 11.0, 1000),
            sample(Algo::Bfs, "a", 1, 1.5, 100),
        ];
        let summary = summarize(&samples);
        assert_eq!(summary.time.algos.len(), 2);
        assert_eq!(summary.time.algos["traversal"].n, 3);
        assert_eq!(summary.time.algos["bfs"].median, 1.5);
        let w = summary.time.wilcoxon.expect("paired samples exist");
        assert_eq!(w.method, Method::Wilcoxon);
        // three pairs, traversal always slower: W = 0
        assert_eq!(w.statistic, 0.0);
        let u = summary.time.mann_whitney.expect("both pools non-empty");
        assert_eq!(u.method, Method::MannWhitney);
        assert!(u.p_value > 0.0 && u.p_value <= 1.0);
    }

    #[test]
    fn summarize_without_traversal_has_no_tests() {
        let samples = vec![
            sample(Algo::Bfs, "a", 0, 1.0, 100),
            sample(Algo::Bfs, "b", 0, 2.0, 200),
        ];
        let summary = summarize(&samples);
        assert_eq!(summary.time.algos.len(), 1);
        assert!(summary.time.wilcoxon.is_none());
        assert!(summary.time.mann_whitney.is_none());
    }

    #[test]
    fn summarize_identical_metrics_degrades_gracefully() {
        // equal peaks on both sides: Wilcoxon has all-zero differences
        let samples = vec![
            sample(Algo::Traversal, "a", 0, 10.0, 512),
            sample(Algo::Bfs, "a", 0, 1.0, 512),
        ];
        let summary = summarize(&samples);
        assert!(summary.memory.wilcoxon.is_none());
        assert!(summary.memory.mann_whitney.is_some());
    }

    #[test]
    fn report_writes_csv_and_summary() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("bench");
        let samples = vec![
            sample(Algo::Traversal, "a", 0, 0.5, 1000),
            sample(Algo::Bfs, "a", 0, 0.1, 100),
        ];
        report(&samples, &out).unwrap();
        let csv_text = std::fs::read_to_string(out.join("samples.csv")).unwrap();
        let lines: Vec<&str> = csv_text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], "algo,seed,rep,wall_time_s,peak_mem_bytes");
        assert_eq!(lines[1], "traversal,a,0,0.5,1000");
        let summary: Summary =
            serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap())
                .unwrap();
        assert_eq!(summary.memory.algos["bfs"].median, 100.0);
    }

    #[test]
    fn report_rejects_empty_input() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(
            report(&[], dir.path()).unwrap_err(),
            BenchError::NoSamples
        ));
    }

    #[test]
    fn measure_run_reports_at_least_allocated_peak() {
        // the test binary installs the tracking allocator, so this must
        // see the 1 MiB spike (concurrent test threads can only add)
        let ((), m) = measure_run(|| {
            let block = std::hint::black_box(vec![0u8; 1 << 20]);
            drop(block);
        })
        .unwrap();
        assert!(m.peak_mem_bytes >= 1 << 20, "peak {}", m.peak_mem_bytes);
        assert!(m.wall_time_s >= 0.0);
    }

    #[test]
    fn run_benchmark_validates_seeds_first() {
        let corpus = c3_corpus();
        let cfg = plain_cfg();
        let idx = build_index(&corpus, &cfg);
        let err = run_benchmark(
            &idx,
            &corpus,
            &cfg,
            &["a".into(), "zzz".into()],
            &ExpandParams::default(),
            1,
            &[Algo::Bfs],
        )
        .unwrap_err();
        assert!(matches!(err, BenchError::UnknownSeed(ref s) if s == "zzz"));
    }

    #[test]
    fn run_benchmark_emits_expected_sample_grid() {
        let corpus = c3_corpus();
        let cfg = plain_cfg();
        let idx = build_index(&corpus, &cfg);
        let seeds = vec!["a".to_string(), "b".to_string()];
        let samples = run_benchmark(
            &idx,
            &corpus,
            &cfg,
            &seeds,
            &ExpandParams::default(),
            2,
            &[Algo::Traversal, Algo::Bfs],
        )
        .unwrap();
        assert_eq!(samples.len(), 8);
        // alternating order within each seed: traversal then bfs
        assert_eq!(samples[0].algo, Algo::Traversal);
        assert_eq!(samples[1].algo, Algo::Bfs);
        assert_eq!(samples[0].seed_term, samples[1].seed_term);
        assert_eq!(samples[4].rep, 1);
        for s in &samples {
            assert!(s.wall_time_s >= 0.0);
        }
    }
}
