//! Run the full measurement protocol on a synthetic corpus and print the
//! per-algorithm medians plus significance tests.
//!
//!     cargo run --release --example benchmark [n_docs] [reps]
//!
//! Defaults: 5000 documents, 5 repetitions. The corpus, the seed list
//! (the 20 highest-df terms), and every run are deterministic.

use coocnet::corpus::generate_synthetic_corpus;
use coocnet::{
    build_index, run_benchmark, summarize, Algo, ExpandParams, TokenizerConfig,
    TrackingAllocator,
};
use std::collections::BTreeSet;

// Examples opt in to the allocation hook explicitly, exactly like the CLI
// binary does; without it, measurement refuses to run.
#[global_allocator]
static ALLOC: TrackingAllocator = TrackingAllocator;

fn main() {
    let mut args = std::env::args().skip(1);
    let n_docs: usize = args
        .next()
        .map(|a| a.parse().expect("n_docs must be an integer"))
        .unwrap_or(5000);
    let reps: u32 = args
        .next()
        .map(|a| a.parse().expect("reps must be an integer"))
        .unwrap_or(5);

    let cfg = TokenizerConfig::default();
    let corpus = generate_synthetic_corpus(n_docs, 2000, 50.0, 42);
    let index = build_index(&corpus, &cfg);
    let seeds: Vec<String> = index
        .top_k_terms(&index.all_docs(), 20, &BTreeSet::new(), 1)
        .expect("all_docs ids are valid")
        .into_iter()
        .map(|(term, _)| term)
        .collect();
    println!(
        "corpus: {} docs, {} terms; seeds: {} ... {}",
        index.doc_count(),
        index.term_count(),
        seeds[0],
        seeds[seeds.len() - 1]
    );

    let params = ExpandParams::default();
    let started = std::time::Instant::now();
    let samples = run_benchmark(
        &index,
        &corpus,
        &cfg,
        &seeds,
        &params,
        reps,
        &[Algo::Traversal, Algo::Bfs],
    )
    .expect("benchmark should run");
    let summary = summarize(&samples);
    println!(
        "{} samples in {:.1}s",
        samples.len(),
        started.elapsed().as_secs_f64()
    );

    for (label, metric) in [("time (s)", &summary.time), ("memory (bytes)", &summary.memory)] {
        println!("{label}:");
        for (algo, stats) in &metric.algos {
            println!(
                "  {algo:9} median {:>14.6}  IQR [{:.6}, {:.6}]  outliers {}",
                stats.median, stats.q1, stats.q3, stats.outliers
            );
        }
        if let Some(t) = &metric.wilcoxon {
            println!("  wilcoxon     W = {:>12.1}  p = {:.3e}", t.statistic, t.p_value);
        }
        if let Some(t) = &metric.mann_whitney {
            println!("  mann-whitney U = {:>12.1}  p = {:.3e}", t.statistic, t.p_value);
        }
    }
}
