//! Keyword co-occurrence networks over an inverted index, built two ways
//! and benchmarked against each other.
//!
//! A co-occurrence network is an undirected graph whose nodes are terms
//! and whose edge weights count the documents in which both endpoint
//! terms appear. This crate builds such networks from a document corpus
//! with two interchangeable strategies:
//!
//! - **Traversal** ([`build_traversal`]): match the filter conditions,
//!   re-tokenize every matched document, and count every co-occurring
//!   pair. Complete, but the cost scales with the corpus.
//! - **Index expansion** ([`build_recursive`], [`build_bfs`]): grow the
//!   network outward from a seed term using only index lookups, taking
//!   the top-`branch` terms by document frequency at each step up to
//!   `depth`. The two drivers differ only in exploration order and
//!   produce identical graphs.
//!
//! Around the two builders sit the supporting pieces: [`corpus`] loads
//! (or synthesizes) documents and tokenizes them, [`index`] builds and
//! persists the inverted index, [`graph`] holds and exports the network,
//! [`bench`] measures wall time and peak heap per run and compares the
//! strategies with Wilcoxon signed-rank and Mann-Whitney U tests, and
//! [`cli`] wires everything into the `coocnet` binary.
//!
//! # Quickstart
//!
//! ```
//! use coocnet::corpus::{Document, TokenizerConfig};
//! use coocnet::{build_bfs, build_index, ExpandParams, FilterConditions};
//!
//! let docs = vec![
//!     Document::new("D1", "a b c"),
//!     Document::new("D2", "a b"),
//!     Document::new("D3", "b c"),
//! ];
//! let cfg = TokenizerConfig::default();
//! let index = build_index(&docs, &cfg);
//!
//! let seed = FilterConditions::for_terms(["a"]);
//! let params = ExpandParams { depth: 2, branch: 2, min_df: 1 };
//! let graph = build_bfs(&index, &seed, &params)?;
//!
//! assert_eq!(graph.weight("a", "b"), Some(2)); // both docs with "a" have "b"
//! assert_eq!(graph.weight("b", "c"), Some(1)); // second-hop edge
//! # Ok::<(), coocnet::ExpandError>(())
//! ```
//!
//! # Runnable examples
//!
//! Each major capability has a standalone example under `examples/`:
//!
//! - `build_index` — index a corpus, query postings, df, and top-k terms
//! - `corpus_stats` — synthetic corpus generation and df histograms
//! - `expand_bfs` — seed expansion with the trace of expanded sets
//! - `traversal_vs_expansion` — how the two strategies relate
//! - `snapshot_roundtrip` — binary persistence and corruption detection
//! - `export_graph` — edge-csv and graph-json exports
//! - `rank_tests` — exact and approximate rank statistics
//! - `benchmark` — the full measurement protocol with significance tests
//!
//! Run one with `cargo run --example <name>`.
//!
//! # Measuring memory
//!
//! Peak-heap measurement needs the process-wide allocation hook; binaries
//! that call [`measure_run`] or [`run_benchmark`] must install
//! [`TrackingAllocator`] as their global allocator (the `coocnet` binary
//! and the `benchmark` example do). The library never installs it on its
//! own.

pub mod baseline;
pub mod bench;
pub mod cli;
pub mod corpus;
pub mod expand;
pub mod graph;
pub mod index;

pub use baseline::{build_traversal, TraversalError};
pub use bench::{
    measure_run, report, run_benchmark, summarize, Algo, BenchError, BenchSample, BoxStats,
    Measurement, MetricSummary, Summary, TrackingAllocator,
};
pub use bench::stats::{
    mann_whitney_u, wilcoxon_signed_rank, Method, Mode, StatsError, TestResult,
};
pub use corpus::{
    load_corpus, load_dictionary, load_stopwords, tokenize, Corpus, CorpusError, CorpusFormat,
    Document, Field, Token, TokenStream, Tokenizer, TokenizerConfig,
};
pub use expand::{
    build_bfs, build_bfs_traced, build_recursive, build_recursive_traced, ExpandError,
    ExpandParams, ExpandTrace,
};
pub use graph::{
    export_graph, load_graph_json, CoocGraph, GraphError, GraphFormat, MergePolicy, NodeId,
};
pub use index::{
    build_index, load_snapshot, save_snapshot, DocId, DocMeta, FilterConditions, IndexError,
    InvertedIndex, MetaField, Posting, SnapshotError, TermId,
};

// Unit tests exercise the measurement path, so the test binary itself
// installs the tracking allocator.
#[cfg(test)]
#[global_allocator]
static TEST_ALLOC: bench::TrackingAllocator = bench::TrackingAllocator;
