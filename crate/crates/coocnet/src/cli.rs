//! Command-line frontend.
//!
//! One subcommand per pipeline stage: `index` turns a corpus into a
//! snapshot, `build` turns a snapshot into a graph export, `bench` runs
//! the measurement protocol, `export` re-exports a stored graph, `stats`
//! dumps the document-frequency histogram, and `synth` generates a
//! synthetic corpus. Every knob is a flag, so a run is reproducible from
//! its command line: same argv plus same input files yields byte-identical
//! outputs (benchmark timings aside).
//!
//! Exit codes: 0 on success, 1 for domain failures (missing files, bad
//! data, unknown seeds), 2 for usage errors.

use crate::baseline::{build_traversal, TraversalError};
use crate::bench::{report, run_benchmark, Algo, BenchError};
use crate::corpus::{
    load_corpus, load_dictionary, load_stopwords, CorpusError, CorpusFormat, Field,
    TokenizerConfig,
};
use crate::expand::{build_bfs, build_recursive, ExpandError, ExpandParams};
use crate::graph::{export_graph, load_graph_json, CoocGraph, GraphError, GraphFormat};
use crate::index::{
    build_index, load_snapshot, save_snapshot, FilterConditions, IndexError, InvertedIndex,
    MetaField, SnapshotError,
};
use clap::{Args, Parser, Subcommand};
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use thiserror::Error;

/// Parsed command line for one invocation.
#[derive(Debug, Parser)]
#[command(
    name = "coocnet",
    version,
    about = "Build and benchmark keyword co-occurrence networks over an inverted index"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tokenize a corpus and save an index snapshot.
    Index(IndexArgs),
    /// Build a co-occurrence network from a snapshot and export it.
    Build(BuildArgs),
    /// Measure construction strategies and write samples plus a summary.
    Bench(BenchArgs),
    /// Re-export a stored graph-json file, e.g. at a different limit.
    Export(ExportArgs),
    /// Write the document-frequency histogram of an index as CSV.
    Stats(StatsArgs),
    /// Generate a synthetic corpus with Zipf-distributed terms.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
pub struct IndexArgs {
    /// Corpus file, one JSON document per line.
    #[arg(long)]
    pub corpus: PathBuf,
    /// Stopword list, one word per line (# comments allowed).
    #[arg(long)]
    pub stopwords: Option<PathBuf>,
    /// User dictionary of multi-word phrases, one per line.
    #[arg(long)]
    pub dict: Option<PathBuf>,
    /// Document fields to tokenize, comma separated.
    #[arg(long, value_delimiter = ',', value_parser = parse_field)]
    pub fields: Option<Vec<Field>>,
    /// Snapshot file to write.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    /// Index snapshot to load.
    #[arg(long)]
    pub index: PathBuf,
    /// Corpus file; required by --algo traversal, which re-reads documents.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Construction strategy.
    #[arg(long, value_enum)]
    pub algo: Algo,
    /// Seed term (repeatable). Expansion requires at least one.
    #[arg(long = "seed")]
    pub seeds: Vec<String>,
    /// Metadata filter as field=value (repeatable; fields: discipline, category).
    #[arg(long = "filter", value_parser = parse_filter)]
    pub filters: Vec<(MetaField, String)>,
    /// Expansion depth.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    pub depth: u32,
    /// Candidate terms per expansion step.
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
    pub branch: u64,
    /// Document-frequency floor for expansion candidates.
    #[arg(long = "min-df", default_value_t = 1)]
    pub min_df: u32,
    /// Maximum number of edges exported.
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub limit: u64,
    /// Export format.
    #[arg(long, value_enum, default_value = "edge-csv")]
    pub format: GraphFormat,
    /// Graph file to write.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Index snapshot to load.
    #[arg(long)]
    pub index: PathBuf,
    /// Corpus file backing the traversal runs.
    #[arg(long)]
    pub corpus: PathBuf,
    /// Seed term (repeatable, at least one).
    #[arg(long = "seed", required = true)]
    pub seeds: Vec<String>,
    /// Expansion depth.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    pub depth: u32,
    /// Candidate terms per expansion step.
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
    pub branch: u64,
    /// Document-frequency floor for expansion candidates.
    #[arg(long = "min-df", default_value_t = 1)]
    pub min_df: u32,
    /// Measured repetitions per (seed, algorithm).
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..))]
    pub reps: u32,
    /// Directory for samples.csv and summary.json.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    /// Graph file to re-export (graph-json format).
    pub input: PathBuf,
    /// Maximum number of edges exported.
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub limit: u64,
    /// Export format.
    #[arg(long, value_enum, default_value = "edge-csv")]
    pub format: GraphFormat,
    /// Graph file to write.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// Index snapshot to load.
    #[arg(long)]
    pub index: PathBuf,
    /// CSV file to write (columns df, term_count).
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Number of documents to generate.
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub docs: u64,
    /// Vocabulary size.
    #[arg(long, default_value_t = 500, value_parser = clap::value_parser!(u64).range(1..))]
    pub vocab: u64,
    /// Mean document length (Poisson).
    #[arg(long = "mean-len", default_value_t = 50.0)]
    pub mean_len: f64,
    /// RNG seed; the corpus is a pure function of the flags.
    #[arg(long = "rng-seed", default_value_t = 42)]
    pub rng_seed: u64,
    /// Corpus file to write, one JSON document per line.
    #[arg(long)]
    pub out: PathBuf,
}

fn parse_field(s: &str) -> Result<Field, String> {
    s.parse()
}

fn parse_filter(s: &str) -> Result<(MetaField, String), String> {
    let (field, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected field=value, got {s:?}"))?;
    Ok((field.parse()?, value.to_string()))
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error(transparent)]
    Snapshot(#[from] SnapshotError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Traversal(#[from] TraversalError),
    #[error(transparent)]
    Expand(#[from] ExpandError),
    #[error(transparent)]
    Bench(#[from] BenchError),
    #[error("--algo traversal requires --corpus, because it re-reads the documents")]
    TraversalNeedsCorpus,
    #[error("i/o error on {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Parse `argv` (including the program name) and run it. Returns the
/// process exit code instead of exiting, so tests and embedders can call
/// it directly.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(argv) {
        Ok(cfg) => cfg,
        Err(err) => {
            // clap classifies help/version as non-errors (exit 0) and real
            // usage problems as exit 2
            let code = err.exit_code();
            let _ = err.print();
            return code;
        }
    };
    match run(&cfg) {
        Ok(()) => 0,
        Err(err) => {
            print_error(&err);
            1
        }
    }
}

fn print_error(err: &CliError) {
    eprint!("error: {err}");
    let mut source = std::error::Error::source(err);
    while let Some(s) = source {
        eprint!(": {s}");
        source = s.source();
    }
    eprintln!();
}

/// Execute one parsed invocation.
pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    match &cfg.command {
        Command::Index(args) => cmd_index(args),
        Command::Build(args) => cmd_build(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Export(args) => cmd_export(args),
        Command::Stats(args) => cmd_stats(args),
        Command::Synth(args) => cmd_synth(args),
    }
}

fn cmd_index(args: &IndexArgs) -> Result<(), CliError> {
    let mut cfg = TokenizerConfig::default();
    if let Some(path) = &args.stopwords {
        cfg.stopwords = load_stopwords(path)?;
    }
    if let Some(path) = &args.dict {
        cfg.user_dictionary = load_dictionary(path)?;
    }
    if let Some(fields) = &args.fields {
        cfg.fields_used = fields.clone();
    }
    let corpus = load_corpus(&args.corpus, CorpusFormat::Jsonl)?;
    let index = build_index(&corpus, &cfg);
    save_snapshot(&index, &args.out)?;
    println!(
        "indexed {} documents, {} terms -> {}",
        index.doc_count(),
        index.term_count(),
        args.out.display()
    );
    Ok(())
}

fn conditions(seeds: &[String], filters: &[(MetaField, String)]) -> FilterConditions {
    FilterConditions {
        terms: seeds.iter().cloned().collect(),
        meta_filters: filters.iter().cloned().collect(),
    }
}

fn cmd_build(args: &BuildArgs) -> Result<(), CliError> {
    let index = load_snapshot(&args.index)?;
    let cond = conditions(&args.seeds, &args.filters);
    let params = ExpandParams {
        depth: args.depth,
        branch: args.branch as usize,
        min_df: args.min_df,
    };
    let graph = match args.algo {
        Algo::Traversal => {
            let corpus_path = args.corpus.as_ref().ok_or(CliError::TraversalNeedsCorpus)?;
            let corpus = load_corpus(corpus_path, CorpusFormat::Jsonl)?;
            build_traversal(&index, &corpus, index.tokenizer_config(), &cond)?
        }
        Algo::Recursive => build_recursive(&index, &cond, &params)?,
        Algo::Bfs => build_bfs(&index, &cond, &params)?,
    };
    write_graph(&graph, args.limit as usize, args.format, &args.out)
}

fn write_graph(
    graph: &CoocGraph,
    limit: usize,
    format: GraphFormat,
    out: &Path,
) -> Result<(), CliError> {
    export_graph(graph, limit, format, out)?;
    println!(
        "wrote {} of {} edges -> {}",
        graph.edge_count().min(limit),
        graph.edge_count(),
        out.display()
    );
    Ok(())
}

fn cmd_bench(args: &BenchArgs) -> Result<(), CliError> {
    let index = load_snapshot(&args.index)?;
    let corpus = load_corpus(&args.corpus, CorpusFormat::Jsonl)?;
    let params = ExpandParams {
        depth: args.depth,
        branch: args.branch as usize,
        min_df: args.min_df,
    };
    let samples = run_benchmark(
        &index,
        &corpus,
        index.tokenizer_config(),
        &args.seeds,
        &params,
        args.reps,
        &[Algo::Traversal, Algo::Bfs],
    )?;
    report(&samples, &args.out)?;
    println!(
        "wrote {} samples and summary -> {}",
        samples.len(),
        args.out.display()
    );
    Ok(())
}

fn cmd_export(args: &ExportArgs) -> Result<(), CliError> {
    let graph = load_graph_json(&args.input)?;
    write_graph(&graph, args.limit as usize, args.format, &args.out)
}

fn cmd_stats(args: &StatsArgs) -> Result<(), CliError> {
    let index: InvertedIndex = load_snapshot(&args.index)?;
    let histogram = index.df_histogram();
    let io_err = |source: std::io::Error| CliError::Io {
        path: args.out.clone(),
        source,
    };
    let csv_err = |e: csv::Error| match e.into_kind() {
        csv::ErrorKind::Io(source) => io_err(source),
        other => io_err(std::io::Error::other(format!("{other:?}"))),
    };
    let mut w = csv::Writer::from_path(&args.out).map_err(csv_err)?;
    w.write_record(["df", "term_count"]).map_err(csv_err)?;
    for (df, term_count) in &histogram {
        w.write_record([df.to_string(), term_count.to_string()])
            .map_err(csv_err)?;
    }
    w.flush().map_err(io_err)?;
    println!(
        "wrote df histogram ({} rows) -> {}",
        histogram.len(),
        args.out.display()
    );
    Ok(())
}

fn cmd_synth(args: &SynthArgs) -> Result<(), CliError> {
    let corpus = crate::corpus::generate_synthetic_corpus(
        args.docs as usize,
        args.vocab as usize,
        args.mean_len,
        args.rng_seed,
    );
    let mut body = String::new();
    for doc in &corpus {
        body.push_str(&serde_json::to_string(doc).expect("document serializes"));
        body.push('\n');
    }
    std::fs::write(&args.out, body).map_err(|source| CliError::Io {
        path: args.out.clone(),
        source,
    })?;
    println!(
        "wrote {} synthetic documents -> {}",
        corpus.len(),
        args.out.display()
    );
    Ok(())
}
