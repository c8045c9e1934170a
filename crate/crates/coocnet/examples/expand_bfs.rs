//! Grow a network from a seed term by breadth-first index expansion and
//! print the strongest edges.
//!
//!     cargo run --example expand_bfs [seed] [depth] [branch]
//!
//! Runs against a deterministic synthetic corpus; defaults expand the
//! highest-df term with depth 3 and branch 8.

use coocnet::corpus::generate_synthetic_corpus;
use coocnet::{build_bfs_traced, build_index, ExpandParams, FilterConditions, TokenizerConfig};
use std::collections::BTreeSet;

fn main() {
    let mut args = std::env::args().skip(1);
    let seed_arg = args.next();
    let depth: u32 = args.next().map(|a| a.parse().expect("depth")).unwrap_or(3);
    let branch: usize = args.next().map(|a| a.parse().expect("branch")).unwrap_or(8);

    let cfg = TokenizerConfig::default();
    let corpus = generate_synthetic_corpus(5000, 2000, 50.0, 42);
    let index = build_index(&corpus, &cfg);
    let seed_term = seed_arg.unwrap_or_else(|| {
        index
            .top_k_terms(&index.all_docs(), 1, &BTreeSet::new(), 1)
            .expect("all_docs ids are valid")
            .remove(0)
            .0
    });
    println!(
        "expanding seed {seed_term:?} over {} docs (depth {depth}, branch {branch})",
        index.doc_count()
    );

    let seed = FilterConditions::for_terms([seed_term.as_str()]);
    let params = ExpandParams {
        depth,
        branch,
        min_df: 1,
    };
    let started = std::time::Instant::now();
    let (graph, trace) = build_bfs_traced(&index, &seed, &params).expect("seed is non-empty");
    println!(
        "expanded {} condition sets in {:.3}s -> {} nodes, {} edges",
        trace.expanded_sets.len(),
        started.elapsed().as_secs_f64(),
        graph.node_count(),
        graph.edge_count()
    );
    for (u, v, w) in graph.top_edges(10) {
        println!("  {u} -- {v}  weight {w}");
    }
}
