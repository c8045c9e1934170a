//! Generate a synthetic corpus, tokenize a document, and print the
//! document-frequency histogram that shows its Zipf-like term
//! distribution.
//!
//!     cargo run --example corpus_stats

use coocnet::corpus::generate_synthetic_corpus;
use coocnet::{build_index, tokenize, TokenizerConfig};

fn main() {
    let corpus = generate_synthetic_corpus(1000, 150, 9.0, 42);
    let cfg = TokenizerConfig::default();

    let first = &corpus[0];
    let stream = tokenize(first, &cfg);
    println!(
        "doc {} tokenizes to {} terms: {:?} ...",
        first.doc_id,
        stream.tokens.len(),
        stream
            .tokens
            .iter()
            .take(6)
            .map(|t| t.term.as_str())
            .collect::<Vec<_>>()
    );

    let index = build_index(&corpus, &cfg);
    println!(
        "\n{} docs, {} distinct terms; df histogram (df -> how many terms):",
        index.doc_count(),
        index.term_count()
    );
    // Bucket the histogram by powers of two to keep the printout short.
    let mut buckets: Vec<(u32, u64)> = Vec::new();
    for (df, terms) in index.df_histogram() {
        let bucket = df.next_power_of_two();
        match buckets.last_mut() {
            Some((b, count)) if *b == bucket => *count += terms,
            _ => buckets.push((bucket, terms)),
        }
    }
    for (bucket, count) in buckets {
        println!("  df <= {bucket:4}: {count:4} terms {}", "#".repeat(count.min(60) as usize));
    }

    let top = index
        .top_k_terms(&index.all_docs(), 5, &Default::default(), 1)
        .expect("all_docs ids are valid");
    println!("\nmost frequent terms: {top:?}");
}
