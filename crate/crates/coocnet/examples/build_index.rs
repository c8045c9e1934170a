//! Build an inverted index from a handful of documents and query it:
//! postings, document frequencies, matching, and top-k ranking.
//!
//!     cargo run --example build_index

use coocnet::corpus::{Document, TokenizerConfig};
use coocnet::{build_index, FilterConditions, MetaField};
use std::collections::BTreeSet;

fn main() {
    let mut docs = vec![
        Document::new("D1", "Shallow networks from deep corpora"),
        Document::new("D2", "Deep corpora and shallow indexes"),
        Document::new("D3", "Indexes for networks of keywords"),
        Document::new("D4", "Keywords in deep networks"),
    ];
    docs[0].discipline = "informatics".into();
    docs[1].discipline = "informatics".into();
    docs[2].discipline = "linguistics".into();
    docs[3].discipline = "linguistics".into();

    // Stopwords drop noise terms before indexing.
    let mut cfg = TokenizerConfig::default();
    cfg.stopwords = ["and", "for", "from", "in", "of"]
        .into_iter()
        .map(str::to_string)
        .collect();

    let index = build_index(&docs, &cfg);
    println!(
        "{} documents, {} distinct terms",
        index.doc_count(),
        index.term_count()
    );

    println!("\npostings for \"networks\":");
    for posting in index.postings("networks") {
        println!(
            "  {} tf={} positions={:?}",
            index.doc_id(posting.doc),
            posting.tf,
            posting.positions
        );
    }

    println!("\ndocument frequencies:");
    for term in index.terms() {
        println!("  {term}: {}", index.df(term));
    }

    let mut cond = FilterConditions::for_terms(["deep"]);
    cond.meta_filters
        .insert(MetaField::Discipline, "informatics".into());
    let matched = index.match_docs(&cond);
    println!("\ndocs with \"deep\" in informatics:");
    for d in &matched {
        println!("  {}", index.doc_id(*d));
    }

    let top = index
        .top_k_terms(&matched, 3, &BTreeSet::from(["deep".into()]), 1)
        .expect("matched ids are valid");
    println!("top terms among those docs (seed excluded): {top:?}");
}
