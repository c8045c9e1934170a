//! Full-traversal network construction.
//!
//! The straightforward way to build a co-occurrence network: find every
//! document matching the filter conditions, re-tokenize each one from the
//! raw corpus, and connect all distinct term pairs within a document,
//! summing one per co-occurring document. Edge weights are therefore exact
//! pair document frequencies over the matched set.
//!
//! Tokenization runs again here even though the index already saw every
//! document once; that repeated text-processing cost is the point of this
//! strategy and is what the benchmark harness measures it on.

use crate::corpus::{Document, Tokenizer, TokenizerConfig};
use crate::graph::{CoocGraph, MergePolicy};
use crate::index::{FilterConditions, InvertedIndex};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TraversalError {
    /// The index references a doc_id the supplied corpus does not contain.
    #[error("document {0:?} is in the index but not in the corpus")]
    MissingDoc(String),
}

/// Build the network by traversing every matched document.
///
/// `cfg` should match the configuration the index was built with (use
/// [`InvertedIndex::tokenizer_config`]); it is taken explicitly so callers
/// can see that tokenization happens here. Nodes are all distinct terms of
/// the matched documents, including terms that end up with no edges.
pub fn build_traversal(
    index: &InvertedIndex,
    corpus: &[Document],
    cfg: &TokenizerConfig,
    cond: &FilterConditions,
) -> Result<CoocGraph, TraversalError> {
    let matched = index.match_docs(cond);
    let by_id: HashMap<&str, &Document> =
        corpus.iter().map(|d| (d.doc_id.as_str(), d)).collect();
    let tokenizer = Tokenizer::new(cfg);
    let mut graph = CoocGraph::new();

    for d in matched {
        let doc_id = index.doc_id(d);
        let doc = by_id
            .get(doc_id)
            .copied()
            .ok_or_else(|| TraversalError::MissingDoc(doc_id.to_string()))?;
        let mut terms: Vec<String> = tokenizer
            .tokenize(doc)
            .tokens
            .into_iter()
            .map(|t| t.term)
            .collect();
        terms.sort_unstable();
        terms.dedup();
        let ids: Vec<_> = terms.iter().map(|t| graph.add_node(t)).collect();
        for i in 0..ids.len() {
            for j in (i + 1)..ids.len() {
                graph
                    .merge_edge_by_id(ids[i], ids[j], 1, MergePolicy::Sum)
                    .expect("deduplicated terms cannot form self-loops");
            }
        }
    }
    Ok(graph)
}
