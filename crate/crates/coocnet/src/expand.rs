//! Index-expansion network construction.
//!
//! Instead of traversing documents, expansion grows the network outward
//! from a seed condition using only index lookups. Each step takes the
//! documents matching the current condition set, asks the index for the
//! top `branch` terms by document frequency among them (excluding the
//! condition terms themselves), and links each candidate to the term that
//! anchored the step. The candidate's frequency is exactly the number of
//! documents matching the enlarged condition set, so the edge weight comes
//! for free with the ranking.
//!
//! Growing the condition by one term per step narrows the matched
//! documents, so weights fall monotonically along any expansion path.
//! Distinct paths can reach the same term pair with different weights;
//! those merge by maximum, keeping the strongest observed association.
//! Condition sets are memoized so no set is expanded twice.
//!
//! Two drivers share the per-step logic: [`build_recursive`] explores
//! depth-first, [`build_bfs`] level by level with an explicit frontier.
//! They produce identical graphs; the benchmark harness compares their
//! cost profiles, not their output.

use crate::graph::{CoocGraph, MergePolicy};
use crate::index::{DocBits, FilterConditions, InvertedIndex, TermId};
use std::collections::HashSet;
use thiserror::Error;

/// Expansion controls: how deep to grow, how many candidates per step, and
/// the document-frequency floor a candidate must meet (values below 1 act
/// as 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExpandParams {
    pub depth: u32,
    pub branch: usize,
    pub min_df: u32,
}

impl Default for ExpandParams {
    fn default() -> Self {
        ExpandParams {
            depth: 3,
            branch: 8,
            min_df: 1,
        }
    }
}

#[derive(Debug, Error)]
pub enum ExpandError {
    /// Expansion needs at least one seed term to anchor the first step.
    #[error("expansion requires at least one seed term")]
    EmptySeed,
}

/// Which condition sets were actually expanded, in expansion order. Each
/// entry is sorted lexicographically. Useful for inspecting or testing the
/// memoization behaviour; the graph itself does not depend on it.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExpandTrace {
    pub expanded_sets: Vec<Vec<String>>,
}

/// Build the network by depth-first recursive expansion.
pub fn build_recursive(
    index: &InvertedIndex,
    seed: &FilterConditions,
    params: &ExpandParams,
) -> Result<CoocGraph, ExpandError> {
    drive(index, seed, params, false, Driver::Recursive).map(|(g, _)| g)
}

/// [`build_recursive`] plus a trace of the condition sets expanded.
pub fn build_recursive_traced(
    index: &InvertedIndex,
    seed: &FilterConditions,
    params: &ExpandParams,
) -> Result<(CoocGraph, ExpandTrace), ExpandError> {
    drive(index, seed, params, true, Driver::Recursive)
}

/// Build the network by breadth-first expansion over an explicit frontier.
/// Produces the same graph as [`build_recursive`].
pub fn build_bfs(
    index: &InvertedIndex,
    seed: &FilterConditions,
    params: &ExpandParams,
) -> Result<CoocGraph, ExpandError> {
    drive(index, seed, params, false, Driver::Bfs).map(|(g, _)| g)
}

/// [`build_bfs`] plus a trace of the condition sets expanded.
pub fn build_bfs_traced(
    index: &InvertedIndex,
    seed: &FilterConditions,
    params: &ExpandParams,
) -> Result<(CoocGraph, ExpandTrace), ExpandError> {
    drive(index, seed, params, true, Driver::Bfs)
}

#[derive(Clone, Copy)]
enum Driver {
    Recursive,
    Bfs,
}

fn drive(
    index: &InvertedIndex,
    seed: &FilterConditions,
    params: &ExpandParams,
    traced: bool,
    driver: Driver,
) -> Result<(CoocGraph, ExpandTrace), ExpandError> {
    if seed.terms.is_empty() {
        return Err(ExpandError::EmptySeed);
    }
    let mut graph = CoocGraph::new();
    // Seed terms are nodes regardless of whether anything attaches to them.
    for term in &seed.terms {
        graph.add_node(term);
    }

    let mut seed_ids: Vec<TermId> = Vec::with_capacity(seed.terms.len());
    for term in &seed.terms {
        match index.term_id(term) {
            Some(t) => seed_ids.push(t),
            // A seed term the lexicon has never seen matches no documents,
            // so the whole conjunction is empty: nothing to expand.
            None => return Ok((graph, ExpandTrace::default())),
        }
    }
    seed_ids.sort_unstable();

    let mut ex = Expander {
        index,
        meta: index.meta_bits(&seed.meta_filters),
        params,
        graph,
        visited: HashSet::new(),
        trace: if traced { Some(Vec::new()) } else { None },
    };
    // Term ids order like their strings, so the maximum id is the
    // lexicographically last seed term; it anchors the first step.
    let anchor = *seed_ids.last().expect("seed checked non-empty");
    if params.depth >= 1 {
        let bits = index.cond_bits(&seed_ids, ex.meta.as_ref());
        ex.admit(&seed_ids);
        match driver {
            Driver::Recursive => ex.go(seed_ids, bits, anchor, 1),
            Driver::Bfs => ex.bfs(seed_ids, bits, anchor),
        }
    }
    let trace = ExpandTrace {
        expanded_sets: ex.trace.unwrap_or_default(),
    };
    Ok((ex.graph, trace))
}

struct Expander<'a> {
    index: &'a InvertedIndex,
    meta: Option<DocBits>,
    params: &'a ExpandParams,
    graph: CoocGraph,
    visited: HashSet<Vec<TermId>>,
    trace: Option<Vec<Vec<String>>>,
}

impl Expander<'_> {
    /// Memoize a condition set about to be expanded; false means it was
    /// expanded before and must be skipped.
    fn admit(&mut self, set: &[TermId]) -> bool {
        if !self.visited.insert(set.to_vec()) {
            return false;
        }
        if let Some(trace) = self.trace.as_mut() {
            trace.push(set.iter().map(|&t| self.index.term(t).to_string()).collect());
        }
        true
    }

    /// Rank the expansion candidates of an admitted set. `bits` is the
    /// document bitset matching the set (already metadata-masked); callers
    /// maintain it incrementally as the set grows. `None` means the step
    /// yields nothing.
    fn candidates(&self, set: &[TermId], bits: &DocBits) -> Option<Vec<(TermId, u32)>> {
        if self.params.branch == 0 || bits.is_empty() {
            return None;
        }
        let words = self
            .index
            .top_k_core(bits, self.params.branch, set, self.params.min_df);
        if words.is_empty() {
            None
        } else {
            Some(words)
        }
    }

    /// Depth-first driver. `level` is the step being performed; callers
    /// guarantee `level <= depth` and that `set` was admitted.
    fn go(&mut self, set: Vec<TermId>, bits: DocBits, anchor: TermId, level: u32) {
        let Some(words) = self.candidates(&set, &bits) else {
            return;
        };
        for &(w, df) in &words {
            self.emit(anchor, w, df);
        }
        if level < self.params.depth {
            for (w, _) in words {
                let mut grown = set.clone();
                let pos = grown.binary_search(&w).expect_err("candidates exclude the set");
                grown.insert(pos, w);
                if self.admit(&grown) {
                    let grown_bits = self.index.narrow_bits(&bits, w);
                    self.go(grown, grown_bits, w, level + 1);
                }
            }
        }
    }

    /// Breadth-first driver over per-level frontiers.
    fn bfs(&mut self, set: Vec<TermId>, bits: DocBits, anchor: TermId) {
        let mut frontier = vec![(set, bits, anchor)];
        for level in 1..=self.params.depth {
            let mut next = Vec::new();
            for (set, bits, anchor) in frontier {
                let Some(words) = self.candidates(&set, &bits) else {
                    continue;
                };
                for &(w, df) in &words {
                    self.emit(anchor, w, df);
                }
                if level < self.params.depth {
                    for (w, _) in words {
                        let mut grown = set.clone();
                        let pos =
                            grown.binary_search(&w).expect_err("candidates exclude the set");
                        grown.insert(pos, w);
                        if self.admit(&grown) {
                            let grown_bits = self.index.narrow_bits(&bits, w);
                            next.push((grown, grown_bits, w));
                        }
                    }
                }
            }
            frontier = next;
        }
    }

    fn emit(&mut self, anchor: TermId, w: TermId, df: u32) {
        let a = self.graph.add_node(self.index.term(anchor));
        let b = self.graph.add_node(self.index.term(w));
        self.graph
            .merge_edge_by_id(a, b, df, MergePolicy::Max)
            .expect("candidate is excluded from its own condition set");
    }
}
