//! Inverted index over a tokenized corpus.
//!
//! Every lexicon entry maps a term to its posting list: the documents the
//! term occurs in, with per-document term frequency and token positions.
//! Term ids are assigned by lexicographic rank, so comparing ids and
//! comparing term strings give the same order. Posting lists are sorted by
//! document ordinal, which is the document's position in the source corpus.
//!
//! Queries come in through [`InvertedIndex::match_docs`] (conjunction of
//! term containment and metadata equality, computed by intersecting posting
//! lists smallest-first) and the aggregation helpers
//! [`InvertedIndex::term_doc_frequencies`] and [`InvertedIndex::top_k_terms`].

mod bits;
mod snapshot;

pub use snapshot::{load_snapshot, save_snapshot, SnapshotError};

pub(crate) use bits::{and_count, DocBits};

use crate::corpus::{Document, Tokenizer, TokenizerConfig};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use thiserror::Error;

/// Document ordinal: the position of the document in the corpus the index
/// was built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DocId(pub u32);

/// Term id; equal to the term's lexicographic rank within the lexicon.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermId(pub u32);

/// One posting: a document containing the term, how often, and where.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Posting {
    pub doc: DocId,
    /// Term frequency; always equals `positions.len()`.
    pub tf: u32,
    /// Token positions, strictly increasing.
    pub positions: Vec<u32>,
}

/// Per-document metadata kept alongside the postings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DocMeta {
    pub doc_id: String,
    pub discipline: String,
    pub category: String,
    /// Number of distinct terms in the document.
    pub distinct_terms: u32,
}

/// Metadata fields that can be filtered on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MetaField {
    Discipline,
    Category,
}

impl std::str::FromStr for MetaField {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "discipline" => Ok(MetaField::Discipline),
            "category" => Ok(MetaField::Category),
            other => Err(format!(
                "unknown filter field {other:?} (expected discipline or category)"
            )),
        }
    }
}

impl fmt::Display for MetaField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MetaField::Discipline => "discipline",
            MetaField::Category => "category",
        })
    }
}

/// A conjunctive query: documents must contain every term and carry every
/// required metadata label. Empty conditions match the whole corpus.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FilterConditions {
    pub terms: BTreeSet<String>,
    pub meta_filters: BTreeMap<MetaField, String>,
}

impl FilterConditions {
    pub fn for_terms<I, S>(terms: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        FilterConditions {
            terms: terms.into_iter().map(Into::into).collect(),
            meta_filters: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Error)]
pub enum IndexError {
    #[error("unknown document ordinal {0}")]
    UnknownDoc(u32),
}

/// The inverted index: lexicon, posting lists and document metadata.
#[derive(Clone, Debug, PartialEq)]
pub struct InvertedIndex {
    docs: Vec<DocMeta>,
    doc_lookup: HashMap<String, DocId>,
    /// Terms sorted lexicographically; index == TermId.
    terms: Vec<String>,
    lexicon: HashMap<String, TermId>,
    postings: Vec<Vec<Posting>>,
    /// Dense doc bitsets for terms where that is cheaper than probing.
    bitsets: Vec<Option<Box<[u64]>>>,
    /// Term ids ordered by document frequency descending, term ascending.
    df_order: Vec<TermId>,
    cfg: TokenizerConfig,
}

/// Build an index over `corpus` with the given tokenizer settings. The config
/// is stored in the index (and in snapshots) so later consumers can
/// re-tokenize documents consistently.
///
/// Doc ids must be unique; [`crate::load_corpus`] enforces that for file
/// input.
pub fn build_index(corpus: &[Document], cfg: &TokenizerConfig) -> InvertedIndex {
    let tokenizer = Tokenizer::new(cfg);
    let mut docs: Vec<DocMeta> = Vec::with_capacity(corpus.len());
    let mut doc_lookup: HashMap<String, DocId> = HashMap::with_capacity(corpus.len());
    let mut terms: Vec<String> = Vec::new();
    let mut first_seen: HashMap<String, u32> = HashMap::new();
    let mut postings: Vec<Vec<Posting>> = Vec::new();

    for (ord, doc) in corpus.iter().enumerate() {
        let d = DocId(ord as u32);
        let prev = doc_lookup.insert(doc.doc_id.clone(), d);
        assert!(prev.is_none(), "duplicate doc_id {:?} in corpus", doc.doc_id);
        let stream = tokenizer.tokenize(doc);
        let mut distinct = 0u32;
        for tok in stream.tokens {
            let tid = match first_seen.get(&tok.term) {
                Some(&t) => t,
                None => {
                    let t = terms.len() as u32;
                    first_seen.insert(tok.term.clone(), t);
                    terms.push(tok.term);
                    postings.push(Vec::new());
                    t
                }
            };
            let plist = &mut postings[tid as usize];
            match plist.last_mut() {
                Some(p) if p.doc == d => {
                    p.tf += 1;
                    p.positions.push(tok.position);
                }
                _ => {
                    distinct += 1;
                    plist.push(Posting {
                        doc: d,
                        tf: 1,
                        positions: vec![tok.position],
                    });
                }
            }
        }
        docs.push(DocMeta {
            doc_id: doc.doc_id.clone(),
            discipline: doc.discipline.clone(),
            category: doc.category.clone(),
            distinct_terms: distinct,
        });
    }

    // Re-number terms by lexicographic rank.
    let mut order: Vec<u32> = (0..terms.len() as u32).collect();
    order.sort_unstable_by(|&a, &b| terms[a as usize].cmp(&terms[b as usize]));
    let sorted_terms: Vec<String> = order
        .iter()
        .map(|&o| std::mem::take(&mut terms[o as usize]))
        .collect();
    let sorted_postings: Vec<Vec<Posting>> = order
        .iter()
        .map(|&o| std::mem::take(&mut postings[o as usize]))
        .collect();

    InvertedIndex::assemble(docs, doc_lookup, sorted_terms, sorted_postings, cfg.clone())
}

impl InvertedIndex {
    /// Finish construction from already-sorted parts: derive bitsets and the
    /// df ordering. Shared by [`build_index`] and snapshot loading.
    fn assemble(
        docs: Vec<DocMeta>,
        doc_lookup: HashMap<String, DocId>,
        terms: Vec<String>,
        postings: Vec<Vec<Posting>>,
        cfg: TokenizerConfig,
    ) -> InvertedIndex {
        let n = docs.len();
        let words = n.div_ceil(64);
        let bitsets = postings
            .iter()
            .map(|pl| {
                // dense pays off once the posting list outweighs a word scan
                if !pl.is_empty() && pl.len() * 64 >= n {
                    let mut bits = vec![0u64; words];
                    for p in pl {
                        bits[(p.doc.0 / 64) as usize] |= 1u64 << (p.doc.0 % 64);
                    }
                    Some(bits.into_boxed_slice())
                } else {
                    None
                }
            })
            .collect();
        let mut df_order: Vec<TermId> = (0..terms.len() as u32).map(TermId).collect();
        df_order.sort_unstable_by(|&a, &b| {
            postings[b.0 as usize]
                .len()
                .cmp(&postings[a.0 as usize].len())
                .then(a.0.cmp(&b.0))
        });
        let lexicon = terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), TermId(i as u32)))
            .collect();
        InvertedIndex {
            docs,
            doc_lookup,
            terms,
            lexicon,
            postings,
            bitsets,
            df_order,
            cfg,
        }
    }

    pub fn doc_count(&self) -> usize {
        self.docs.len()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// The doc_id string for an ordinal. Panics on out-of-range input.
    pub fn doc_id(&self, d: DocId) -> &str {
        &self.docs[d.0 as usize].doc_id
    }

    pub fn doc_ordinal(&self, doc_id: &str) -> Option<DocId> {
        self.doc_lookup.get(doc_id).copied()
    }

    pub fn doc_meta(&self, d: DocId) -> &DocMeta {
        &self.docs[d.0 as usize]
    }

    pub fn all_docs(&self) -> Vec<DocId> {
        (0..self.docs.len() as u32).map(DocId).collect()
    }

    /// Lexicon terms in lexicographic (= term id) order.
    pub fn terms(&self) -> impl Iterator<Item = &str> {
        self.terms.iter().map(String::as_str)
    }

    pub fn term(&self, t: TermId) -> &str {
        &self.terms[t.0 as usize]
    }

    pub fn term_id(&self, term: &str) -> Option<TermId> {
        self.lexicon.get(term).copied()
    }

    /// Document frequency of a term, 0 when absent from the lexicon.
    pub fn df(&self, term: &str) -> u32 {
        self.term_id(term)
            .map(|t| self.postings[t.0 as usize].len() as u32)
            .unwrap_or(0)
    }

    pub(crate) fn df_by_id(&self, t: TermId) -> u32 {
        self.postings[t.0 as usize].len() as u32
    }

    /// Posting list for a term, empty when the term is not in the lexicon.
    pub fn postings(&self, term: &str) -> &[Posting] {
        match self.term_id(term) {
            Some(t) => &self.postings[t.0 as usize],
            None => &[],
        }
    }

    pub fn tokenizer_config(&self) -> &TokenizerConfig {
        &self.cfg
    }

    /// Documents matching the conditions, sorted by ordinal. Terms absent
    /// from the lexicon match nothing. Posting lists are intersected
    /// smallest-first; metadata filters are applied to the result.
    pub fn match_docs(&self, cond: &FilterConditions) -> Vec<DocId> {
        let mut result: Vec<DocId>;
        if cond.terms.is_empty() {
            result = self.all_docs();
        } else {
            let mut lists: Vec<&[Posting]> = Vec::with_capacity(cond.terms.len());
            for term in &cond.terms {
                match self.term_id(term) {
                    Some(t) => lists.push(&self.postings[t.0 as usize]),
                    None => return Vec::new(),
                }
            }
            lists.sort_unstable_by_key(|l| l.len());
            result = lists[0].iter().map(|p| p.doc).collect();
            for list in &lists[1..] {
                if result.is_empty() {
                    break;
                }
                result = intersect_sorted(&result, list);
            }
        }
        if !cond.meta_filters.is_empty() {
            result.retain(|&d| self.meta_matches(d, &cond.meta_filters));
        }
        result
    }

    fn meta_matches(&self, d: DocId, filters: &BTreeMap<MetaField, String>) -> bool {
        let meta = &self.docs[d.0 as usize];
        filters.iter().all(|(field, want)| match field {
            MetaField::Discipline => meta.discipline == *want,
            MetaField::Category => meta.category == *want,
        })
    }

    /// Document frequency of every term within `docs`: how many of the given
    /// documents contain it. Terms with zero frequency are omitted.
    /// Duplicate ids in `docs` collapse; unknown ordinals are an error.
    pub fn term_doc_frequencies(&self, docs: &[DocId]) -> Result<HashMap<String, u32>, IndexError> {
        let bits = self.checked_bits(docs)?;
        let mut out = HashMap::new();
        for t in 0..self.terms.len() as u32 {
            let df = self.df_in(TermId(t), &bits);
            if df > 0 {
                out.insert(self.terms[t as usize].clone(), df);
            }
        }
        Ok(out)
    }

    /// The `k` terms with the highest document frequency within `docs`,
    /// excluding `exclude` and anything below the `min_df` floor. Ties are
    /// broken by term ascending. Fewer than `k` entries come back when the
    /// vocabulary runs out.
    pub fn top_k_terms(
        &self,
        docs: &[DocId],
        k: usize,
        exclude: &BTreeSet<String>,
        min_df: u32,
    ) -> Result<Vec<(String, u32)>, IndexError> {
        assert!(k >= 1, "k must be at least 1");
        let bits = self.checked_bits(docs)?;
        let mut excl: Vec<TermId> = exclude
            .iter()
            .filter_map(|t| self.term_id(t))
            .collect();
        excl.sort_unstable();
        Ok(self
            .top_k_core(&bits, k, &excl, min_df)
            .into_iter()
            .map(|(t, df)| (self.terms[t.0 as usize].clone(), df))
            .collect())
    }

    fn checked_bits(&self, docs: &[DocId]) -> Result<DocBits, IndexError> {
        let n = self.docs.len() as u32;
        for &d in docs {
            if d.0 >= n {
                return Err(IndexError::UnknownDoc(d.0));
            }
        }
        Ok(DocBits::from_docs(docs, n))
    }

    /// Frequency of one term inside a doc set: AND the dense bitset when one
    /// exists, otherwise probe the posting list.
    pub(crate) fn df_in(&self, t: TermId, bits: &DocBits) -> u32 {
        match &self.bitsets[t.0 as usize] {
            Some(b) => and_count(b, &bits.words),
            None => self.postings[t.0 as usize]
                .iter()
                .filter(|p| bits.contains(p.doc.0))
                .count() as u32,
        }
    }

    /// Top-k by df over a doc bitset. Scans candidates in global-df order
    /// and stops once the global df (an upper bound on the local df) falls
    /// below both the floor and the current k-th best, which can never
    /// exclude a true member of the top k.
    pub(crate) fn top_k_core(
        &self,
        bits: &DocBits,
        k: usize,
        exclude_sorted: &[TermId],
        min_df: u32,
    ) -> Vec<(TermId, u32)> {
        let floor = min_df.max(1);
        // kept sorted by (df desc, term asc); may exceed k until the final cut
        let mut found: Vec<(TermId, u32)> = Vec::new();
        for &t in &self.df_order {
            let global_df = self.df_by_id(t);
            if global_df < floor {
                break;
            }
            if found.len() >= k && global_df < found[k - 1].1 {
                break;
            }
            if exclude_sorted.binary_search(&t).is_ok() {
                continue;
            }
            let df = self.df_in(t, bits);
            if df < floor {
                continue;
            }
            let pos = found
                .binary_search_by(|&(ot, odf)| df.cmp(&odf).then(ot.cmp(&t)))
                .unwrap_err();
            found.insert(pos, (t, df));
        }
        found.truncate(k);
        found
    }

    /// Doc bitset for a conjunction of known terms plus an optional
    /// metadata mask. An empty term slice yields the mask (or the full
    /// corpus).
    pub(crate) fn cond_bits(&self, term_ids: &[TermId], meta: Option<&DocBits>) -> DocBits {
        let n = self.docs.len() as u32;
        let mut acc: Option<DocBits> = None;
        for &t in term_ids {
            let tb = self.term_bits_owned(t);
            match acc.as_mut() {
                None => acc = Some(tb),
                Some(a) => {
                    a.and_with(&tb);
                    if a.is_empty() {
                        break;
                    }
                }
            }
        }
        let mut bits = match acc {
            Some(b) => b,
            None => match meta {
                Some(m) => return m.clone(),
                None => DocBits::full(n),
            },
        };
        if let Some(m) = meta {
            bits.and_with(m);
        }
        bits
    }

    /// `bits` narrowed to the documents that also contain `t`. Dense terms
    /// AND their precomputed bitset; rare terms rebuild the result from
    /// their posting list, costing O(df) instead of O(doc_count). Equal to
    /// `cond_bits` over the enlarged set, but incremental.
    pub(crate) fn narrow_bits(&self, bits: &DocBits, t: TermId) -> DocBits {
        match &self.bitsets[t.0 as usize] {
            Some(b) => {
                let mut out = bits.clone();
                out.and_words(b);
                out
            }
            None => {
                let mut out = DocBits::empty(self.docs.len() as u32);
                for p in &self.postings[t.0 as usize] {
                    if bits.contains(p.doc.0) {
                        out.set(p.doc.0);
                    }
                }
                out
            }
        }
    }

    fn term_bits_owned(&self, t: TermId) -> DocBits {
        let n = self.docs.len() as u32;
        match &self.bitsets[t.0 as usize] {
            Some(b) => DocBits::from_words(b, n),
            None => {
                let mut bits = DocBits::empty(n);
                for p in &self.postings[t.0 as usize] {
                    bits.set(p.doc.0);
                }
                bits
            }
        }
    }

    /// Bitset of documents passing the metadata filters, or `None` when
    /// there are no filters.
    pub(crate) fn meta_bits(&self, filters: &BTreeMap<MetaField, String>) -> Option<DocBits> {
        if filters.is_empty() {
            return None;
        }
        let mut bits = DocBits::empty(self.docs.len() as u32);
        for (i, _) in self.docs.iter().enumerate() {
            if self.meta_matches(DocId(i as u32), filters) {
                bits.set(i as u32);
            }
        }
        Some(bits)
    }

    /// Histogram of document frequencies: (df, number of terms with that
    /// df), sorted by df ascending.
    pub fn df_histogram(&self) -> Vec<(u32, u64)> {
        let mut hist: BTreeMap<u32, u64> = BTreeMap::new();
        for pl in &self.postings {
            *hist.entry(pl.len() as u32).or_insert(0) += 1;
        }
        hist.into_iter().collect()
    }
}

fn intersect_sorted(acc: &[DocId], postings: &[Posting]) -> Vec<DocId> {
    let mut out = Vec::with_capacity(acc.len().min(postings.len()));
    let (mut i, mut j) = (0, 0);
    while i < acc.len() && j < postings.len() {
        match acc[i].0.cmp(&postings[j].doc.0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(acc[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}
