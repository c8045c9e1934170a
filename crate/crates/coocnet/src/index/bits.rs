//! Dense document bitsets used to aggregate frequencies over matched docs.
//!
//! High-df terms carry a precomputed bitset so that document-frequency
//! aggregation over a matched set is a word-wise AND plus popcount; rare
//! terms are probed through their posting lists instead. This keeps the
//! per-term cost bounded by `df` or `doc_count / 64`, whichever is smaller.

use super::DocId;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct DocBits {
    pub(crate) words: Vec<u64>,
    n_docs: u32,
}

impl DocBits {
    pub(crate) fn empty(n_docs: u32) -> Self {
        DocBits {
            words: vec![0; (n_docs as usize).div_ceil(64)],
            n_docs,
        }
    }

    pub(crate) fn full(n_docs: u32) -> Self {
        let mut b = DocBits {
            words: vec![!0u64; (n_docs as usize).div_ceil(64)],
            n_docs,
        };
        let tail = n_docs % 64;
        if tail != 0 {
            if let Some(last) = b.words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
        b
    }

    pub(crate) fn from_docs(docs: &[DocId], n_docs: u32) -> Self {
        let mut b = Self::empty(n_docs);
        for &d in docs {
            b.set(d.0);
        }
        b
    }

    pub(crate) fn from_words(words: &[u64], n_docs: u32) -> Self {
        DocBits {
            words: words.to_vec(),
            n_docs,
        }
    }

    #[inline]
    pub(crate) fn set(&mut self, doc: u32) {
        debug_assert!(doc < self.n_docs);
        self.words[(doc / 64) as usize] |= 1u64 << (doc % 64);
    }

    #[inline]
    pub(crate) fn contains(&self, doc: u32) -> bool {
        self.words[(doc / 64) as usize] >> (doc % 64) & 1 == 1
    }

    pub(crate) fn and_words(&mut self, other: &[u64]) {
        debug_assert_eq!(self.words.len(), other.len());
        for (w, o) in self.words.iter_mut().zip(other) {
            *w &= o;
        }
    }

    pub(crate) fn and_with(&mut self, other: &DocBits) {
        self.and_words(&other.words);
    }

    #[cfg(test)]
    pub(crate) fn count(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Sorted doc ids; used by tests and small conversions only.
    #[cfg(test)]
    pub(crate) fn to_docs(&self) -> Vec<DocId> {
        let mut out = Vec::new();
        for (wi, &w) in self.words.iter().enumerate() {
            let mut bits = w;
            while bits != 0 {
                let b = bits.trailing_zeros();
                out.push(DocId(wi as u32 * 64 + b));
                bits &= bits - 1;
            }
        }
        out
    }
}

pub(crate) fn and_count(a: &[u64], b: &[u64]) -> u32 {
    debug_assert_eq!(a.len(), b.len());
    // The baseline x86-64 target predates the POPCNT instruction, so
    // `count_ones` compiles to a 12-op fallback there; dispatching on the
    // detected CPU feature makes this hot loop roughly 4x faster. The
    // detection result is cached by std, and both paths compute the same
    // sum.
    #[cfg(target_arch = "x86_64")]
    {
        if std::arch::is_x86_feature_detected!("popcnt") {
            // SAFETY: the popcnt feature was just detected at runtime.
            return unsafe { and_count_popcnt(a, b) };
        }
    }
    and_count_generic(a, b)
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "popcnt")]
unsafe fn and_count_popcnt(a: &[u64], b: &[u64]) -> u32 {
    and_count_generic(a, b)
}

#[inline(always)]
fn and_count_generic(a: &[u64], b: &[u64]) -> u32 {
    // Wrapping adds keep the loop free of overflow branches; the sum is
    // bounded by the document count, which fits u32 by construction.
    a.iter()
        .zip(b)
        .fold(0u32, |acc, (x, y)| acc.wrapping_add((x & y).count_ones()))
}
