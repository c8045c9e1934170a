//! Synthetic corpus generation for benchmarks and scaling experiments.

use super::{Corpus, Document};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson, Zipf};

/// Generate `n_docs` synthetic documents. Token counts are Poisson-distributed
/// around `mean_len` and term ranks follow a Zipf distribution with exponent
/// 1.0 over a vocabulary of `vocab_size` terms named `t0001`, `t0002`, ...
/// The output is a pure function of the arguments: the same `rng_seed` always
/// yields the same corpus.
///
/// Doc ids are `S0` .. `S{n-1}`. Discipline and category labels cycle through
/// small fixed sets so metadata filters have something to match.
pub fn generate_synthetic_corpus(
    n_docs: usize,
    vocab_size: usize,
    mean_len: f64,
    rng_seed: u64,
) -> Corpus {
    assert!(vocab_size >= 1, "vocab_size must be at least 1");
    assert!(mean_len > 0.0, "mean_len must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let lengths = Poisson::new(mean_len).expect("valid Poisson mean");
    let ranks = Zipf::new(vocab_size as f64, 1.0).expect("valid Zipf parameters");

    let mut docs = Vec::with_capacity(n_docs);
    for i in 0..n_docs {
        let len = lengths.sample(&mut rng) as usize;
        let mut title = String::new();
        for j in 0..len {
            if j > 0 {
                title.push(' ');
            }
            let rank = ranks.sample(&mut rng) as usize;
            title.push_str(&term_name(rank));
        }
        docs.push(Document {
            doc_id: format!("S{i}"),
            title,
            abstract_text: String::new(),
            keywords: Vec::new(),
            discipline: format!("d{}", i % 3),
            category: format!("c{}", i % 2),
        });
    }
    docs
}

/// Term name for a 1-based Zipf rank.
fn term_name(rank: usize) -> String {
    format!("t{rank:04}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{tokenize, TokenizerConfig};

    #[test]
    fn deterministic_for_fixed_seed() {
        let a = generate_synthetic_corpus(50, 100, 10.0, 7);
        let b = generate_synthetic_corpus(50, 100, 10.0, 7);
        assert_eq!(a, b);
        let c = generate_synthetic_corpus(50, 100, 10.0, 8);
        assert_ne!(a, c);
    }

    #[test]
    fn doc_ids_are_sequential() {
        let docs = generate_synthetic_corpus(5, 10, 3.0, 1);
        let ids: Vec<&str> = docs.iter().map(|d| d.doc_id.as_str()).collect();
        assert_eq!(ids, vec!["S0", "S1", "S2", "S3", "S4"]);
    }

    #[test]
    fn mean_token_count_close_to_requested() {
        let docs = generate_synthetic_corpus(10_000, 500, 50.0, 42);
        let cfg = TokenizerConfig::default();
        let total: usize = docs.iter().map(|d| tokenize(d, &cfg).tokens.len()).sum();
        let mean = total as f64 / docs.len() as f64;
        assert!(
            (mean - 50.0).abs() / 50.0 < 0.05,
            "sample mean {mean} deviates more than 5% from 50"
        );
    }

    #[test]
    fn ranks_stay_in_vocabulary() {
        let docs = generate_synthetic_corpus(200, 25, 8.0, 3);
        let cfg = TokenizerConfig::default();
        for doc in &docs {
            for tok in tokenize(doc, &cfg).tokens {
                let rank: usize = tok.term[1..].parse().unwrap();
                assert!((1..=25).contains(&rank), "rank {rank} out of range");
            }
        }
    }
}
