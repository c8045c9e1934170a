//! Persist an index to its binary snapshot format and load it back,
//! then demonstrate that corruption is detected by the checksum.
//!
//!     cargo run --example snapshot_roundtrip

use coocnet::corpus::generate_synthetic_corpus;
use coocnet::{build_index, load_snapshot, save_snapshot, TokenizerConfig};

fn main() {
    let cfg = TokenizerConfig::default();
    let corpus = generate_synthetic_corpus(200, 60, 8.0, 3);
    let index = build_index(&corpus, &cfg);

    let dir = std::env::temp_dir().join("coocnet-snapshot-example");
    std::fs::create_dir_all(&dir).expect("temp dir is writable");
    let path = dir.join("corpus.idx");

    save_snapshot(&index, &path).expect("snapshot writes");
    let bytes = std::fs::metadata(&path).expect("snapshot exists").len();
    println!(
        "saved {} docs / {} terms as {} bytes -> {}",
        index.doc_count(),
        index.term_count(),
        bytes,
        path.display()
    );

    let loaded = load_snapshot(&path).expect("snapshot loads");
    assert_eq!(index, loaded);
    println!("reloaded index is identical (df of t0001 = {})", loaded.df("t0001"));

    // Flip one payload byte: the trailing checksum catches it.
    let mut corrupt = std::fs::read(&path).expect("snapshot reads");
    let mid = corrupt.len() / 2;
    corrupt[mid] ^= 0x01;
    let bad = dir.join("corrupt.idx");
    std::fs::write(&bad, &corrupt).expect("corrupt copy writes");
    match load_snapshot(&bad) {
        Err(e) => println!("corrupted copy rejected: {e}"),
        Ok(_) => unreachable!("corruption must not load"),
    }

    std::fs::remove_dir_all(&dir).ok();
}
