//! End-to-end checks of the installed binary: exit codes, the documented
//! example invocations, and byte-level reproducibility of exports.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_coocnet")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary should spawn")
}

fn assert_exit(out: &Output, code: i32, context: &str) {
    assert_eq!(
        out.status.code(),
        Some(code),
        "{context}: stdout={} stderr={}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn write_c3(dir: &Path) -> PathBuf {
    let path = dir.join("c3.jsonl");
    let lines = [
        r#"{"doc_id": "D1", "title": "a b c", "discipline": "phys", "category": "x"}"#,
        r#"{"doc_id": "D2", "title": "a b", "discipline": "chem", "category": "x"}"#,
        r#"{"doc_id": "D3", "title": "b c", "discipline": "phys", "category": "y"}"#,
    ];
    std::fs::write(&path, lines.join("\n") + "\n").unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn empty_corpus_indexes_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("empty.jsonl");
    std::fs::write(&corpus, "").unwrap();
    let snap = dir.path().join("empty.idx");
    let out = run(&["index", "--corpus", s(&corpus), "--out", s(&snap)]);
    assert_exit(&out, 0, "index on empty corpus");
    assert!(snap.exists());

    // An empty index still answers queries: a build over it yields a graph
    // with just the unresolved seed node.
    let g = dir.path().join("g.csv");
    let out = run(&[
        "build", "--index", s(&snap), "--algo", "bfs", "--seed", "anything", "--out", s(&g),
    ]);
    assert_exit(&out, 0, "build on empty index");
    assert_eq!(std::fs::read_to_string(&g).unwrap(), "source,target,weight\n");
}

#[test]
fn documented_expansion_example_matches() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write_c3(dir.path());
    let snap = dir.path().join("c3.idx");
    assert_exit(
        &run(&["index", "--corpus", s(&corpus), "--out", s(&snap)]),
        0,
        "index",
    );

    let g = dir.path().join("g.csv");
    assert_exit(
        &run(&[
            "build", "--index", s(&snap), "--algo", "bfs", "--seed", "a", "--depth", "2",
            "--branch", "2", "--out", s(&g),
        ]),
        0,
        "build bfs",
    );
    assert_eq!(
        std::fs::read_to_string(&g).unwrap(),
        "source,target,weight\na,b,2\na,c,1\nb,c,1\n"
    );
}

#[test]
fn unresolved_seed_yields_empty_edge_file() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write_c3(dir.path());
    let snap = dir.path().join("c3.idx");
    assert_exit(
        &run(&["index", "--corpus", s(&corpus), "--out", s(&snap)]),
        0,
        "index",
    );
    let g = dir.path().join("z.csv");
    let out = run(&[
        "build", "--index", s(&snap), "--algo", "bfs", "--seed", "zzz", "--out", s(&g),
    ]);
    assert_exit(&out, 0, "unknown seed is not an error");
    assert_eq!(std::fs::read_to_string(&g).unwrap(), "source,target,weight\n");

    // In graph-json the seed node itself must survive as an isolated node.
    let gj = dir.path().join("z.json");
    assert_exit(
        &run(&[
            "build", "--index", s(&snap), "--algo", "bfs", "--seed", "zzz", "--format",
            "graph-json", "--out", s(&gj),
        ]),
        0,
        "unknown seed graph-json",
    );
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&gj).unwrap()).unwrap();
    assert_eq!(v["nodes"], serde_json::json!(["zzz"]));
    assert_eq!(v["edges"], serde_json::json!([]));
}

#[test]
fn recursive_and_bfs_exports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write_c3(dir.path());
    let snap = dir.path().join("c3.idx");
    assert_exit(
        &run(&["index", "--corpus", s(&corpus), "--out", s(&snap)]),
        0,
        "index",
    );
    for format in ["edge-csv", "graph-json"] {
        let a = dir.path().join(format!("rec.{format}"));
        let b = dir.path().join(format!("bfs.{format}"));
        for (algo, path) in [("recursive", &a), ("bfs", &b)] {
            assert_exit(
                &run(&[
                    "build", "--index", s(&snap), "--algo", algo, "--seed", "a", "--seed",
                    "c", "--depth", "3", "--branch", "2", "--format", format, "--out", s(path),
                ]),
                0,
                algo,
            );
        }
        assert_eq!(
            std::fs::read(&a).unwrap(),
            std::fs::read(&b).unwrap(),
            "strategies must export identical bytes for {format}"
        );
    }
}

#[test]
fn repeated_builds_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write_c3(dir.path());
    let snap = dir.path().join("c3.idx");
    assert_exit(
        &run(&["index", "--corpus", s(&corpus), "--out", s(&snap)]),
        0,
        "index",
    );
    let mut images = Vec::new();
    for i in 0..3 {
        let g = dir.path().join(format!("run{i}.json"));
        assert_exit(
            &run(&[
                "build", "--index", s(&snap), "--algo", "traversal", "--corpus", s(&corpus),
                "--seed", "b", "--filter", "discipline=phys", "--format", "graph-json",
                "--out", s(&g),
            ]),
            0,
            "traversal build",
        );
        images.push(std::fs::read(&g).unwrap());
    }
    assert_eq!(images[0], images[1]);
    assert_eq!(images[1], images[2]);
}

#[test]
fn export_reexports_a_stored_graph() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write_c3(dir.path());
    let snap = dir.path().join("c3.idx");
    assert_exit(
        &run(&["index", "--corpus", s(&corpus), "--out", s(&snap)]),
        0,
        "index",
    );
    let gj = dir.path().join("g.json");
    assert_exit(
        &run(&[
            "build", "--index", s(&snap), "--algo", "bfs", "--seed", "a", "--depth", "2",
            "--branch", "2", "--format", "graph-json", "--out", s(&gj),
        ]),
        0,
        "build graph-json",
    );
    // Re-export as CSV, full and truncated.
    let full = dir.path().join("full.csv");
    assert_exit(
        &run(&["export", s(&gj), "--out", s(&full)]),
        0,
        "export full",
    );
    assert_eq!(
        std::fs::read_to_string(&full).unwrap(),
        "source,target,weight\na,b,2\na,c,1\nb,c,1\n"
    );
    let top1 = dir.path().join("top1.csv");
    assert_exit(
        &run(&["export", s(&gj), "--limit", "1", "--out", s(&top1)]),
        0,
        "export limit 1",
    );
    assert_eq!(
        std::fs::read_to_string(&top1).unwrap(),
        "source,target,weight\na,b,2\n"
    );
}

#[test]
fn exit_codes_separate_usage_from_domain_errors() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write_c3(dir.path());
    let snap = dir.path().join("c3.idx");
    assert_exit(
        &run(&["index", "--corpus", s(&corpus), "--out", s(&snap)]),
        0,
        "index",
    );

    // Usage errors: unknown flag, bad enum value, violated range.
    assert_exit(&run(&["definitely-not-a-command"]), 2, "unknown subcommand");
    let g = dir.path().join("g.csv");
    assert_exit(
        &run(&[
            "build", "--index", s(&snap), "--algo", "quantum", "--seed", "a", "--out", s(&g),
        ]),
        2,
        "bad algo value",
    );
    assert_exit(
        &run(&[
            "build", "--index", s(&snap), "--algo", "bfs", "--seed", "a", "--limit", "0",
            "--out", s(&g),
        ]),
        2,
        "limit zero",
    );

    // Domain errors: missing corpus for traversal, unreadable snapshot,
    // expansion without a seed.
    assert_exit(
        &run(&[
            "build", "--index", s(&snap), "--algo", "traversal", "--seed", "a", "--out", s(&g),
        ]),
        1,
        "traversal without corpus",
    );
    assert_exit(
        &run(&[
            "build", "--index", s(&dir.path().join("nope.idx")), "--algo", "bfs", "--seed",
            "a", "--out", s(&g),
        ]),
        1,
        "missing snapshot",
    );
    assert_exit(
        &run(&["build", "--index", s(&snap), "--algo", "bfs", "--out", s(&g)]),
        1,
        "expansion without seed",
    );

    // A corrupted snapshot is refused.
    let mut bytes = std::fs::read(&snap).unwrap();
    let mid = bytes.len() / 2;
    bytes[mid] ^= 0x40;
    let bad = dir.path().join("bad.idx");
    std::fs::write(&bad, &bytes).unwrap();
    assert_exit(
        &run(&["build", "--index", s(&bad), "--algo", "bfs", "--seed", "a", "--out", s(&g)]),
        1,
        "corrupt snapshot",
    );
}

#[test]
fn synth_pipeline_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let c1 = dir.path().join("one.jsonl");
    let c2 = dir.path().join("two.jsonl");
    for out in [&c1, &c2] {
        assert_exit(
            &run(&[
                "synth", "--docs", "50", "--vocab", "40", "--mean-len", "8", "--rng-seed",
                "11", "--out", s(out),
            ]),
            0,
            "synth",
        );
    }
    assert_eq!(std::fs::read(&c1).unwrap(), std::fs::read(&c2).unwrap());

    // The generated corpus feeds straight back into the pipeline.
    let snap = dir.path().join("synth.idx");
    assert_exit(&run(&["index", "--corpus", s(&c1), "--out", s(&snap)]), 0, "index synth");
    let hist = dir.path().join("hist.csv");
    assert_exit(&run(&["stats", "--index", s(&snap), "--out", s(&hist)]), 0, "stats synth");
    let text = std::fs::read_to_string(&hist).unwrap();
    assert!(text.starts_with("df,term_count\n"));
    assert!(text.lines().count() > 1, "histogram should not be empty");
}
