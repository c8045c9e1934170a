//! Export a network in both supported formats and read the JSON form
//! back.
//!
//!     cargo run --example export_graph

use coocnet::{export_graph, load_graph_json, CoocGraph, GraphFormat, MergePolicy};

fn main() {
    let mut g = CoocGraph::new();
    for (u, v, w) in [
        ("alpha", "beta", 4),
        ("alpha", "gamma", 2),
        ("beta", "gamma", 2),
        ("beta", "delta", 1),
    ] {
        g.merge_edge(u, v, w, MergePolicy::Sum).expect("no self-loops");
    }
    // Isolated nodes survive export in the JSON format.
    g.add_node("epsilon");

    let dir = std::env::temp_dir().join("coocnet-export-example");
    std::fs::create_dir_all(&dir).expect("temp dir is writable");

    let csv_path = dir.join("graph.csv");
    export_graph(&g, 3, GraphFormat::EdgeCsv, &csv_path).expect("csv export");
    println!(
        "edge-csv, top 3 edges:\n{}",
        std::fs::read_to_string(&csv_path).expect("csv reads")
    );

    let json_path = dir.join("graph.json");
    export_graph(&g, 100, GraphFormat::GraphJson, &json_path).expect("json export");
    println!("graph-json:\n{}", std::fs::read_to_string(&json_path).expect("json reads"));

    let back = load_graph_json(&json_path).expect("json loads");
    assert_eq!(back.edge_count(), g.edge_count());
    assert!(back.contains_node("epsilon"));
    println!("reloaded: {} nodes, {} edges", back.node_count(), back.edge_count());

    std::fs::remove_dir_all(&dir).ok();
}
