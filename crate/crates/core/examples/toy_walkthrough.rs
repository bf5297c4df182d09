//! Walk through the bundled five-node toy graph at delta = 10: per-center
//! counter cells, the merged census, and the two triangle modes.
//!
//!     cargo run --example toy_walkthrough

use fastmotif::graph::{parse_edge_list, IndexedGraph, NodeIndex, ParseOptions};
use fastmotif::hare::{run_parallel, RunConfig};
use fastmotif::star::count_star_pair_at_center;
use fastmotif::taxonomy::{label_for_signature, MotifClass};
use fastmotif::triangle::{count_triangles_at_center, TriangleMode};

const DELTA: i64 = 10;

fn main() -> fastmotif::Result<()> {
    let text = include_str!("../data/toy.txt");
    let graph = IndexedGraph::new(parse_edge_list(text.as_bytes(), ParseOptions::default())?.graph);
    println!("{} nodes, {} edges, delta = {DELTA}\n", graph.node_count(), graph.graph.edge_count());

    for u in 0..graph.node_count() as NodeIndex {
        let name = graph.graph.node_id(u);
        let sp = count_star_pair_at_center(&graph, u, DELTA, 0..usize::MAX)?;
        let tri = count_triangles_at_center(&graph, u, DELTA, 0..usize::MAX, None)?;
        println!("center {name} (degree {})", graph.sequences.degree(u));
        for (ty, d, n) in sp.star.iter().filter(|c| c.2 > 0) {
            println!("  Star[{ty:?},{},{},{}] = {n}", d[0].as_str(), d[1].as_str(), d[2].as_str());
        }
        for (d, n) in sp.pair.iter().filter(|c| c.1 > 0) {
            println!("  Pair[{},{},{}] = {n}", d[0].as_str(), d[1].as_str(), d[2].as_str());
        }
        for (ty, d, n) in tri.iter().filter(|c| c.2 > 0) {
            println!("  Tri[{ty:?},{},{},{}] = {n}", d[0].as_str(), d[1].as_str(), d[2].as_str());
        }
    }

    let census = run_parallel(&graph, &RunConfig::new(DELTA))?;
    println!("\nnon-zero classes:");
    for (sig, n) in census.iter().filter(|&(_, n)| n > 0) {
        println!("  {sig}  {:<8} {:<9} {n}", label_for_signature(sig), sig.class().as_str());
    }
    for class in MotifClass::ALL {
        println!("{:>9} total {}", class.as_str(), census.class_total(class));
    }

    // Each triangle is seen from all three of its nodes; removal mode counts it once.
    let removal = run_parallel(&graph, &RunConfig::new(DELTA).tri_mode(TriangleMode::Removal))?;
    println!("\nremoval mode agrees with count-all: {}", removal.same_counts(&census));
    Ok(())
}
