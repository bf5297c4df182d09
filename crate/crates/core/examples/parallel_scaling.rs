//! Time the star/pair and triangle sweeps across worker counts on a seeded
//! synthetic graph, and show how heavy nodes are split into shards.
//!
//!     cargo run --release --example parallel_scaling -- [edges] [nodes]

use std::time::Instant;

use fastmotif::graph::{generate_random_graph, IndexedGraph};
use fastmotif::hare::{plan_schedule, run_parallel_timed, DegreeThreshold, MotifFilter, RunConfig, DEFAULT_SHARD_TARGET};

fn main() -> fastmotif::Result<()> {
    let mut args = std::env::args().skip(1).map(|s| s.parse::<usize>().expect("integer argument"));
    let edges = args.next().unwrap_or(400_000);
    let nodes = args.next().unwrap_or(2_000);
    let t_max = 10_000_000;
    let delta = t_max / 100;

    let clock = Instant::now();
    let graph = IndexedGraph::new(generate_random_graph(nodes, edges, t_max, 42)?);
    println!("{nodes} nodes, {edges} edges, built in {:.0?}", clock.elapsed());

    let thr = DegreeThreshold::Auto.resolve(&graph.graph);
    let plan = plan_schedule(&graph, thr, DEFAULT_SHARD_TARGET, MotifFilter::ALL);
    let shards: usize = plan.heavy.iter().map(|(_, s)| s.len()).sum();
    println!(
        "auto degree threshold {thr}: {} heavy nodes in {shards} shards, {} light nodes",
        plan.heavy.len(),
        plan.light.len()
    );

    let cpus = std::thread::available_parallelism().map_or(1, |n| n.get());
    println!("{cpus} cpu(s) available\n");
    println!("{:>7} {:>12} {:>12} {:>9} {:>8}", "workers", "star+pair", "triangle", "total", "speedup");
    let mut base = None;
    let mut reference = None;
    for workers in [1, 2, 4, 8] {
        let clock = Instant::now();
        let (census, phases) = run_parallel_timed(&graph, &RunConfig::new(delta).workers(workers))?;
        let total = clock.elapsed();
        let base = *base.get_or_insert(total);
        let reference = reference.get_or_insert_with(|| census.clone());
        assert!(census.same_counts(reference), "census changed with {workers} workers");
        println!(
            "{workers:>7} {:>12.1?} {:>12.1?} {:>9.1?} {:>7.2}x",
            phases.star_pair,
            phases.triangle,
            total,
            base.as_secs_f64() / total.as_secs_f64()
        );
    }
    println!("\n{} motif instances", reference.unwrap().total());
    Ok(())
}
