//! Check the engine against brute-force enumeration on a few seeded random
//! graphs, with a mix of thread counts and shard sizes.
//!
//!     cargo run --release --example verify_oracle -- [graphs]

use fastmotif::cli::VerifyOutcome;
use fastmotif::graph::{generate_random_graph, IndexedGraph};
use fastmotif::hare::{run_parallel, DegreeThreshold, RunConfig};
use fastmotif::oracle::oracle_census;

fn main() -> fastmotif::Result<()> {
    let graphs: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10);
    let mut bad = 0;
    for seed in 0..graphs {
        let g = generate_random_graph(8 + seed as usize % 20, 300, 2_000, seed)?;
        let delta = [5, 50, 500][seed as usize % 3];
        let oracle = oracle_census(&g, delta)?;
        let ig = IndexedGraph::new(g);
        let config = RunConfig::new(delta)
            .workers(1 + seed as usize % 4)
            .thr_d(DegreeThreshold::Fixed(20))
            .shard_target(16);
        let outcome = VerifyOutcome::compare(&run_parallel(&ig, &config)?, &oracle);
        println!(
            "seed {seed:>3}  nodes {:>2}  delta {delta:>3}  instances {:>6}  {}/36 match",
            ig.node_count(),
            oracle.total(),
            outcome.matched()
        );
        if outcome.exit_code() != 0 {
            outcome.write(&mut std::io::stdout())?;
            bad += 1;
        }
    }
    if bad > 0 {
        std::process::exit(6);
    }
    Ok(())
}
