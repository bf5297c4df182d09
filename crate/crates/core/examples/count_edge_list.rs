//! Count all 36 motif classes in a whitespace-separated `src dst t` file.
//!
//!     cargo run --release --example count_edge_list -- data/toy.txt 10 [threads] [table|csv|json]

use std::io;
use std::path::PathBuf;

use fastmotif::cli::run_pipeline;
use fastmotif::report::{write_census, OutputFormat};
use fastmotif::RunConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let (Some(input), Some(delta)) = (args.next(), args.next()) else {
        eprintln!("usage: count_edge_list <edge-list> <delta> [threads] [table|csv|json]");
        std::process::exit(1);
    };
    let threads = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1);
    let format: OutputFormat = args.next().as_deref().unwrap_or("table").parse()?;

    let config = RunConfig::new(delta.parse()?).workers(threads);
    let report = run_pipeline(&PathBuf::from(input), &config)?;
    write_census(&report, format, io::stdout().lock())?;
    eprintln!("{:.1} ms total", report.timings.total());
    Ok(())
}
