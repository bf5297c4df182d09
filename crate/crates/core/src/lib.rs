//! Exact counting of 2- and 3-node, 3-edge temporal motifs in directed
//! temporal multigraphs.
//!
//! A motif instance is three edges, in chronological order, spanning at
//! most `delta` time units and touching two or three nodes. There are 36
//! motif classes: 24 stars, 4 two-node pairs and 8 triangles.
//!
//! The pipeline is:
//!
//! 1. [`graph::parse_edge_list`] (or [`graph::generate_random_graph`])
//!    builds a [`graph::TemporalGraph`];
//! 2. [`graph::IndexedGraph`] adds per-node edge sequences and a per-pair
//!    edge index;
//! 3. [`star`] counts stars and pairs, [`triangle`] counts triangles, both
//!    per center node;
//! 4. [`taxonomy::merge_census`] folds the counter cells into a
//!    [`taxonomy::MotifCensus`].
//!
//! [`hare::run_parallel`] drives steps 3 and 4 over a worker pool, and
//! [`oracle`] provides an independent brute-force census for checking.
//!
//! ```
//! use fastmotif::graph::{graph_from_triples, IndexedGraph};
//! use fastmotif::hare::{run_parallel, RunConfig};
//!
//! let g = graph_from_triples([("a", "b", 1), ("b", "a", 2), ("a", "b", 3)]).unwrap();
//! let census = run_parallel(&IndexedGraph::new(g), &RunConfig::new(5)).unwrap();
//! assert_eq!(census.get("12|21|12".parse().unwrap()), 1);
//! ```

pub mod cli;
pub mod error;
pub mod graph;
pub mod hare;
pub mod oracle;
pub mod report;
pub mod star;
pub mod taxonomy;
pub mod triangle;

pub use error::{Error, Result};
pub use graph::{IndexedGraph, TemporalGraph};
pub use hare::{run_parallel, RunConfig};
pub use taxonomy::{MotifCensus, MotifSignature};
