//! Star and pair counting by third-edge traversal.
//!
//! For a center `u` and a first edge `e1 = S_u[i]`, the scan walks third
//! edges `e3 = S_u[j]` forward until the window closes. Two per-direction
//! neighbor tallies hold exactly the edges strictly between `e1` and the
//! current `e3`; every second-edge candidate is therefore a table lookup
//! rather than a rescan.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::graph::{IndexedGraph, NodeIndex, Timestamp};
use crate::taxonomy::{Direction, PairCounter, StarCounter, StarType};

/// Star and pair counts contributed by one center.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CenterStarResult {
    pub star: StarCounter,
    pub pair: PairCounter,
}

/// Reusable neighbor tallies, indexed by node.
///
/// Only entries listed in `touched` are non-zero, so resetting between
/// first edges costs the size of the window rather than the node count.
#[derive(Debug)]
pub struct StarScratch {
    inward: Vec<u64>,
    outward: Vec<u64>,
    touched: Vec<NodeIndex>,
}

impl StarScratch {
    pub fn new(node_count: usize) -> Self {
        StarScratch {
            inward: vec![0; node_count],
            outward: vec![0; node_count],
            touched: Vec::new(),
        }
    }

    #[inline]
    fn reset(&mut self) {
        for &n in &self.touched {
            self.inward[n as usize] = 0;
            self.outward[n as usize] = 0;
        }
        self.touched.clear();
    }

    #[inline]
    fn record(&mut self, n: NodeIndex, dir: Direction) {
        let n = n as usize;
        if self.inward[n] == 0 && self.outward[n] == 0 {
            self.touched.push(n as NodeIndex);
        }
        match dir {
            Direction::In => self.inward[n] += 1,
            Direction::Out => self.outward[n] += 1,
        }
    }
}

pub(crate) fn check_delta(delta: Timestamp) -> Result<()> {
    if delta < 0 {
        return Err(Error::InvalidParameter(format!("delta must be non-negative, got {delta}")));
    }
    Ok(())
}

/// First-edge positions for which a star or pair can start: all but the
/// last two edges of `S_u`.
pub fn star_first_edge_span(len: usize) -> Range<usize> {
    0..len.saturating_sub(2)
}

/// Count stars and pairs centered at `u` whose first edge index lies in
/// `first_edges` (0-based positions in `S_u`, clamped to the valid span).
pub fn count_star_pair_at_center(
    graph: &IndexedGraph,
    u: NodeIndex,
    delta: Timestamp,
    first_edges: Range<usize>,
) -> Result<CenterStarResult> {
    check_delta(delta)?;
    let mut scratch = StarScratch::new(graph.node_count());
    let mut out = CenterStarResult::default();
    accumulate_center(graph, u, delta, first_edges, &mut scratch, &mut out.star, &mut out.pair)?;
    Ok(out)
}

/// Accumulating form of [`count_star_pair_at_center`] for callers that
/// keep their own scratch and counters.
pub fn accumulate_center(
    graph: &IndexedGraph,
    u: NodeIndex,
    delta: Timestamp,
    first_edges: Range<usize>,
    scratch: &mut StarScratch,
    star: &mut StarCounter,
    pair: &mut PairCounter,
) -> Result<()> {
    use Direction::{In, Out};

    let seq = graph.sequences.sequence(u);
    let span = star_first_edge_span(seq.len());
    let start = first_edges.start.max(span.start);
    let end = first_edges.end.min(span.end);

    for i in start..end {
        let e1 = seq[i];
        let d1 = e1.dir;
        let limit = e1.t.saturating_add(delta);
        scratch.reset();
        let (mut total_in, mut total_out) = (0u64, 0u64);

        for e3 in &seq[i + 1..] {
            if e3.t > limit {
                break;
            }
            let d3 = e3.dir;
            if e3.other == e1.other {
                let v = e1.other as usize;
                let (near_in, near_out) = (scratch.inward[v], scratch.outward[v]);
                pair.add([d1, In, d3], near_in)?;
                pair.add([d1, Out, d3], near_out)?;
                star.add(StarType::II, [d1, In, d3], total_in - near_in)?;
                star.add(StarType::II, [d1, Out, d3], total_out - near_out)?;
            } else {
                let w = e3.other as usize;
                let v = e1.other as usize;
                star.add(StarType::I, [d1, In, d3], scratch.inward[w])?;
                star.add(StarType::I, [d1, Out, d3], scratch.outward[w])?;
                star.add(StarType::III, [d1, In, d3], scratch.inward[v])?;
                star.add(StarType::III, [d1, Out, d3], scratch.outward[v])?;
            }
            scratch.record(e3.other, d3);
            match d3 {
                In => total_in += 1,
                Out => total_out += 1,
            }
        }
    }
    scratch.reset();
    Ok(())
}

/// Sequential star/pair pass over every center.
pub fn count_star_pair(graph: &IndexedGraph, delta: Timestamp) -> Result<(StarCounter, PairCounter)> {
    check_delta(delta)?;
    let mut scratch = StarScratch::new(graph.node_count());
    let mut star = StarCounter::new();
    let mut pair = PairCounter::new();
    for u in 0..graph.node_count() as NodeIndex {
        accumulate_center(graph, u, delta, 0..usize::MAX, &mut scratch, &mut star, &mut pair)?;
    }
    Ok((star, pair))
}
