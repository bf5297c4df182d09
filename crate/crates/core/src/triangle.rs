//! Triangle counting from a center's point of view.
//!
//! For every ordered pair of center edges `e_i`, `e_j` reaching distinct
//! neighbors `v`, `w` within the window, the edges between `v` and `w` with
//! timestamps in `[t_j - delta, t_i + delta]` close a triangle. The closing
//! edge's place in `(t, ordinal)` order relative to `e_i` and `e_j` selects
//! the Tri-I, Tri-II or Tri-III cell.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{IndexedGraph, NodeIndex, Timestamp};
use crate::star::check_delta;
use crate::taxonomy::{TriCounter, TriType};

/// How repeated detections of a triangle are resolved.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum TriangleMode {
    /// Every center counts every triangle it belongs to; classes are divided
    /// by three when merged. Order-independent and parallel-safe.
    #[default]
    CountAll,
    /// Centers run in ascending index order and are masked out once done,
    /// so each triangle is counted once. Sequential only.
    Removal,
}

impl fmt::Display for TriangleMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TriangleMode::CountAll => "countall",
            TriangleMode::Removal => "removal",
        })
    }
}

impl FromStr for TriangleMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "countall" | "count_all" | "count-all" => Ok(TriangleMode::CountAll),
            "removal" => Ok(TriangleMode::Removal),
            other => Err(Error::InvalidParameter(format!("unknown triangle mode {other:?}"))),
        }
    }
}

/// First-edge positions for which a triangle can start: all but the last.
pub fn triangle_first_edge_span(len: usize) -> Range<usize> {
    0..len.saturating_sub(1)
}

/// Count triangles seen from `u` with first center edge in `first_edges`.
///
/// `live`, when given, masks out removed nodes: edges to them are skipped.
pub fn count_triangles_at_center(
    graph: &IndexedGraph,
    u: NodeIndex,
    delta: Timestamp,
    first_edges: Range<usize>,
    live: Option<&[bool]>,
) -> Result<TriCounter> {
    check_delta(delta)?;
    let mut tri = TriCounter::new();
    accumulate_center(graph, u, delta, first_edges, live, &mut tri)?;
    Ok(tri)
}

pub fn accumulate_center(
    graph: &IndexedGraph,
    u: NodeIndex,
    delta: Timestamp,
    first_edges: Range<usize>,
    live: Option<&[bool]>,
    tri: &mut TriCounter,
) -> Result<()> {
    let is_live = |n: NodeIndex| live.is_none_or(|mask| mask[n as usize]);
    let seq = graph.sequences.sequence(u);
    let span = triangle_first_edge_span(seq.len());
    let start = first_edges.start.max(span.start);
    let end = first_edges.end.min(span.end);

    for i in start..end {
        let ei = seq[i];
        if !is_live(ei.other) {
            continue;
        }
        let limit = ei.t.saturating_add(delta);
        for ej in &seq[i + 1..] {
            if ej.t > limit {
                break;
            }
            if ej.other == ei.other || !is_live(ej.other) {
                continue;
            }
            let lo = ej.t.saturating_sub(delta);
            for closing in graph.pairs.pair_edges_in_window(ei.other, ej.other, lo, limit) {
                let key = closing.order_key();
                let ty = if key < ei.order_key() {
                    TriType::I
                } else if key < ej.order_key() {
                    TriType::II
                } else {
                    TriType::III
                };
                tri.add(ty, [ei.dir, ej.dir, closing.dir], 1)?;
            }
        }
    }
    Ok(())
}

/// Sequential triangle pass over every center.
pub fn count_triangles(graph: &IndexedGraph, delta: Timestamp, mode: TriangleMode) -> Result<TriCounter> {
    check_delta(delta)?;
    let n = graph.node_count();
    let mut tri = TriCounter::new();
    match mode {
        TriangleMode::CountAll => {
            for u in 0..n as NodeIndex {
                accumulate_center(graph, u, delta, 0..usize::MAX, None, &mut tri)?;
            }
        }
        TriangleMode::Removal => {
            let mut live = vec![true; n];
            for u in 0..n as NodeIndex {
                accumulate_center(graph, u, delta, 0..usize::MAX, Some(&live), &mut tri)?;
                live[u as usize] = false;
            }
        }
    }
    Ok(tri)
}
