//! Temporal multigraph storage and the two read-only indices the engines
//! query: per-node incident-edge sequences and a per-pair edge index.
//!
//! "Chronological" always means the total order `(t, ordinal)`, where the
//! ordinal is the edge's position in the input. Window tests compare raw
//! timestamps only.

use std::collections::HashMap;
use std::io::{BufRead, Write};
use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::taxonomy::Direction;

pub type NodeIndex = u32;
pub type Timestamp = i64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TemporalEdge {
    pub src: NodeIndex,
    pub dst: NodeIndex,
    pub t: Timestamp,
    pub ordinal: u64,
}

impl TemporalEdge {
    #[inline]
    pub fn order_key(&self) -> (Timestamp, u64) {
        (self.t, self.ordinal)
    }
}

/// An immutable directed temporal multigraph with dense node indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemporalGraph {
    ids: Vec<String>,
    index_of: HashMap<String, NodeIndex>,
    edges: Vec<TemporalEdge>,
}

impl TemporalGraph {
    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges sorted by `(t, ordinal)`.
    pub fn edges(&self) -> &[TemporalEdge] {
        &self.edges
    }

    pub fn node_id(&self, index: NodeIndex) -> &str {
        &self.ids[index as usize]
    }

    pub fn node_index(&self, id: &str) -> Option<NodeIndex> {
        self.index_of.get(id).copied()
    }

    /// Total degree (in + out, parallel edges counted) of every node.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.node_count()];
        for e in &self.edges {
            deg[e.src as usize] += 1;
            deg[e.dst as usize] += 1;
        }
        deg
    }

    /// Write the graph in edge-list format, one `SRC DST T` line per edge in
    /// chronological order.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for e in &self.edges {
            writeln!(out, "{} {} {}", self.node_id(e.src), self.node_id(e.dst), e.t)?;
        }
        out.flush()
    }
}

/// Incremental constructor assigning node indices by first appearance.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    ids: Vec<String>,
    index_of: HashMap<String, NodeIndex>,
    edges: Vec<TemporalEdge>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, id: &str) -> NodeIndex {
        if let Some(&ix) = self.index_of.get(id) {
            return ix;
        }
        let ix = self.ids.len() as NodeIndex;
        self.ids.push(id.to_owned());
        self.index_of.insert(id.to_owned(), ix);
        ix
    }

    /// Append an edge. Self-loops are refused with `InvalidParameter`.
    pub fn add_edge(&mut self, src: &str, dst: &str, t: Timestamp) -> Result<()> {
        if src == dst {
            return Err(Error::InvalidParameter(format!("self-loop on node {src:?}")));
        }
        let src = self.intern(src);
        let dst = self.intern(dst);
        self.push(src, dst, t);
        Ok(())
    }

    fn push(&mut self, src: NodeIndex, dst: NodeIndex, t: Timestamp) {
        let ordinal = self.edges.len() as u64;
        self.edges.push(TemporalEdge { src, dst, t, ordinal });
    }

    pub fn build(self) -> TemporalGraph {
        let mut edges = self.edges;
        // Ordinals are unique, so this is a total order.
        edges.sort_unstable_by_key(TemporalEdge::order_key);
        TemporalGraph {
            ids: self.ids,
            index_of: self.index_of,
            edges,
        }
    }
}

/// Build a graph from `(src, dst, t)` triples, failing on self-loops.
pub fn graph_from_triples<'a, I>(triples: I) -> Result<TemporalGraph>
where
    I: IntoIterator<Item = (&'a str, &'a str, Timestamp)>,
{
    let mut b = GraphBuilder::new();
    for (s, d, t) in triples {
        b.add_edge(s, d, t)?;
    }
    Ok(b.build())
}

#[derive(Clone, Copy, Debug)]
pub struct ParseOptions {
    pub drop_self_loops: bool,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions { drop_self_loops: true }
    }
}

#[derive(Debug)]
pub struct ParsedGraph {
    pub graph: TemporalGraph,
    pub self_loops_dropped: usize,
}

/// Parse a whitespace-separated `SRC DST T` edge list.
///
/// Lines starting with `#` and blank lines are skipped, tokens after the
/// third are ignored, and both LF and CRLF endings are accepted.
pub fn parse_edge_list<R: BufRead>(mut reader: R, options: ParseOptions) -> Result<ParsedGraph> {
    let mut builder = GraphBuilder::new();
    let mut dropped = 0;
    let mut buf = Vec::new();
    let mut line_no = 0;
    loop {
        buf.clear();
        if reader.read_until(b'\n', &mut buf)? == 0 {
            break;
        }
        line_no += 1;
        let line = std::str::from_utf8(&buf).map_err(|_| Error::Parse {
            line: line_no,
            message: "invalid UTF-8".into(),
        })?;
        let trimmed = line.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let (Some(src), Some(dst), Some(t)) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(Error::Parse {
                line: line_no,
                message: "expected `SRC DST T`".into(),
            });
        };
        let t: Timestamp = t.parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("timestamp {t:?} is not a 64-bit integer"),
        })?;
        if src == dst {
            if options.drop_self_loops {
                dropped += 1;
                continue;
            }
            return Err(Error::Parse {
                line: line_no,
                message: format!("self-loop on node {src:?}"),
            });
        }
        builder.add_edge(src, dst, t)?;
    }
    Ok(ParsedGraph {
        graph: builder.build(),
        self_loops_dropped: dropped,
    })
}

/// Uniform random temporal multigraph: endpoints uniform over distinct node
/// pairs, timestamps uniform in `[0, t_max]`. Node ids are `"0".."nodes-1"`.
pub fn generate_random_graph(nodes: usize, edges: usize, t_max: Timestamp, seed: u64) -> Result<TemporalGraph> {
    if edges > 0 && nodes < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 nodes to place {edges} edges"
        )));
    }
    if t_max < 0 {
        return Err(Error::InvalidParameter(format!("t_max must be non-negative, got {t_max}")));
    }
    if nodes > NodeIndex::MAX as usize {
        return Err(Error::InvalidParameter(format!("too many nodes: {nodes}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = GraphBuilder::new();
    for n in 0..nodes {
        b.intern(&n.to_string());
    }
    for _ in 0..edges {
        let src = rng.gen_range(0..nodes as NodeIndex);
        let mut dst = rng.gen_range(0..nodes as NodeIndex - 1);
        if dst >= src {
            dst += 1;
        }
        let t = rng.gen_range(0..=t_max);
        b.push(src, dst, t);
    }
    Ok(b.build())
}

/// One edge of `S_u`, seen from center `u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IncidentEdge {
    pub t: Timestamp,
    pub other: NodeIndex,
    pub dir: Direction,
    pub ordinal: u64,
}

impl IncidentEdge {
    #[inline]
    pub fn order_key(&self) -> (Timestamp, u64) {
        (self.t, self.ordinal)
    }
}

/// Per-node time-ordered incident edge sequences, stored contiguously.
#[derive(Clone, Debug)]
pub struct NodeSequenceIndex {
    offsets: Vec<usize>,
    records: Vec<IncidentEdge>,
}

impl NodeSequenceIndex {
    pub fn build(graph: &TemporalGraph) -> Self {
        let n = graph.node_count();
        let mut offsets = vec![0usize; n + 1];
        for e in graph.edges() {
            offsets[e.src as usize + 1] += 1;
            offsets[e.dst as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let placeholder = IncidentEdge { t: 0, other: 0, dir: Direction::Out, ordinal: 0 };
        let mut records = vec![placeholder; offsets[n]];
        // Edges arrive in (t, ordinal) order, so each sequence fills sorted.
        for e in graph.edges() {
            let mut place = |center: NodeIndex, other: NodeIndex, dir: Direction| {
                let slot = &mut cursor[center as usize];
                records[*slot] = IncidentEdge { t: e.t, other, dir, ordinal: e.ordinal };
                *slot += 1;
            };
            place(e.src, e.dst, Direction::Out);
            place(e.dst, e.src, Direction::In);
        }
        NodeSequenceIndex { offsets, records }
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn sequence(&self, u: NodeIndex) -> &[IncidentEdge] {
        let u = u as usize;
        &self.records[self.offsets[u]..self.offsets[u + 1]]
    }

    pub fn degree(&self, u: NodeIndex) -> usize {
        let u = u as usize;
        self.offsets[u + 1] - self.offsets[u]
    }

    pub fn total_len(&self) -> usize {
        self.records.len()
    }
}

/// One edge between a node pair; `dir` is relative to the smaller index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairRecord {
    pub t: Timestamp,
    pub ordinal: u64,
    pub dir: Direction,
}

impl PairRecord {
    #[inline]
    pub fn order_key(&self) -> (Timestamp, u64) {
        (self.t, self.ordinal)
    }
}

/// Edges grouped by unordered node pair, each group sorted by `(t, ordinal)`.
///
/// Layout: for node `v`, `keys[key_offsets[v]..key_offsets[v+1]]` lists the
/// partners `w > v` in ascending order along with their record ranges.
#[derive(Clone, Debug)]
pub struct PairEdgeIndex {
    key_offsets: Vec<usize>,
    keys: Vec<(NodeIndex, Range<usize>)>,
    records: Vec<PairRecord>,
}

impl PairEdgeIndex {
    pub fn build(graph: &TemporalGraph) -> Self {
        let mut flat: Vec<(NodeIndex, NodeIndex, PairRecord)> = graph
            .edges()
            .iter()
            .map(|e| {
                let (lo, hi, dir) = if e.src < e.dst {
                    (e.src, e.dst, Direction::Out)
                } else {
                    (e.dst, e.src, Direction::In)
                };
                (lo, hi, PairRecord { t: e.t, ordinal: e.ordinal, dir })
            })
            .collect();
        // Stable: keeps the (t, ordinal) order inside each pair.
        flat.sort_by_key(|&(lo, hi, _)| (lo, hi));

        let n = graph.node_count();
        let mut key_offsets = vec![0usize; n + 1];
        let mut keys: Vec<(NodeIndex, Range<usize>)> = Vec::new();
        let mut records = Vec::with_capacity(flat.len());
        let mut start = 0;
        while start < flat.len() {
            let (lo, hi, _) = flat[start];
            let mut end = start;
            while end < flat.len() && flat[end].0 == lo && flat[end].1 == hi {
                records.push(flat[end].2);
                end += 1;
            }
            keys.push((hi, start..end));
            key_offsets[lo as usize + 1] += 1;
            start = end;
        }
        for i in 0..n {
            key_offsets[i + 1] += key_offsets[i];
        }
        PairEdgeIndex { key_offsets, keys, records }
    }

    /// All edges between `v` and `w`, directions relative to `min(v, w)`.
    pub fn pair_slice(&self, v: NodeIndex, w: NodeIndex) -> &[PairRecord] {
        let (lo, hi) = if v < w { (v, w) } else { (w, v) };
        let Some(bounds) = self.key_offsets.get(lo as usize..lo as usize + 2) else {
            return &[];
        };
        let partners = &self.keys[bounds[0]..bounds[1]];
        match partners.binary_search_by_key(&hi, |(w, _)| *w) {
            Ok(k) => &self.records[partners[k].1.clone()],
            Err(_) => &[],
        }
    }

    /// Edges between `v` and `w` with `lo <= t <= hi`, in `(t, ordinal)`
    /// order, directions re-expressed relative to `v`.
    pub fn pair_edges_in_window(
        &self,
        v: NodeIndex,
        w: NodeIndex,
        lo: Timestamp,
        hi: Timestamp,
    ) -> PairWindow<'_> {
        let slice = self.pair_slice(v, w);
        let start = slice.partition_point(|r| r.t < lo);
        let end = slice.partition_point(|r| r.t <= hi).max(start);
        PairWindow {
            records: slice[start..end].iter(),
            flip: v > w,
        }
    }

    /// Iterate `(v, w, records)` over all pairs with `v < w`.
    pub fn pairs(&self) -> impl Iterator<Item = (NodeIndex, NodeIndex, &[PairRecord])> + '_ {
        (0..self.key_offsets.len().saturating_sub(1)).flat_map(move |v| {
            self.keys[self.key_offsets[v]..self.key_offsets[v + 1]]
                .iter()
                .map(move |(w, r)| (v as NodeIndex, *w, &self.records[r.clone()]))
        })
    }

    pub fn pair_count(&self) -> usize {
        self.keys.len()
    }

    pub fn total_len(&self) -> usize {
        self.records.len()
    }
}

pub struct PairWindow<'a> {
    records: std::slice::Iter<'a, PairRecord>,
    flip: bool,
}

impl Iterator for PairWindow<'_> {
    type Item = PairRecord;

    #[inline]
    fn next(&mut self) -> Option<PairRecord> {
        self.records.next().map(|r| {
            if self.flip {
                PairRecord { dir: r.dir.complement(), ..*r }
            } else {
                *r
            }
        })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        self.records.size_hint()
    }
}

impl ExactSizeIterator for PairWindow<'_> {}

/// A graph together with the indices every engine reads.
#[derive(Clone, Debug)]
pub struct IndexedGraph {
    pub graph: TemporalGraph,
    pub sequences: NodeSequenceIndex,
    pub pairs: PairEdgeIndex,
}

impl IndexedGraph {
    pub fn new(graph: TemporalGraph) -> Self {
        let sequences = NodeSequenceIndex::build(&graph);
        let pairs = PairEdgeIndex::build(&graph);
        IndexedGraph { graph, sequences, pairs }
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }
}
