//! Hierarchical parallel execution.
//!
//! Nodes whose degree exceeds a threshold are split into shards of
//! first-edge positions (intra-node parallelism); all other nodes are whole
//! work items, batched to keep queue traffic low (inter-node parallelism).
//! Workers claim items from a shared cursor at run time, accumulate into
//! counters they own, and the counters are summed once every worker is
//! done. Because counter addition is commutative, the census does not
//! depend on the worker count, the threshold, or the claim order.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::thread;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::graph::{IndexedGraph, NodeIndex, TemporalGraph, Timestamp};
use crate::star::{self, star_first_edge_span, StarScratch};
use crate::taxonomy::{merge_census, MotifCensus, MotifClass, PairCounter, StarCounter, TriCounter};
use crate::triangle::{self, triangle_first_edge_span, TriangleMode};

/// Number of top-degree nodes whose minimum degree sets the automatic threshold.
pub const AUTO_THRESHOLD_RANK: usize = 20;
pub const DEFAULT_SHARD_TARGET: usize = 4_096;
/// Light nodes per queue item.
pub const LIGHT_BATCH: usize = 64;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DegreeThreshold {
    /// Degree of the 20th highest-degree node.
    #[default]
    Auto,
    Fixed(usize),
    /// No node is ever sharded.
    Never,
}

impl DegreeThreshold {
    pub fn resolve(self, graph: &TemporalGraph) -> usize {
        match self {
            DegreeThreshold::Auto => auto_degree_threshold(graph),
            DegreeThreshold::Fixed(d) => d,
            DegreeThreshold::Never => usize::MAX,
        }
    }
}

impl fmt::Display for DegreeThreshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegreeThreshold::Auto => f.write_str("auto"),
            DegreeThreshold::Fixed(d) => write!(f, "{d}"),
            DegreeThreshold::Never => f.write_str("inf"),
        }
    }
}

impl FromStr for DegreeThreshold {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(DegreeThreshold::Auto),
            "inf" | "never" => Ok(DegreeThreshold::Never),
            n => n
                .parse()
                .map(DegreeThreshold::Fixed)
                .map_err(|_| Error::InvalidParameter(format!("degree threshold {s:?} is not an integer, `auto` or `inf`"))),
        }
    }
}

/// Which motif families a run reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MotifFilter {
    pub star: bool,
    pub pair: bool,
    pub triangle: bool,
}

impl Default for MotifFilter {
    fn default() -> Self {
        MotifFilter::ALL
    }
}

impl MotifFilter {
    pub const ALL: MotifFilter = MotifFilter { star: true, pair: true, triangle: true };

    pub fn classes(&self) -> Vec<MotifClass> {
        let mut out = Vec::new();
        if self.star {
            out.push(MotifClass::Star);
        }
        if self.pair {
            out.push(MotifClass::Pair);
        }
        if self.triangle {
            out.push(MotifClass::Triangle);
        }
        out
    }

    fn wants_star_pass(&self) -> bool {
        self.star || self.pair
    }
}

impl fmt::Display for MotifFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == MotifFilter::ALL {
            return f.write_str("all");
        }
        let names: Vec<_> = self.classes().into_iter().map(MotifClass::as_str).collect();
        f.write_str(&names.join(","))
    }
}

impl FromStr for MotifFilter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "all" {
            return Ok(MotifFilter::ALL);
        }
        let mut filter = MotifFilter { star: false, pair: false, triangle: false };
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part {
                "star" => filter.star = true,
                "pair" => filter.pair = true,
                "triangle" => filter.triangle = true,
                "all" => filter = MotifFilter::ALL,
                other => return Err(Error::InvalidParameter(format!("unknown motif family {other:?}"))),
            }
        }
        if filter.classes().is_empty() {
            return Err(Error::InvalidParameter("empty motif filter".into()));
        }
        Ok(filter)
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub delta: Timestamp,
    pub workers: usize,
    pub thr_d: DegreeThreshold,
    pub tri_mode: TriangleMode,
    pub motif_filter: MotifFilter,
    pub shard_target: usize,
}

impl RunConfig {
    pub fn new(delta: Timestamp) -> Self {
        RunConfig {
            delta,
            workers: 1,
            thr_d: DegreeThreshold::Auto,
            tri_mode: TriangleMode::CountAll,
            motif_filter: MotifFilter::ALL,
            shard_target: DEFAULT_SHARD_TARGET,
        }
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn thr_d(mut self, thr_d: DegreeThreshold) -> Self {
        self.thr_d = thr_d;
        self
    }

    pub fn tri_mode(mut self, mode: TriangleMode) -> Self {
        self.tri_mode = mode;
        self
    }

    pub fn motif_filter(mut self, filter: MotifFilter) -> Self {
        self.motif_filter = filter;
        self
    }

    pub fn shard_target(mut self, target: usize) -> Self {
        self.shard_target = target;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.delta < 0 {
            return Err(Error::InvalidParameter(format!("delta must be non-negative, got {}", self.delta)));
        }
        if self.workers == 0 {
            return Err(Error::Config("at least one worker is required".into()));
        }
        if self.shard_target == 0 {
            return Err(Error::Config("shard target must be at least 1".into()));
        }
        if self.tri_mode == TriangleMode::Removal && self.workers > 1 {
            return Err(Error::Config(format!(
                "removal triangle mode is sequential; got {} workers",
                self.workers
            )));
        }
        Ok(())
    }
}

/// The degree of the 20th highest-degree node, or the maximum degree when
/// the graph has fewer than 20 nodes (so that nothing is heavy).
pub fn auto_degree_threshold(graph: &TemporalGraph) -> usize {
    let mut deg = graph.degrees();
    deg.sort_unstable_by(|a, b| b.cmp(a));
    if deg.len() < AUTO_THRESHOLD_RANK {
        deg.first().copied().unwrap_or(0)
    } else {
        deg[AUTO_THRESHOLD_RANK - 1]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchedulePlan {
    /// Nodes with degree above `thr_d`, each with contiguous, disjoint
    /// first-edge shards (0-based positions in `S_u`).
    pub heavy: Vec<(NodeIndex, Vec<Range<usize>>)>,
    pub light: Vec<NodeIndex>,
    pub thr_d: usize,
    pub shard_target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WorkItem {
    Centers(Vec<NodeIndex>),
    Shard { node: NodeIndex, first_edges: Range<usize> },
}

/// Positions that can start a motif for the requested families.
fn first_edge_span(len: usize, filter: MotifFilter) -> Range<usize> {
    if filter.triangle {
        triangle_first_edge_span(len)
    } else {
        star_first_edge_span(len)
    }
}

pub fn plan_schedule(graph: &IndexedGraph, thr_d: usize, shard_target: usize, filter: MotifFilter) -> SchedulePlan {
    let shard_target = shard_target.max(1);
    let mut heavy = Vec::new();
    let mut light = Vec::new();
    for u in 0..graph.node_count() as NodeIndex {
        let degree = graph.sequences.degree(u);
        if degree > thr_d {
            let span = first_edge_span(degree, filter);
            let shards = span
                .clone()
                .step_by(shard_target)
                .map(|s| s..(s + shard_target).min(span.end))
                .collect();
            heavy.push((u, shards));
        } else {
            light.push(u);
        }
    }
    SchedulePlan { heavy, light, thr_d, shard_target }
}

impl SchedulePlan {
    /// Queue contents: heavy shards first so the long items start early.
    pub fn work_items(&self) -> Vec<WorkItem> {
        let shards = self.heavy.iter().flat_map(|(node, ranges)| {
            ranges.iter().map(move |r| WorkItem::Shard { node: *node, first_edges: r.clone() })
        });
        let batches = self.light.chunks(LIGHT_BATCH).map(|c| WorkItem::Centers(c.to_vec()));
        shards.chain(batches).collect()
    }
}

/// Run `work` over `items` with `workers` threads claiming items from a
/// shared cursor. Each worker owns one accumulator; all are returned.
fn run_queue<T, I, F>(items: &[WorkItem], workers: usize, init: I, work: F) -> Result<Vec<T>>
where
    T: Send,
    I: Fn() -> T + Sync,
    F: Fn(&WorkItem, &mut T) -> Result<()> + Sync,
{
    if workers <= 1 {
        let mut acc = init();
        for item in items {
            work(item, &mut acc)?;
        }
        return Ok(vec![acc]);
    }
    let next = AtomicUsize::new(0);
    let failed = AtomicBool::new(false);
    let worker = || -> Result<T> {
        let mut acc = init();
        while !failed.load(Ordering::Relaxed) {
            let k = next.fetch_add(1, Ordering::Relaxed);
            let Some(item) = items.get(k) else { break };
            if let Err(e) = work(item, &mut acc) {
                failed.store(true, Ordering::Relaxed);
                return Err(e);
            }
        }
        Ok(acc)
    };
    thread::scope(|s| {
        let handles: Vec<_> = (0..workers.min(items.len().max(1))).map(|_| s.spawn(worker)).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("counting worker panicked"))
            .collect()
    })
}

fn centers_of(item: &WorkItem) -> impl Iterator<Item = (NodeIndex, Range<usize>)> + '_ {
    let (list, shard): (&[NodeIndex], Option<(NodeIndex, Range<usize>)>) = match item {
        WorkItem::Centers(c) => (c, None),
        WorkItem::Shard { node, first_edges } => (&[], Some((*node, first_edges.clone()))),
    };
    list.iter().map(|&u| (u, 0..usize::MAX)).chain(shard)
}

/// Wall time spent in each counting phase.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PhaseTimings {
    pub star_pair: Duration,
    pub triangle: Duration,
    pub merge: Duration,
}

pub fn run_parallel(graph: &IndexedGraph, config: &RunConfig) -> Result<MotifCensus> {
    run_parallel_timed(graph, config).map(|(census, _)| census)
}

pub fn run_parallel_timed(graph: &IndexedGraph, config: &RunConfig) -> Result<(MotifCensus, PhaseTimings)> {
    config.validate()?;
    let delta = config.delta;
    let filter = config.motif_filter;
    let thr_d = config.thr_d.resolve(&graph.graph);
    let items = plan_schedule(graph, thr_d, config.shard_target, filter).work_items();
    let mut timings = PhaseTimings::default();

    let clock = Instant::now();
    let mut star = StarCounter::new();
    let mut pair = PairCounter::new();
    if filter.wants_star_pass() {
        let parts = run_queue(
            &items,
            config.workers,
            || (StarScratch::new(graph.node_count()), StarCounter::new(), PairCounter::new()),
            |item, (scratch, s, p)| {
                for (u, range) in centers_of(item) {
                    star::accumulate_center(graph, u, delta, range, scratch, s, p)?;
                }
                Ok(())
            },
        )?;
        for (_, s, p) in parts {
            star.merge(&s)?;
            pair.merge(&p)?;
        }
    }
    timings.star_pair = clock.elapsed();

    let clock = Instant::now();
    let mut tri = TriCounter::new();
    if filter.triangle {
        match config.tri_mode {
            TriangleMode::CountAll => {
                let parts = run_queue(&items, config.workers, TriCounter::new, |item, t| {
                    for (u, range) in centers_of(item) {
                        triangle::accumulate_center(graph, u, delta, range, None, t)?;
                    }
                    Ok(())
                })?;
                for t in parts {
                    tri.merge(&t)?;
                }
            }
            TriangleMode::Removal => {
                tri = triangle::count_triangles(graph, delta, TriangleMode::Removal)?;
            }
        }
    }
    timings.triangle = clock.elapsed();

    let clock = Instant::now();
    let mut census = merge_census(&star, &pair, &tri, config.tri_mode)?
        .with_delta(delta)
        .with_labels();
    census.retain_classes(&filter.classes());
    census.meta.edge_count = graph.graph.edge_count();
    census.meta.mode = config.tri_mode.to_string();
    census.meta.workers = config.workers;
    timings.merge = clock.elapsed();
    Ok((census, timings))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_random_graph, graph_from_triples, parse_edge_list, GraphBuilder, ParseOptions};
    use crate::oracle::oracle_census;
    use crate::star::count_star_pair;
    use crate::triangle::count_triangles;

    fn toy() -> IndexedGraph {
        let text = include_str!("../data/toy.txt");
        IndexedGraph::new(parse_edge_list(text.as_bytes(), ParseOptions::default()).unwrap().graph)
    }

    /// A graph whose node `i` (for i < 25) has degree `degrees[i]`, built as
    /// a star of parallel edges to distinct leaves.
    fn graph_with_hub_degrees(degrees: &[usize]) -> TemporalGraph {
        let mut b = GraphBuilder::new();
        let mut leaf = 0;
        for (i, &d) in degrees.iter().enumerate() {
            b.intern(&format!("h{i}"));
            for k in 0..d {
                b.add_edge(&format!("h{i}"), &format!("leaf{leaf}"), k as i64).unwrap();
                leaf += 1;
            }
        }
        b.build()
    }

    #[test]
    fn auto_threshold_is_twentieth_degree() {
        // 25 hubs: 100, 90, ... then the 20th largest is 7.
        let mut degrees: Vec<usize> = (0..10).map(|k| 100 - 10 * k).collect();
        degrees.extend([9, 9, 8, 8, 8, 8, 8, 8, 8, 7, 6, 5, 4, 3, 2]);
        assert_eq!(degrees.len(), 25);
        let g = graph_with_hub_degrees(&degrees);
        assert_eq!(auto_degree_threshold(&g), 7);
    }

    #[test]
    fn auto_threshold_small_graph_has_no_heavy_nodes() {
        let g = toy();
        // degrees: a 5, b 1, c 6, d 7, e 5
        let thr = auto_degree_threshold(&g.graph);
        assert_eq!(thr, 7);
        let plan = plan_schedule(&g, thr, DEFAULT_SHARD_TARGET, MotifFilter::ALL);
        assert!(plan.heavy.is_empty());
        assert_eq!(plan.light.len(), 5);
    }

    #[test]
    fn auto_threshold_regular_graph() {
        // a directed 4-cycle repeated: every node has degree 4
        let g = graph_from_triples([
            ("a", "b", 1), ("b", "c", 2), ("c", "d", 3), ("d", "a", 4),
            ("a", "b", 5), ("b", "c", 6), ("c", "d", 7), ("d", "a", 8),
        ])
        .unwrap();
        assert_eq!(auto_degree_threshold(&g), 4);
        let ig = IndexedGraph::new(g.clone());
        assert!(plan_schedule(&ig, 4, 16, MotifFilter::ALL).heavy.is_empty());
    }

    #[test]
    fn plan_extremes() {
        let g = toy();
        let plan = plan_schedule(&g, usize::MAX, 4, MotifFilter::ALL);
        assert!(plan.heavy.is_empty());
        let plan = plan_schedule(&g, 0, 1, MotifFilter::ALL);
        assert_eq!(plan.heavy.len(), 5);
        for (u, shards) in &plan.heavy {
            let span = triangle_first_edge_span(g.sequences.degree(*u));
            let singles: Vec<_> = span.map(|i| i..i + 1).collect();
            assert_eq!(shards, &singles);
        }
    }

    #[test]
    fn hub_shards() {
        let g = IndexedGraph::new(graph_with_hub_degrees(&[10_000]));
        let star_only = MotifFilter { star: true, pair: true, triangle: false };
        let plan = plan_schedule(&g, 100, 1_024, star_only);
        assert_eq!(plan.heavy.len(), 1);
        let shards = &plan.heavy[0].1;
        assert_eq!(shards.len(), 10);
        // 0-based [0, 9998) is first-edge positions 1..=9998.
        assert_eq!(shards.first().unwrap().start, 0);
        assert_eq!(shards.last().unwrap().end, 9_998);
        assert!(shards.windows(2).all(|w| w[0].end == w[1].start));
        let plan = plan_schedule(&g, 100, 1_024, MotifFilter::ALL);
        assert_eq!(plan.heavy[0].1.last().unwrap().end, 9_999);
    }

    #[test]
    fn plan_is_deterministic_and_batched() {
        let g = IndexedGraph::new(generate_random_graph(300, 2_000, 1_000, 5).unwrap());
        let a = plan_schedule(&g, 12, 3, MotifFilter::ALL);
        let b = plan_schedule(&g, 12, 3, MotifFilter::ALL);
        assert_eq!(a, b);
        let items = a.work_items();
        let batches = items.iter().filter(|i| matches!(i, WorkItem::Centers(_))).count();
        assert_eq!(batches, a.light.len().div_ceil(LIGHT_BATCH));
        let mut covered: Vec<NodeIndex> = a.light.clone();
        covered.extend(a.heavy.iter().map(|(u, _)| *u));
        covered.sort_unstable();
        assert_eq!(covered, (0..300).collect::<Vec<_>>());
    }

    #[test]
    fn toy_any_worker_count_matches_oracle() {
        let g = toy();
        let want = oracle_census(&g.graph, 10).unwrap();
        for workers in [1, 2, 4] {
            let got = run_parallel(&g, &RunConfig::new(10).workers(workers)).unwrap();
            assert!(got.same_counts(&want), "workers {workers}");
        }
    }

    #[test]
    fn degenerate_schedule_equals_sequential() {
        let g = toy();
        let got = run_parallel(&g, &RunConfig::new(10).thr_d(DegreeThreshold::Never)).unwrap();
        let (s, p) = count_star_pair(&g, 10).unwrap();
        let t = count_triangles(&g, 10, TriangleMode::CountAll).unwrap();
        let seq = merge_census(&s, &p, &t, TriangleMode::CountAll).unwrap();
        assert!(got.same_counts(&seq));
    }

    #[test]
    fn thresholds_agree_on_random_graph() {
        let g = IndexedGraph::new(generate_random_graph(50, 500, 10_000, 7).unwrap());
        let base = run_parallel(&g, &RunConfig::new(1_000)).unwrap();
        for thr in [DegreeThreshold::Fixed(0), DegreeThreshold::Never] {
            for workers in [1, 3] {
                let cfg = RunConfig::new(1_000).thr_d(thr).workers(workers).shard_target(3);
                assert!(run_parallel(&g, &cfg).unwrap().same_counts(&base));
            }
        }
    }

    #[test]
    fn removal_requires_single_worker() {
        let g = toy();
        let cfg = RunConfig::new(10).tri_mode(TriangleMode::Removal).workers(4);
        assert!(matches!(run_parallel(&g, &cfg), Err(Error::Config(_))));
        let cfg = RunConfig::new(10).tri_mode(TriangleMode::Removal);
        assert!(run_parallel(&g, &cfg).unwrap().same_counts(&oracle_census(&g.graph, 10).unwrap()));
    }

    #[test]
    fn filter_zeroes_other_families() {
        let g = toy();
        let only_tri = RunConfig::new(10).motif_filter("triangle".parse().unwrap());
        let c = run_parallel(&g, &only_tri).unwrap();
        let full = oracle_census(&g.graph, 10).unwrap();
        assert_eq!(c.class_total(MotifClass::Triangle), full.class_total(MotifClass::Triangle));
        assert_eq!(c.class_total(MotifClass::Star) + c.class_total(MotifClass::Pair), 0);
        assert!("".parse::<MotifFilter>().is_err());
        assert!("star,bogus".parse::<MotifFilter>().is_err());
        assert_eq!("star,pair".parse::<MotifFilter>().unwrap().to_string(), "star,pair");
    }

    #[test]
    fn threshold_parse() {
        assert_eq!("auto".parse::<DegreeThreshold>().unwrap(), DegreeThreshold::Auto);
        assert_eq!("17".parse::<DegreeThreshold>().unwrap(), DegreeThreshold::Fixed(17));
        assert_eq!("inf".parse::<DegreeThreshold>().unwrap(), DegreeThreshold::Never);
        assert!("-3".parse::<DegreeThreshold>().is_err());
    }
}
