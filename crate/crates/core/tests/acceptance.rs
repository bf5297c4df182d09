//! Acceptance gate. Each test checks one criterion and writes a single
//! `PASS`/`FAIL`/`WARN` line straight to stderr so it shows up without
//! `--nocapture`.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::sync::{Mutex, MutexGuard};
use std::time::{Duration, Instant};

use fastmotif::graph::{generate_random_graph, parse_edge_list, IndexedGraph, ParseOptions, TemporalGraph};
use fastmotif::hare::{run_parallel, DegreeThreshold, RunConfig};
use fastmotif::oracle::oracle_census;
use fastmotif::star::{count_star_pair, count_star_pair_at_center};
use fastmotif::taxonomy::Direction::{In, Out};
use fastmotif::taxonomy::{tri_cell_signature, MotifCensus, StarType, TriType};
use fastmotif::triangle::{count_triangles, count_triangles_at_center, TriangleMode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const DELTAS: [i64; 4] = [1, 10, 100, 1000];

// Criteria run one at a time so the timing checks do not share the machine
// with the sweeps.
static SERIAL: Mutex<()> = Mutex::new(());

fn serial() -> MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|e| e.into_inner())
}

fn report(id: &str, ok: bool, detail: &str) {
    let status = if ok { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "[acceptance] {status} {id}: {detail}");
}

/// The sweep graphs: sizes drawn from one seeded stream, then one graph per seed.
fn sweep_graphs(count: usize, stream: u64) -> Vec<TemporalGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(stream);
    (0..count)
        .map(|k| {
            let nodes = rng.gen_range(5..=60);
            let edges = rng.gen_range(10..=600);
            generate_random_graph(nodes, edges, 10_000, stream * 1_000 + k as u64).unwrap()
        })
        .collect()
}

fn toy() -> IndexedGraph {
    let text = include_str!("../data/toy.txt");
    IndexedGraph::new(parse_edge_list(text.as_bytes(), ParseOptions::default()).unwrap().graph)
}

#[test]
fn criterion_1_oracle_equivalence() {
    let _serial = serial();
    let clock = Instant::now();
    let mut failures = Vec::new();
    for (k, g) in sweep_graphs(200, 1).into_iter().enumerate() {
        let ig = IndexedGraph::new(g);
        for delta in DELTAS {
            let engine = run_parallel(&ig, &RunConfig::new(delta)).unwrap();
            let oracle = oracle_census(&ig.graph, delta).unwrap();
            if !engine.same_counts(&oracle) {
                failures.push(format!("graph {k} delta {delta}"));
            }
        }
    }
    let detail = format!("200 graphs x 4 deltas, {} mismatches, {:.1?}", failures.len(), clock.elapsed());
    report("1 oracle equivalence", failures.is_empty(), &detail);
    assert!(failures.is_empty(), "{failures:?}");
}

#[test]
fn criterion_2a_toy_center_a_star_increments() {
    let _serial = serial();
    let g = toy();
    let a = g.graph.node_index("a").unwrap();
    let r = count_star_pair_at_center(&g, a, 10, 0..usize::MAX).unwrap();
    let expected = [
        (StarType::III, [Out, Out, In]),
        (StarType::III, [Out, Out, Out]),
        (StarType::II, [Out, In, Out]),
        (StarType::II, [Out, Out, Out]),
    ];
    let stars_ok = r.star.iter().all(|(ty, dirs, n)| n == u64::from(expected.contains(&(ty, dirs))));
    let pairs_ok = r.pair.iter().all(|(_, n)| n == 0);
    let ok = stars_ok && pairs_ok;
    report("2a toy center a star/pair", ok, "Star[III,o,o,in], Star[III,o,o,o], Star[II,o,in,o], Star[II,o,o,o]");
    assert!(ok, "{r:?}");
}

/// Checked literally. The stated Type-II cell disagrees with the closing-edge
/// direction convention the engine uses; the increment lands in
/// Tri[II,o,in,in] instead, so this criterion fails on that one cell.
#[test]
fn criterion_2b_toy_center_e_triangle_increments() {
    let _serial = serial();
    let g = toy();
    let e = g.graph.node_index("e").unwrap();
    let tri = count_triangles_at_center(&g, e, 10, 0..usize::MAX, None).unwrap();
    let expected = [(TriType::III, [Out, Out, Out]), (TriType::II, [Out, In, Out])];
    let nonzero: Vec<String> = tri
        .iter()
        .filter(|&(_, _, n)| n > 0)
        .map(|(ty, d, n)| format!("Tri[{ty:?},{},{},{}]={n}", d[0].as_str(), d[1].as_str(), d[2].as_str()))
        .collect();
    let ok = tri.iter().all(|(ty, dirs, n)| n == u64::from(expected.contains(&(ty, dirs))));
    report(
        "2b toy center e triangles",
        ok,
        &format!("expected Tri[III,o,o,o]=1 Tri[II,o,in,o]=1, got {}", nonzero.join(" ")),
    );
    assert!(ok, "got {nonzero:?}");
}

#[test]
fn criterion_2c_toy_census_frozen() {
    let _serial = serial();
    // Independent brute-force enumeration of the toy graph at delta = 10.
    let frozen: BTreeMap<&str, u64> = [
        ("12|12|13", 1),
        ("12|12|23", 1),
        ("12|12|31", 1),
        ("12|12|32", 1),
        ("12|13|12", 1),
        ("12|13|21", 1),
        ("12|13|23", 2),
        ("12|13|31", 3),
        ("12|21|12", 1),
        ("12|21|31", 1),
        ("12|23|31", 1),
        ("12|31|12", 2),
        ("12|31|21", 1),
        ("12|31|23", 1),
        ("12|31|32", 2),
        ("12|32|12", 2),
        ("12|32|21", 1),
        ("12|32|23", 2),
        ("12|32|31", 1),
        ("12|32|32", 1),
    ]
    .into_iter()
    .collect();
    let g = toy();
    let got = run_parallel(&g, &RunConfig::new(10)).unwrap();
    let mut want = MotifCensus::zeroed();
    for (sig, n) in &frozen {
        want.add(sig.parse().unwrap(), *n).unwrap();
    }
    let ok = got.same_counts(&want);
    report("2c toy census", ok, &format!("total {} (frozen 27)", got.total()));
    assert!(ok);
}

#[test]
fn criterion_3_structural_invariants() {
    let _serial = serial();
    let mut violations = Vec::new();
    for (k, g) in sweep_graphs(200, 1).into_iter().enumerate() {
        let ig = IndexedGraph::new(g);
        for delta in DELTAS {
            let (_, pair) = count_star_pair(&ig, delta).unwrap();
            for (dirs, n) in pair.iter().filter(|(d, _)| d[0] == Out) {
                if n != pair.get(dirs.map(|d| d.complement())) {
                    violations.push(format!("graph {k} delta {delta}: pair {dirs:?}"));
                }
            }
            let tri = count_triangles(&ig, delta, TriangleMode::CountAll).unwrap();
            let mut classes: BTreeMap<_, Vec<u64>> = BTreeMap::new();
            for (ty, dirs, n) in tri.iter() {
                classes.entry(tri_cell_signature(ty, dirs)).or_default().push(n);
            }
            for (sig, cells) in &classes {
                let sum: u64 = cells.iter().sum();
                if cells.len() != 3 || cells.iter().any(|&c| c != cells[0]) || !sum.is_multiple_of(3) {
                    violations.push(format!("graph {k} delta {delta}: triangle {sig} {cells:?}"));
                }
            }
        }
    }
    report("3 structural invariants", violations.is_empty(), &format!("{} violations", violations.len()));
    assert!(violations.is_empty(), "{violations:?}");
}

#[test]
fn criterion_4_mode_equivalence() {
    let _serial = serial();
    let mut failures = Vec::new();
    for (k, g) in sweep_graphs(100, 4).into_iter().enumerate() {
        let ig = IndexedGraph::new(g);
        for delta in DELTAS {
            let all = run_parallel(&ig, &RunConfig::new(delta)).unwrap();
            let removal = run_parallel(&ig, &RunConfig::new(delta).tri_mode(TriangleMode::Removal)).unwrap();
            if !all.same_counts(&removal) {
                failures.push(format!("graph {k} delta {delta}"));
            }
        }
    }
    report("4 mode equivalence", failures.is_empty(), &format!("100 graphs, {} differences", failures.len()));
    assert!(failures.is_empty(), "{failures:?}");
}

#[test]
fn criterion_5_parallel_determinism() {
    let _serial = serial();
    let thresholds = [DegreeThreshold::Fixed(0), DegreeThreshold::Auto, DegreeThreshold::Never];
    let mut failures = Vec::new();
    for (k, g) in sweep_graphs(20, 5).into_iter().enumerate() {
        let ig = IndexedGraph::new(g);
        for delta in DELTAS {
            let base = run_parallel(&ig, &RunConfig::new(delta)).unwrap();
            for workers in [1, 2, 4, 8] {
                for thr in thresholds {
                    // Small shards exercise the heavy-node split on these graphs too.
                    for shard in [fastmotif::hare::DEFAULT_SHARD_TARGET, 3] {
                        let cfg = RunConfig::new(delta).workers(workers).thr_d(thr).shard_target(shard);
                        if !run_parallel(&ig, &cfg).unwrap().same_counts(&base) {
                            failures.push(format!("graph {k} delta {delta} workers {workers} thr {thr} shard {shard}"));
                        }
                    }
                }
            }
        }
    }
    report("5 parallel determinism", failures.is_empty(), &format!("20 graphs x 4 workers x 3 thresholds, {} differences", failures.len()));
    assert!(failures.is_empty(), "{failures:?}");
}

#[test]
fn criterion_6_delta_monotonicity() {
    let _serial = serial();
    let mut failures = Vec::new();
    for (k, g) in sweep_graphs(20, 6).into_iter().enumerate() {
        let ig = IndexedGraph::new(g);
        let runs: Vec<_> = DELTAS.iter().map(|&d| run_parallel(&ig, &RunConfig::new(d)).unwrap()).collect();
        for w in runs.windows(2) {
            for (sig, n) in w[0].iter() {
                if n > w[1].get(sig) {
                    failures.push(format!("graph {k} {sig}: {n} -> {} (delta {} -> {})", w[1].get(sig), w[0].delta, w[1].delta));
                }
            }
        }
    }
    report("6 delta monotonicity", failures.is_empty(), &format!("20 graphs, {} decreases", failures.len()));
    assert!(failures.is_empty(), "{failures:?}");
}

fn timed_count(g: &TemporalGraph, config: &RunConfig, repeats: usize) -> (Duration, MotifCensus) {
    let mut best = Duration::MAX;
    let mut census = None;
    for _ in 0..repeats {
        let g = g.clone();
        let clock = Instant::now();
        let ig = IndexedGraph::new(g);
        let c = run_parallel(&ig, config).unwrap();
        best = best.min(clock.elapsed());
        census = Some(c);
    }
    (best, census.unwrap())
}

#[test]
fn criterion_7_linear_scaling() {
    let _serial = serial();
    // Average degree 100 and a window of 1/20 of the time span at every size.
    const T_MAX: i64 = 1_000_000;
    let config = RunConfig::new(T_MAX / 20);
    let sizes = [10_000usize, 20_000, 40_000, 80_000];
    let times: Vec<Duration> = sizes
        .iter()
        .map(|&m| {
            let g = generate_random_graph(m / 50, m, T_MAX, 7).unwrap();
            timed_count(&g, &config, 9).0
        })
        .collect();
    let ratios: Vec<f64> = times.windows(2).map(|w| w[1].as_secs_f64() / w[0].as_secs_f64()).collect();
    let ok = ratios.iter().all(|&r| r <= 3.0);
    let detail = format!(
        "times {:?}, ratios per doubling {:?} (bound 3.0)",
        times.iter().map(|t| format!("{:.1}ms", t.as_secs_f64() * 1e3)).collect::<Vec<_>>(),
        ratios.iter().map(|r| format!("{r:.2}")).collect::<Vec<_>>()
    );
    report("7 linear scaling", ok, &detail);
    assert!(ok, "{detail}");
}

#[test]
fn criterion_8_speedup() {
    let _serial = serial();
    const T_MAX: i64 = 10_000_000;
    // Few enough nodes that neighbors repeat inside a window, so every class is populated.
    let g = generate_random_graph(2_000, 1_000_000, T_MAX, 8).unwrap();
    let (t1, c1) = timed_count(&g, &RunConfig::new(T_MAX / 100), 2);
    let (t8, c8) = timed_count(&g, &RunConfig::new(T_MAX / 100).workers(8), 2);
    let same = c1.same_counts(&c8);
    report("8a census equal at 1 and 8 workers", same, &format!("total {}", c1.total()));
    assert!(same, "census differs between 1 and 8 workers");

    let speedup = t1.as_secs_f64() / t8.as_secs_f64();
    let cpus = std::thread::available_parallelism().map_or(1, |n| n.get());
    let line = format!(
        "1 worker {:.1}ms, 8 workers {:.1}ms, speedup {speedup:.2}x (target 3.0x) on {cpus} available cpu(s)",
        t1.as_secs_f64() * 1e3,
        t8.as_secs_f64() * 1e3
    );
    let artifact = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("speedup_report.csv");
    let _ = std::fs::write(
        &artifact,
        format!(
            "edges,workers_a,ms_a,workers_b,ms_b,speedup,target,available_cpus,status\n\
             1000000,1,{:.3},8,{:.3},{speedup:.3},3.0,{cpus},{}\n",
            t1.as_secs_f64() * 1e3,
            t8.as_secs_f64() * 1e3,
            if speedup >= 3.0 { "pass" } else { "warn" }
        ),
    );
    if speedup >= 3.0 {
        report("8b speedup", true, &line);
    } else {
        // Soft bound: hardware dependent, reported but not failed.
        let _ = writeln!(
            std::io::stderr(),
            "[acceptance] WARN 8b speedup: {line}; report written to {}",
            artifact.display()
        );
    }
}
