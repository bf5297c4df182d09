//! Brute-force motif enumeration, used as ground truth for the engines.
//!
//! Every 3-combination of edges in `(t, ordinal)` order whose first and last
//! timestamps lie within `delta` and whose endpoints span at most three
//! nodes is one motif instance. The only optimization is stopping each scan
//! once the window closes.

use crate::error::Result;
use crate::graph::{TemporalGraph, Timestamp};
use crate::star::check_delta;
use crate::taxonomy::{canonical_signature, MotifCensus, MotifSignature};

/// Default refusal threshold for oracle runs driven from the command line.
pub const DEFAULT_MAX_EDGES: usize = 5_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InstanceRecord {
    /// Edge ordinals in chronological order.
    pub ordinals: [u64; 3],
    pub signature: MotifSignature,
}

fn for_each_instance<F>(graph: &TemporalGraph, delta: Timestamp, mut visit: F) -> Result<()>
where
    F: FnMut(InstanceRecord) -> Result<()>,
{
    check_delta(delta)?;
    let edges = graph.edges();
    for a in 0..edges.len() {
        let first = edges[a];
        let limit = first.t.saturating_add(delta);
        for b in a + 1..edges.len() {
            let second = edges[b];
            if second.t > limit {
                break;
            }
            for third in &edges[b + 1..] {
                if third.t > limit {
                    break;
                }
                let triple = [
                    (first.src, first.dst),
                    (second.src, second.dst),
                    (third.src, third.dst),
                ];
                // Errors here mean "not a 2/3-node connected motif".
                if let Ok(signature) = canonical_signature(&triple) {
                    visit(InstanceRecord {
                        ordinals: [first.ordinal, second.ordinal, third.ordinal],
                        signature,
                    })?;
                }
            }
        }
    }
    Ok(())
}

pub fn enumerate_instances(graph: &TemporalGraph, delta: Timestamp) -> Result<Vec<InstanceRecord>> {
    let mut out = Vec::new();
    for_each_instance(graph, delta, |rec| {
        out.push(rec);
        Ok(())
    })?;
    Ok(out)
}

pub fn oracle_census(graph: &TemporalGraph, delta: Timestamp) -> Result<MotifCensus> {
    let mut census = MotifCensus::zeroed().with_delta(delta);
    for_each_instance(graph, delta, |rec| census.add(rec.signature, 1))?;
    census.meta.edge_count = graph.edge_count();
    census.meta.mode = "oracle".into();
    census.meta.workers = 1;
    Ok(census)
}
