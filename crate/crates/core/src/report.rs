//! Census output in table, CSV and JSON form.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{self, Write};
use std::str::FromStr;
use std::time::Duration;

use serde::Serialize;

use crate::error::Error;
use crate::taxonomy::{label_for_signature, MotifCensus, MotifClass};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OutputFormat {
    #[default]
    Table,
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "table" => Ok(OutputFormat::Table),
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::InvalidParameter(format!("unknown output format {other:?}"))),
        }
    }
}

/// Per-phase wall times in milliseconds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct ReportTimings {
    pub ingest: f64,
    pub index: f64,
    pub star_pair: f64,
    pub triangle: f64,
    pub merge: f64,
}

impl ReportTimings {
    pub fn total(&self) -> f64 {
        self.ingest + self.index + self.star_pair + self.triangle + self.merge
    }
}

pub fn millis(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

#[derive(Clone, Debug, Default)]
pub struct CensusReport {
    pub census: MotifCensus,
    pub timings: ReportTimings,
    /// Echo of the settings that produced the census.
    pub config: BTreeMap<String, String>,
}

pub fn write_census<W: Write>(report: &CensusReport, format: OutputFormat, out: W) -> io::Result<()> {
    match format {
        OutputFormat::Csv => write_csv(&report.census, out),
        OutputFormat::Json => write_json(report, out),
        OutputFormat::Table => write_table(report, out),
    }
}

fn label_of(census: &MotifCensus, sig: crate::taxonomy::MotifSignature) -> String {
    census
        .labels
        .as_ref()
        .and_then(|l| l.get(&sig).cloned())
        .unwrap_or_else(|| label_for_signature(sig))
}

pub fn write_csv<W: Write>(census: &MotifCensus, mut out: W) -> io::Result<()> {
    writeln!(out, "signature,label,count")?;
    for (sig, count) in census.iter() {
        writeln!(out, "{sig},{},{count}", label_of(census, sig))?;
    }
    out.flush()
}

#[derive(Serialize)]
struct JsonMeta<'a> {
    input: &'a str,
    edge_count: usize,
    mode: &'a str,
    workers: usize,
    config: &'a BTreeMap<String, String>,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    delta: i64,
    counts: BTreeMap<String, u64>,
    labels: BTreeMap<String, String>,
    meta: JsonMeta<'a>,
    timings_ms: ReportTimings,
}

pub fn write_json<W: Write>(report: &CensusReport, mut out: W) -> io::Result<()> {
    let c = &report.census;
    let doc = JsonReport {
        delta: c.delta,
        counts: c.iter().map(|(s, n)| (s.to_string(), n)).collect(),
        labels: c.iter().map(|(s, _)| (s.to_string(), label_of(c, s))).collect(),
        meta: JsonMeta {
            input: &c.meta.input,
            edge_count: c.meta.edge_count,
            mode: &c.meta.mode,
            workers: c.meta.workers,
            config: &report.config,
        },
        timings_ms: report.timings,
    };
    serde_json::to_writer_pretty(&mut out, &doc)?;
    writeln!(out)?;
    out.flush()
}

pub fn write_table<W: Write>(report: &CensusReport, mut out: W) -> io::Result<()> {
    let c = &report.census;
    let mut s = String::new();
    let _ = writeln!(s, "delta = {}  edges = {}  mode = {}  workers = {}", c.delta, c.meta.edge_count, c.meta.mode, c.meta.workers);
    for class in MotifClass::ALL {
        let _ = writeln!(s, "\n[{}]", class.as_str());
        let _ = writeln!(s, "  {:<10} {:<10} {:>14}", "signature", "label", "count");
        for (sig, count) in c.iter().filter(|(sig, _)| sig.class() == class) {
            let _ = writeln!(s, "  {:<10} {:<10} {:>14}", sig.to_string(), label_of(c, sig), count);
        }
        let _ = writeln!(s, "  {:<21} {:>14}", format!("{} subtotal", class.as_str()), c.class_total(class));
    }
    let _ = writeln!(s, "\n{:<23} {:>14}", "total", c.total());
    out.write_all(s.as_bytes())?;
    out.flush()
}
