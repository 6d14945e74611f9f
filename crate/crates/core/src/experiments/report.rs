use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{self, Write};

use crate::community::Algorithm;

use super::sweep::{MetricTarget, SweepRecord};

pub const CSV_HEADER: [&str; 10] = [
    "dataset",
    "algorithm",
    "provenance",
    "alpha",
    "beta",
    "k_found",
    "modularity_affinity",
    "modularity_adjacency",
    "nmi",
    "runtime_ms",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    /// Every baseline row, then every sweep row.
    Csv,
    /// Summary tables: the baseline, then the best value per
    /// (dataset, algorithm) over the sweep, with modularity taken on `target`.
    Markdown { target: MetricTarget },
}

fn fixed(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

fn optional(x: Option<f64>) -> String {
    x.map(fixed).unwrap_or_default()
}

pub fn write_report<W: Write>(
    records: &[SweepRecord],
    baseline: &[SweepRecord],
    format: ReportFormat,
    out: W,
) -> io::Result<()> {
    match format {
        ReportFormat::Csv => write_csv(baseline.iter().chain(records), out),
        ReportFormat::Markdown { target } => write_markdown(records, baseline, target, out),
    }
}

fn write_csv<'a, W: Write>(rows: impl Iterator<Item = &'a SweepRecord>, out: W) -> io::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.dataset.clone(),
            r.algorithm.name().to_owned(),
            r.provenance.clone(),
            optional(r.alpha),
            optional(r.beta),
            r.k_found.to_string(),
            fixed(r.modularity_affinity),
            fixed(r.modularity_adjacency),
            fixed(r.nmi),
            optional(r.runtime_ms),
        ])?;
    }
    w.flush()
}

fn table(title: &str, rows: &[(String, Algorithm, f64, f64)]) -> String {
    let mut s = format!("### {title}\n\n| Dataset | Algorithm | NMI | Mod. |\n|---|---|---|---|\n");
    for (dataset, algorithm, nmi, q) in rows {
        writeln!(s, "| {dataset} | {} | {nmi:.2} | {q:.2} |", algorithm.title()).unwrap();
    }
    s
}

fn write_markdown<W: Write>(
    records: &[SweepRecord],
    baseline: &[SweepRecord],
    target: MetricTarget,
    mut out: W,
) -> io::Result<()> {
    let mut sections = Vec::new();
    if !baseline.is_empty() {
        let rows: Vec<_> = baseline
            .iter()
            .map(|r| (r.dataset.clone(), r.algorithm, r.nmi, r.modularity_adjacency))
            .collect();
        sections.push(table("Adjacency network", &rows));
    }
    if !records.is_empty() {
        let mut best: BTreeMap<(&str, Algorithm), (f64, f64)> = BTreeMap::new();
        for r in records {
            let entry = best
                .entry((r.dataset.as_str(), r.algorithm))
                .or_insert((f64::NEG_INFINITY, f64::NEG_INFINITY));
            entry.0 = entry.0.max(r.nmi);
            entry.1 = entry.1.max(r.modularity(target));
        }
        let rows: Vec<_> = best
            .into_iter()
            .map(|((d, a), (nmi, q))| (d.to_owned(), a, nmi, q))
            .collect();
        sections.push(table(
            &format!("Affinity networks, best over the grid (modularity on the {target} graph)"),
            &rows,
        ));
    }
    out.write_all(sections.join("\n").as_bytes())
}
