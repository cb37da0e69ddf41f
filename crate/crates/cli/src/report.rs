//! Report rendering: ranked plan tables as CSV or JSON.
//!
//! Output is deterministic byte-for-byte for identical inputs. CSV numbers
//! carry 10 significant digits; JSON carries exact `f64` values (shortest
//! round-trip form) plus the config echo so a run can be reproduced.

use std::borrow::Cow;
use std::io::Write as _;
use std::path::Path;

use serde::Serialize;
use thiserror::Error;
use upcycle_core::{MetricKind, PlanEvaluation, SolverReport};

use crate::config::ConfigFile;

pub const CSV_HEADER: &str = "plan,n_upgrades,qps,tco,co2,qps_per_tco,qps_per_co2,qps_per_tco_co2,norm_qps,norm_tco,norm_co2,norm_metric,rank";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(format!("unknown format {other:?} (expected csv or json)")),
        }
    }
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("plan {plan:?} has no normalized values")]
    MissingNormalization { plan: String },
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot write to stdout: {0}")]
    Stdout(std::io::Error),
}

/// One row of a ranking report.
#[derive(Debug, Clone, Serialize)]
pub struct ResultRow {
    pub plan: String,
    pub n_upgrades: u32,
    pub qps: f64,
    pub tco: f64,
    pub co2: f64,
    pub qps_per_tco: f64,
    pub qps_per_co2: f64,
    pub qps_per_tco_co2: f64,
    pub norm_qps: f64,
    pub norm_tco: f64,
    pub norm_co2: f64,
    pub norm_metric: f64,
    pub rank: u64,
}

impl ResultRow {
    pub fn from_evaluation(
        eval: &PlanEvaluation,
        rank: u64,
        objective: MetricKind,
    ) -> Result<Self, ReportError> {
        let norm = eval
            .normalized
            .as_ref()
            .ok_or_else(|| ReportError::MissingNormalization {
                plan: eval.plan.to_string(),
            })?;
        Ok(ResultRow {
            plan: eval.plan.to_string(),
            n_upgrades: eval.n_upgrades,
            qps: eval.qps,
            tco: eval.tco,
            co2: eval.co2,
            qps_per_tco: eval.qps_per_tco,
            qps_per_co2: eval.qps_per_co2,
            qps_per_tco_co2: eval.qps_per_tco_co2,
            norm_qps: norm.qps,
            norm_tco: norm.tco,
            norm_co2: norm.co2,
            norm_metric: match objective {
                MetricKind::QpsPerTco => norm.qps_per_tco,
                MetricKind::QpsPerCo2 => norm.qps_per_co2,
                MetricKind::QpsPerTcoCo2 => norm.qps_per_tco_co2,
            },
            rank,
        })
    }
}

#[derive(Debug, Serialize)]
pub struct JsonReport {
    pub objective: String,
    pub total_plans: u64,
    pub config: ConfigFile,
    pub rows: Vec<ResultRow>,
}

/// Render a float with 10 significant digits: fixed-point for everyday
/// magnitudes, scientific notation outside them.
pub fn fmt_sig10(value: f64) -> String {
    if !value.is_finite() {
        return format!("{value}");
    }
    let sci = format!("{:.9e}", value);
    let (_, exp) = sci.split_once('e').expect("{:e} always has an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    if (-4..=9).contains(&exp) {
        let decimals = (9 - exp) as usize;
        format!("{:.*}", decimals, value)
    } else {
        sci
    }
}

/// Quote a field per RFC 4180 when it contains a delimiter, quote, or
/// newline. Multi-segment plan strings always do (their separator is ',').
fn csv_field(text: &str) -> Cow<'_, str> {
    if text.contains([',', '"', '\n', '\r']) {
        Cow::Owned(format!("\"{}\"", text.replace('"', "\"\"")))
    } else {
        Cow::Borrowed(text)
    }
}

fn csv_row(row: &ResultRow) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{}",
        csv_field(&row.plan),
        row.n_upgrades,
        fmt_sig10(row.qps),
        fmt_sig10(row.tco),
        fmt_sig10(row.co2),
        fmt_sig10(row.qps_per_tco),
        fmt_sig10(row.qps_per_co2),
        fmt_sig10(row.qps_per_tco_co2),
        fmt_sig10(row.norm_qps),
        fmt_sig10(row.norm_tco),
        fmt_sig10(row.norm_co2),
        fmt_sig10(row.norm_metric),
        row.rank,
    )
}

pub fn rows_from_report(report: &SolverReport) -> Result<Vec<ResultRow>, ReportError> {
    report
        .ranked
        .iter()
        .enumerate()
        .map(|(i, eval)| ResultRow::from_evaluation(eval, i as u64 + 1, report.objective))
        .collect()
}

pub fn render_csv(report: &SolverReport) -> Result<String, ReportError> {
    let rows = rows_from_report(report)?;
    let mut out = String::with_capacity(64 + rows.len() * 160);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in &rows {
        out.push_str(&csv_row(row));
        out.push('\n');
    }
    Ok(out)
}

pub fn render_json(report: &SolverReport) -> Result<String, ReportError> {
    let json = JsonReport {
        objective: report.objective.as_str().to_string(),
        total_plans: report.total_plans,
        config: ConfigFile::from(&report.config),
        rows: rows_from_report(report)?,
    };
    let mut text = serde_json::to_string_pretty(&json).expect("report serializes");
    text.push('\n');
    Ok(text)
}

pub fn render(report: &SolverReport, format: ReportFormat) -> Result<String, ReportError> {
    match format {
        ReportFormat::Csv => render_csv(report),
        ReportFormat::Json => render_json(report),
    }
}

/// Write a report atomically: the destination either keeps its old content
/// or receives the complete new content, never a partial file.
pub fn write_atomic(path: &Path, content: &str) -> Result<(), ReportError> {
    write_atomic_with(path, |w| w.write_all(content.as_bytes()))
}

/// Streaming variant of [`write_atomic`]: `fill` writes into a temp file in
/// the destination directory which is renamed over the target only on
/// success.
pub fn write_atomic_with(
    path: &Path,
    fill: impl FnOnce(&mut dyn std::io::Write) -> std::io::Result<()>,
) -> Result<(), ReportError> {
    let wrap = |source: std::io::Error| ReportError::Write {
        path: path.display().to_string(),
        source,
    };
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let mut tmp = match dir {
        Some(dir) => tempfile::NamedTempFile::new_in(dir),
        None => tempfile::NamedTempFile::new(),
    }
    .map_err(wrap)?;
    {
        let mut buffered = std::io::BufWriter::new(tmp.as_file_mut());
        fill(&mut buffered).map_err(wrap)?;
        buffered.flush().map_err(wrap)?;
    }
    tmp.persist(path).map_err(|e| wrap(e.error))?;
    Ok(())
}

/// Stream ranked rows to `path` as CSV without holding the rendered text in
/// memory; used by rank-all, whose reports can be large.
pub fn write_csv_rows_atomic(
    path: &Path,
    rows: impl IntoIterator<Item = ResultRow>,
) -> Result<(), ReportError> {
    write_atomic_with(path, |w| {
        writeln!(w, "{CSV_HEADER}")?;
        for row in rows {
            writeln!(w, "{}", csv_row(&row))?;
        }
        Ok(())
    })
}

/// Emit to a file (atomically) or stdout.
pub fn emit(content: &str, output: Option<&Path>) -> Result<(), ReportError> {
    match output {
        Some(path) => write_atomic(path, content),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(content.as_bytes())
                .and_then(|_| lock.flush())
                .map_err(ReportError::Stdout)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use upcycle_core::{solve_global, EconomicConfig, MetricKind};

    use crate::catalog::parse_fleet_csv;

    const CATALOG: &str = include_str!("../../../data/servers.csv");

    fn small_report() -> SolverReport {
        let fleet = parse_fleet_csv(CATALOG.as_bytes()).unwrap();
        let cfg = EconomicConfig {
            end_year: 2014,
            ..EconomicConfig::default()
        };
        solve_global(&fleet, &cfg, MetricKind::QpsPerTcoCo2, 5).unwrap()
    }

    #[test]
    fn sig10_fixed_point_ranges() {
        assert_eq!(fmt_sig10(0.0), "0.000000000");
        assert_eq!(fmt_sig10(1.0), "1.000000000");
        assert_eq!(fmt_sig10(-1.5), "-1.500000000");
        assert_eq!(fmt_sig10(113.88), "113.8800000");
        assert_eq!(fmt_sig10(9.454824), "9.454824000");
        assert_eq!(fmt_sig10(480978.3333333333), "480978.3333");
        assert_eq!(fmt_sig10(278441.0), "278441.0000");
        assert_eq!(fmt_sig10(0.04425959137134927), "0.04425959137");
        assert_eq!(fmt_sig10(1234567890.0), "1234567890");
        assert_eq!(fmt_sig10(0.0001), "0.0001000000000");
    }

    #[test]
    fn sig10_scientific_outside_everyday_magnitudes() {
        assert_eq!(fmt_sig10(12345678901.0), "1.234567890e10");
        assert_eq!(fmt_sig10(0.00001234), "1.234000000e-5");
        assert_eq!(fmt_sig10(-2.5e-17), "-2.500000000e-17");
    }

    #[test]
    fn sig10_rounding_can_promote_the_exponent() {
        assert_eq!(fmt_sig10(999.9999999999), "1000.000000");
        // Rounding pushes this just past the fixed-point window.
        assert_eq!(fmt_sig10(9.9999999999e9), "1.000000000e10");
    }

    #[test]
    fn csv_has_fixed_header_and_one_line_per_rank() {
        let report = small_report();
        let text = render_csv(&report).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 1 + report.ranked.len());
        assert!(lines[1].ends_with(",1"));
        assert!(lines
            .last()
            .unwrap()
            .ends_with(&format!(",{}", report.ranked.len())));
    }

    /// Plans embed commas, so rows must quote them to stay parseable CSV.
    #[test]
    fn csv_quotes_plan_field_and_parses_back() {
        let report = small_report();
        let text = render_csv(&report).unwrap();
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let records: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
        assert_eq!(records.len(), report.ranked.len());
        for (i, (record, eval)) in records.iter().zip(&report.ranked).enumerate() {
            assert_eq!(record.len(), CSV_HEADER.split(',').count());
            assert_eq!(&record[0], eval.plan.to_string());
            assert_eq!(record[12].parse::<usize>().unwrap(), i + 1);
        }
        assert_eq!(csv_field("A:2010"), "A:2010");
        assert_eq!(csv_field("A:2010,B:2011"), "\"A:2010,B:2011\"");
        assert_eq!(csv_field("od\"d"), "\"od\"\"d\"");
    }

    #[test]
    fn json_mirrors_rows_and_echoes_config() {
        let report = small_report();
        let text = render_json(&report).unwrap();
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["objective"], "qps-per-tco-co2");
        assert_eq!(value["total_plans"], serde_json::json!(report.total_plans));
        assert_eq!(value["config"]["end_year"], 2014);
        assert_eq!(value["config"]["energy_price_usd_per_kwh"], 0.10);
        let rows = value["rows"].as_array().unwrap();
        assert_eq!(rows.len(), report.ranked.len());
        assert_eq!(rows[0]["rank"], 1);
        assert_eq!(
            rows[0]["plan"].as_str().unwrap(),
            report.ranked[0].plan.to_string()
        );
        assert_eq!(rows[0]["qps"].as_f64().unwrap(), report.ranked[0].qps);
    }

    #[test]
    fn rendering_is_deterministic() {
        let a = render_csv(&small_report()).unwrap();
        let b = render_csv(&small_report()).unwrap();
        assert_eq!(a, b);
        let ja = render_json(&small_report()).unwrap();
        let jb = render_json(&small_report()).unwrap();
        assert_eq!(ja, jb);
    }

    #[test]
    fn atomic_write_replaces_content() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        write_atomic(&path, "first\n").unwrap();
        write_atomic(&path, "second\n").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "second\n");
    }
}
