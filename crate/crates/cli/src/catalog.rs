//! Reading and writing the server catalog CSV.
//!
//! The schema mirrors the catalog table shipped in `data/servers.csv`:
//! one row per server model, twenty columns, matched by header name.

use std::io;
use std::path::Path;

use thiserror::Error;
use upcycle_core::{Fleet, FleetError, ServerSpec};

/// Expected header, in canonical order. Parsing matches columns by name, so
/// reordered input is accepted; unknown columns are not.
pub const CATALOG_COLUMNS: [&str; 20] = [
    "Server",
    "Year",
    "#CPUs",
    "#DIMMS",
    "CPU_Cost",
    "DIMM_Price",
    "QPS",
    "Power",
    "Util.",
    "CI",
    "Nr",
    "Kr",
    "Yield",
    "Cifab",
    "EPA",
    "GPA",
    "MPA",
    "Area",
    "CPSDram",
    "CapDram",
];

/// Catalog entry years outside this range are almost certainly typos.
pub const ENTRY_YEAR_RANGE: (i32, i32) = (1990, 2100);

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("catalog has no header row")]
    MissingHeader,
    #[error("catalog has no data rows")]
    NoDataRows,
    #[error("catalog is missing column {0:?}")]
    MissingColumn(&'static str),
    #[error("catalog has unknown column {0:?}")]
    UnknownColumn(String),
    #[error("row {row}, column {column:?}: missing value")]
    MissingValue { row: usize, column: &'static str },
    #[error("row {row}, column {column:?}: cannot parse {value:?} as a number")]
    BadNumber {
        row: usize,
        column: &'static str,
        value: String,
    },
    #[error("row {row}, column {column:?}: {message}")]
    BadValue {
        row: usize,
        column: &'static str,
        message: String,
    },
    #[error("row {row}, column \"Year\": entry year {year} outside supported range [{}, {}]",
            ENTRY_YEAR_RANGE.0, ENTRY_YEAR_RANGE.1)]
    YearOutOfRange { row: usize, year: i32 },
    #[error("row {row}: duplicate server id {id:?}")]
    DuplicateId { row: usize, id: String },
    #[error(transparent)]
    Fleet(#[from] FleetError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
}

/// Map a `ServerSpec` field name back to its catalog column for error
/// reporting.
fn column_for_field(field: &str) -> &'static str {
    match field {
        "id" => "Server",
        "entry_year" => "Year",
        "cpu_count" => "#CPUs",
        "dimm_count" => "#DIMMS",
        "cpu_cost" => "CPU_Cost",
        "dimm_cost" => "DIMM_Price",
        "qps" => "QPS",
        "power_w" => "Power",
        "utilization_pct" => "Util.",
        "ci_op" => "CI",
        "nr_ics" => "Nr",
        "kr_packaging" => "Kr",
        "yield_fraction" => "Yield",
        "ci_fab" => "Cifab",
        "epa" => "EPA",
        "gpa" => "GPA",
        "mpa" => "MPA",
        "die_area_cm2" => "Area",
        "cps_dram" => "CPSDram",
        "cap_dram_gb" => "CapDram",
        _ => "Server",
    }
}

struct ColumnIndex {
    by_column: [usize; 20],
}

impl ColumnIndex {
    fn from_headers(headers: &csv::StringRecord) -> Result<Self, CatalogError> {
        for name in headers.iter() {
            let name = name.trim();
            if !CATALOG_COLUMNS.contains(&name) {
                return Err(CatalogError::UnknownColumn(name.to_string()));
            }
        }
        let mut by_column = [0usize; 20];
        for (slot, column) in CATALOG_COLUMNS.iter().enumerate() {
            let index = headers
                .iter()
                .position(|h| h.trim() == *column)
                .ok_or(CatalogError::MissingColumn(column))?;
            by_column[slot] = index;
        }
        Ok(ColumnIndex { by_column })
    }

    fn get<'r>(
        &self,
        record: &'r csv::StringRecord,
        row: usize,
        column: &'static str,
    ) -> Result<&'r str, CatalogError> {
        let slot = CATALOG_COLUMNS
            .iter()
            .position(|c| *c == column)
            .expect("known column");
        let value = record
            .get(self.by_column[slot])
            .map(str::trim)
            .unwrap_or("");
        if value.is_empty() {
            return Err(CatalogError::MissingValue { row, column });
        }
        Ok(value)
    }
}

fn parse_f64(
    index: &ColumnIndex,
    record: &csv::StringRecord,
    row: usize,
    column: &'static str,
) -> Result<f64, CatalogError> {
    let value = index.get(record, row, column)?;
    value.parse::<f64>().map_err(|_| CatalogError::BadNumber {
        row,
        column,
        value: value.to_string(),
    })
}

fn parse_u32(
    index: &ColumnIndex,
    record: &csv::StringRecord,
    row: usize,
    column: &'static str,
) -> Result<u32, CatalogError> {
    let value = index.get(record, row, column)?;
    value.parse::<u32>().map_err(|_| CatalogError::BadNumber {
        row,
        column,
        value: value.to_string(),
    })
}

fn parse_i32(
    index: &ColumnIndex,
    record: &csv::StringRecord,
    row: usize,
    column: &'static str,
) -> Result<i32, CatalogError> {
    let value = index.get(record, row, column)?;
    value.parse::<i32>().map_err(|_| CatalogError::BadNumber {
        row,
        column,
        value: value.to_string(),
    })
}

/// Parse a catalog from CSV. Rows are reported 1-based (the first data row
/// is row 1).
pub fn parse_fleet_csv<R: io::Read>(reader: R) -> Result<Fleet, CatalogError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = reader.headers().map_err(|_| CatalogError::MissingHeader)?;
    if headers.is_empty() || (headers.len() == 1 && headers.get(0) == Some("")) {
        return Err(CatalogError::MissingHeader);
    }
    let index = ColumnIndex::from_headers(headers)?;

    let mut servers: Vec<ServerSpec> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record?;
        let spec = ServerSpec {
            id: index.get(&record, row, "Server")?.to_string(),
            entry_year: parse_i32(&index, &record, row, "Year")?,
            cpu_count: parse_u32(&index, &record, row, "#CPUs")?,
            dimm_count: parse_u32(&index, &record, row, "#DIMMS")?,
            cpu_cost: parse_f64(&index, &record, row, "CPU_Cost")?,
            dimm_cost: parse_f64(&index, &record, row, "DIMM_Price")?,
            qps: parse_f64(&index, &record, row, "QPS")?,
            power_w: parse_f64(&index, &record, row, "Power")?,
            utilization_pct: parse_f64(&index, &record, row, "Util.")?,
            ci_op: parse_f64(&index, &record, row, "CI")?,
            nr_ics: parse_u32(&index, &record, row, "Nr")?,
            kr_packaging: parse_f64(&index, &record, row, "Kr")?,
            yield_fraction: parse_f64(&index, &record, row, "Yield")?,
            ci_fab: parse_f64(&index, &record, row, "Cifab")?,
            epa: parse_f64(&index, &record, row, "EPA")?,
            gpa: parse_f64(&index, &record, row, "GPA")?,
            mpa: parse_f64(&index, &record, row, "MPA")?,
            die_area_cm2: parse_f64(&index, &record, row, "Area")?,
            cps_dram: parse_f64(&index, &record, row, "CPSDram")?,
            cap_dram_gb: parse_f64(&index, &record, row, "CapDram")?,
        };
        if spec.entry_year < ENTRY_YEAR_RANGE.0 || spec.entry_year > ENTRY_YEAR_RANGE.1 {
            return Err(CatalogError::YearOutOfRange {
                row,
                year: spec.entry_year,
            });
        }
        if let Some(error) = spec.field_errors().into_iter().next() {
            return Err(CatalogError::BadValue {
                row,
                column: column_for_field(error.field),
                message: error.message,
            });
        }
        if servers.iter().any(|s| s.id == spec.id) {
            return Err(CatalogError::DuplicateId { row, id: spec.id });
        }
        servers.push(spec);
    }
    if servers.is_empty() {
        return Err(CatalogError::NoDataRows);
    }
    Ok(Fleet::new(servers)?)
}

pub fn parse_fleet_csv_path(path: &Path) -> Result<Fleet, CatalogError> {
    let file = std::fs::File::open(path).map_err(|source| CatalogError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_fleet_csv(io::BufReader::new(file))
}

/// Render a fleet back to catalog CSV, canonical column order. Numbers use
/// Rust's shortest round-trip float formatting, so parse(write(fleet))
/// reproduces the fleet exactly.
pub fn write_fleet_csv(fleet: &Fleet) -> String {
    let mut out = String::new();
    out.push_str(&CATALOG_COLUMNS.join(","));
    out.push('\n');
    for s in fleet.servers() {
        let fields: [String; 20] = [
            s.id.clone(),
            s.entry_year.to_string(),
            s.cpu_count.to_string(),
            s.dimm_count.to_string(),
            s.cpu_cost.to_string(),
            s.dimm_cost.to_string(),
            s.qps.to_string(),
            s.power_w.to_string(),
            s.utilization_pct.to_string(),
            s.ci_op.to_string(),
            s.nr_ics.to_string(),
            s.kr_packaging.to_string(),
            s.yield_fraction.to_string(),
            s.ci_fab.to_string(),
            s.epa.to_string(),
            s.gpa.to_string(),
            s.mpa.to_string(),
            s.die_area_cm2.to_string(),
            s.cps_dram.to_string(),
            s.cap_dram_gb.to_string(),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}
