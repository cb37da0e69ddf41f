use std::fmt;

use thiserror::Error;

/// One server model from the catalog: purchase cost, power draw, throughput,
/// and the manufacturing-carbon parameters used for embodied CO2.
#[derive(Debug, Clone, PartialEq)]
pub struct ServerSpec {
    /// Catalog identifier, unique within a fleet.
    pub id: String,
    /// First year the model can be purchased.
    pub entry_year: i32,
    pub cpu_count: u32,
    pub dimm_count: u32,
    /// Cost per CPU (currency).
    pub cpu_cost: f64,
    /// Cost per DIMM (currency).
    pub dimm_cost: f64,
    /// Sustained queries per second for the whole server.
    pub qps: f64,
    /// Wall power in watts at the modeled utilization.
    pub power_w: f64,
    /// Modeled utilization in percent (kept for catalog fidelity).
    pub utilization_pct: f64,
    /// Operational carbon intensity of the grid, kgCO2 per kWh.
    pub ci_op: f64,
    /// Number of packaged ICs per CPU.
    pub nr_ics: u32,
    /// Packaging overhead per IC, kgCO2.
    pub kr_packaging: f64,
    /// Fab yield as a fraction in (0, 1].
    pub yield_fraction: f64,
    /// Carbon intensity of the fab's energy, kgCO2 per kWh.
    pub ci_fab: f64,
    /// Fab energy per die area, kWh per cm^2.
    pub epa: f64,
    /// Direct fab gas emissions per die area, kgCO2 per cm^2.
    pub gpa: f64,
    /// Material footprint per die area, kgCO2 per cm^2.
    pub mpa: f64,
    /// Die area per CPU, cm^2.
    pub die_area_cm2: f64,
    /// DRAM carbon per GB, kgCO2.
    pub cps_dram: f64,
    /// DRAM capacity per DIMM, GB.
    pub cap_dram_gb: f64,
}

/// A single out-of-range field on a `ServerSpec`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldError {
    /// `ServerSpec` field name.
    pub field: &'static str,
    pub message: String,
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

impl ServerSpec {
    /// All field-level problems with this spec; empty means usable.
    pub fn field_errors(&self) -> Vec<FieldError> {
        let mut errors = Vec::new();
        let mut bad = |field: &'static str, message: String| {
            errors.push(FieldError { field, message });
        };

        if self.id.is_empty() {
            bad("id", "must not be empty".to_string());
        }
        if self.cpu_count == 0 {
            bad("cpu_count", "must be at least 1".to_string());
        }
        let positive = [("qps", self.qps), ("power_w", self.power_w)];
        for (field, value) in positive {
            if !value.is_finite() || value <= 0.0 {
                bad(field, format!("must be finite and positive, got {value}"));
            }
        }
        let non_negative = [
            ("cpu_cost", self.cpu_cost),
            ("dimm_cost", self.dimm_cost),
            ("utilization_pct", self.utilization_pct),
            ("ci_op", self.ci_op),
            ("kr_packaging", self.kr_packaging),
            ("ci_fab", self.ci_fab),
            ("epa", self.epa),
            ("gpa", self.gpa),
            ("mpa", self.mpa),
            ("die_area_cm2", self.die_area_cm2),
            ("cps_dram", self.cps_dram),
            ("cap_dram_gb", self.cap_dram_gb),
        ];
        for (field, value) in non_negative {
            if !value.is_finite() || value < 0.0 {
                bad(
                    field,
                    format!("must be finite and non-negative, got {value}"),
                );
            }
        }
        if !self.yield_fraction.is_finite()
            || self.yield_fraction <= 0.0
            || self.yield_fraction > 1.0
        {
            bad(
                "yield_fraction",
                format!("must be in (0, 1], got {}", self.yield_fraction),
            );
        }
        errors
    }
}

/// The server catalog, held sorted by `(entry_year, id)` with unique ids.
///
/// The sort order is what makes availability queries a prefix: every server
/// in `servers()[..available_count(y)]` has `entry_year <= y`.
#[derive(Debug, Clone, PartialEq)]
pub struct Fleet {
    servers: Vec<ServerSpec>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FleetError {
    #[error("fleet must contain at least one server")]
    Empty,
    #[error("duplicate server id {0:?}")]
    DuplicateId(String),
    #[error("server {id:?}: {error}")]
    InvalidServer { id: String, error: FieldError },
}

impl Fleet {
    pub fn new(mut servers: Vec<ServerSpec>) -> Result<Self, FleetError> {
        if servers.is_empty() {
            return Err(FleetError::Empty);
        }
        for server in &servers {
            if let Some(error) = server.field_errors().into_iter().next() {
                return Err(FleetError::InvalidServer {
                    id: server.id.clone(),
                    error,
                });
            }
        }
        servers.sort_by(|a, b| {
            a.entry_year
                .cmp(&b.entry_year)
                .then_with(|| a.id.cmp(&b.id))
        });
        // Equal ids with different entry years don't sort adjacently, so
        // check uniqueness on an id-sorted view rather than with windows().
        let mut ids: Vec<&str> = servers.iter().map(|s| s.id.as_str()).collect();
        ids.sort_unstable();
        for pair in ids.windows(2) {
            if pair[0] == pair[1] {
                return Err(FleetError::DuplicateId(pair[0].to_string()));
            }
        }
        Ok(Fleet { servers })
    }

    /// Servers sorted by `(entry_year, id)`.
    pub fn servers(&self) -> &[ServerSpec] {
        &self.servers
    }

    pub fn len(&self) -> usize {
        self.servers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.servers.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&ServerSpec> {
        self.servers.iter().find(|s| s.id == id)
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.servers.iter().position(|s| s.id == id)
    }

    /// How many servers are purchasable in `year`; because of the sort order
    /// they are exactly `servers()[..count]`.
    pub fn available_count(&self, year: i32) -> usize {
        self.servers.partition_point(|s| s.entry_year <= year)
    }
}
