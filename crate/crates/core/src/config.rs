use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Economic and horizon parameters shared by every evaluation and solve.
#[derive(Debug, Clone, PartialEq)]
pub struct EconomicConfig {
    /// First year of the depreciation horizon (inclusive).
    pub start_year: i32,
    /// Last year of the horizon (exclusive): a plan covers `[start_year, end_year)`.
    pub end_year: i32,
    /// Electricity price in currency per kWh.
    pub energy_price: f64,
    /// Powered-on hours per calendar year.
    pub hours_per_year: f64,
    /// Server whose single-segment plan anchors normalized metrics.
    pub baseline_server_id: String,
}

impl Default for EconomicConfig {
    fn default() -> Self {
        EconomicConfig {
            start_year: 2010,
            end_year: 2022,
            energy_price: 0.10,
            hours_per_year: 8760.0,
            baseline_server_id: "A".to_string(),
        }
    }
}

impl EconomicConfig {
    /// Number of years covered by the horizon. Call `validate` first; this
    /// saturates to zero rather than going negative.
    pub fn horizon_years(&self) -> u32 {
        if self.end_year > self.start_year {
            (self.end_year - self.start_year) as u32
        } else {
            0
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.end_year <= self.start_year {
            return Err(ConfigError::EmptyHorizon {
                start: self.start_year,
                end: self.end_year,
            });
        }
        if !self.energy_price.is_finite() || self.energy_price < 0.0 {
            return Err(ConfigError::BadEnergyPrice(self.energy_price));
        }
        if !self.hours_per_year.is_finite() || self.hours_per_year <= 0.0 {
            return Err(ConfigError::BadHoursPerYear(self.hours_per_year));
        }
        if self.baseline_server_id.is_empty() {
            return Err(ConfigError::EmptyBaselineId);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("end_year ({end}) must be strictly after start_year ({start})")]
    EmptyHorizon { start: i32, end: i32 },
    #[error("energy_price must be finite and non-negative, got {0}")]
    BadEnergyPrice(f64),
    #[error("hours_per_year must be finite and positive, got {0}")]
    BadHoursPerYear(f64),
    #[error("baseline_server_id must not be empty")]
    EmptyBaselineId,
}

/// Ratio objective used for ranking plans.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MetricKind {
    /// Throughput per dollar of total cost of ownership.
    QpsPerTco,
    /// Throughput per kg of CO2 (embodied + operational).
    QpsPerCo2,
    /// Throughput per (dollar x kg CO2); the headline combined objective.
    QpsPerTcoCo2,
}

impl MetricKind {
    pub const ALL: [MetricKind; 3] = [
        MetricKind::QpsPerTco,
        MetricKind::QpsPerCo2,
        MetricKind::QpsPerTcoCo2,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MetricKind::QpsPerTco => "qps-per-tco",
            MetricKind::QpsPerCo2 => "qps-per-co2",
            MetricKind::QpsPerTcoCo2 => "qps-per-tco-co2",
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("unknown metric {0:?} (expected qps-per-tco, qps-per-co2, or qps-per-tco-co2)")]
pub struct ParseMetricError(pub String);

impl FromStr for MetricKind {
    type Err = ParseMetricError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "qps-per-tco" => Ok(MetricKind::QpsPerTco),
            "qps-per-co2" => Ok(MetricKind::QpsPerCo2),
            "qps-per-tco-co2" => Ok(MetricKind::QpsPerTcoCo2),
            other => Err(ParseMetricError(other.to_string())),
        }
    }
}
